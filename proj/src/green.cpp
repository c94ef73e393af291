#include "caskit/green.hpp"

#include <cmath>

namespace caskit::green {

namespace {

constexpr double kHalfPi = 1.5707963267948966;

complex eps_at(const dielectric::PermittivityModel& m, const SpectralPoint& p) {
    if (p.axis == Axis::Real) return dielectric::eps_real_axis(m, p.frequency);
    return {dielectric::eps_imag_axis(m, p.frequency), 0.0};
}

// Per-(xi, k) state on the imaginary axis.  Everything is real there.
struct ImagState {
    double k;
    double kt1, kt2, kt3;
    double rte1, rte2, rtm1, rtm2;
    double Dte, Dtm;
    double q; // e^{-2 kt3 d}
};

struct ImagContext {
    double xi, e1, e2, e3, d;

    ImagState at(double k) const {
        ImagState s;
        const double k2 = k * k, x2 = xi * xi;
        s.k = k;
        if (xi == 0.0) {
            // xi -> 0 limits: xi^2 eps -> 0 for every supported model (the
            // Drude eps ~ 1/xi divergence is milder), so kt_j -> k, the te
            // reflection vanishes and the tm one becomes the static ratio.
            s.kt1 = s.kt2 = s.kt3 = k;
            s.rte1 = s.rte2 = 0.0;
            s.rtm1 = std::isinf(e1) ? 1.0 : (e1 - e3) / (e1 + e3);
            s.rtm2 = std::isinf(e2) ? 1.0 : (e2 - e3) / (e2 + e3);
        } else {
            s.kt1 = std::sqrt(e1 * x2 + k2);
            s.kt2 = std::sqrt(e2 * x2 + k2);
            s.kt3 = std::sqrt(e3 * x2 + k2);
            // cancellation-free numerators: kt3^2 - ktj^2 = (e3 - ej) xi^2
            s.rte1 = (e3 - e1) * x2 / ((s.kt3 + s.kt1) * (s.kt3 + s.kt1));
            s.rte2 = (e3 - e2) * x2 / ((s.kt3 + s.kt2) * (s.kt3 + s.kt2));
            const double d1 = e1 * s.kt3 + e3 * s.kt1;
            const double d2 = e2 * s.kt3 + e3 * s.kt2;
            s.rtm1 = (e1 - e3) * (e1 * e3 * x2 + k2 * (e1 + e3)) / (d1 * d1);
            s.rtm2 = (e2 - e3) * (e2 * e3 * x2 + k2 * (e2 + e3)) / (d2 * d2);
        }
        s.q = std::exp(-2.0 * s.kt3 * d);
        s.Dte = 1.0 - s.rte1 * s.rte2 * s.q;
        s.Dtm = 1.0 - s.rtm1 * s.rtm2 * s.q;
        return s;
    }
};

enum class Region { Below, Gap, Above };

struct Place {
    Region region;
    double z;
};

Place resolve_place(const PlanarStack& stack, double z, BoundarySide side, TracePart part) {
    const double d = stack.gap;
    const bool on0 = (z == 0.0), ond = (z == d);
    if (on0 || ond) {
        if (side == BoundarySide::Auto)
            throw std::invalid_argument(
                "planar trace: z lies on an interface; an explicit side tag is required");
        if (part != TracePart::Interaction)
            throw std::invalid_argument(
                "planar trace: one-sided interface limits exist only for the interaction part");
        if (on0) return {side == BoundarySide::Minus ? Region::Below : Region::Gap, 0.0};
        return {side == BoundarySide::Minus ? Region::Gap : Region::Above, d};
    }
    if (z < 0.0) return {Region::Below, z};
    if (z > d) return {Region::Above, z};
    return {Region::Gap, z};
}

// Gap integrand Phi such that xi^2 Tr G = -(1/e3) Int (k/kt3) Phi dk.
double phi_gap_imag(const ImagState& s, double xi, double e3, double z, double d, TracePart part) {
    const double E0 = std::exp(-2.0 * s.kt3 * z);
    const double Ed = std::exp(-2.0 * s.kt3 * (d - z));
    const double kt3sq = s.kt3 * s.kt3;
    const double x2e3 = xi * xi * e3;
    double btm_minus, bte, btm_plus;
    if (part == TracePart::Scattering) {
        btm_minus = (2.0 * s.rtm1 * s.rtm2 * s.q - s.rtm1 * E0 - s.rtm2 * Ed) / s.Dtm;
        bte = (2.0 * s.rte1 * s.rte2 * s.q + s.rte1 * E0 + s.rte2 * Ed) / s.Dte;
        btm_plus = (2.0 * s.rtm1 * s.rtm2 * s.q + s.rtm1 * E0 + s.rtm2 * Ed) / s.Dtm;
    } else {
        const double ctm = s.rtm1 * s.rtm2 * s.q;
        const double cte = s.rte1 * s.rte2 * s.q;
        btm_minus = ctm * (2.0 - s.rtm1 * E0 - s.rtm2 * Ed) / s.Dtm;
        bte = cte * (2.0 + s.rte1 * E0 + s.rte2 * Ed) / s.Dte;
        btm_plus = ctm * (2.0 + s.rtm1 * E0 + s.rtm2 * Ed) / s.Dtm;
    }
    return -kt3sq * btm_minus - x2e3 * bte + s.k * s.k * btm_plus;
}

// Outer-region integrand: xi^2 Tr G = -(1/e_out) Int (k/kt_out) Phi dk with
// Phi = [(kt_out^2 + k^2) R_tm - xi^2 e_out R_te] e^{-2 kt_out depth}.
double phi_outer_imag(const ImagState& s, double xi, double e_out, double kt_out, double depth,
                      bool below, TracePart part) {
    const double Ez = std::exp(-2.0 * kt_out * depth);
    const double rte_n = below ? s.rte1 : s.rte2;
    const double rtm_n = below ? s.rtm1 : s.rtm2;
    const double rte_f = below ? s.rte2 : s.rte1;
    const double rtm_f = below ? s.rtm2 : s.rtm1;
    double Rte, Rtm;
    if (part == TracePart::Scattering) {
        Rte = (-rte_n + rte_f * s.q) / s.Dte;
        Rtm = (-rtm_n + rtm_f * s.q) / s.Dtm;
    } else {
        Rte = rte_f * s.q * (1.0 - rte_n * rte_n) / s.Dte;
        Rtm = rtm_f * s.q * (1.0 - rtm_n * rtm_n) / s.Dtm;
    }
    return ((kt_out * kt_out + s.k * s.k) * Rtm - xi * xi * e_out * Rte) * Ez;
}

// Marches the k integral in the variable t = 2 kt3 * ell, where ell is the
// decay length of the integrand; k dk / kt3 = dt / (2 ell).
double integrate_k_imag(const ImagContext& ctx, double ell,
                        const std::function<double(const ImagState&)>& f,
                        const quad::QuadratureSpec& spec, double* err_out) {
    const double t0 = 2.0 * ell * std::sqrt(ctx.e3) * ctx.xi;
    auto g = [&](double t) {
        const double kt3 = t / (2.0 * ell);
        const double k2 = kt3 * kt3 - ctx.e3 * ctx.xi * ctx.xi;
        const double k = k2 > 0.0 ? std::sqrt(k2) : 0.0;
        return f(ctx.at(k));
    };
    const auto r = quad::integrate_exp_decay(g, t0, 3.0, spec);
    if (err_out) *err_out = r.error / (2.0 * ell);
    return r.value / (2.0 * ell);
}

// Weighted trace xi^2 Tr G on the imaginary axis for a resolved place.
double weighted_trace_imag(const PlanarStack& stack, const Place& place, double xi,
                           const quad::QuadratureSpec& spec, TracePart part, double* err_out) {
    ImagContext ctx;
    ctx.xi = xi;
    ctx.e1 = dielectric::eps_imag_axis(stack.eps1, xi);
    ctx.e2 = dielectric::eps_imag_axis(stack.eps2, xi);
    ctx.e3 = dielectric::eps_imag_axis(stack.eps3, xi);
    ctx.d = stack.gap;
    if (std::isinf(ctx.e3))
        throw std::invalid_argument("planar trace: gap medium permittivity diverges at xi = 0");
    const double d = stack.gap;

    if (place.region == Region::Gap) {
        const double z = place.z;
        double ell;
        if (part == TracePart::Interaction) {
            ell = d; // every term carries at least e^{-2 kt3 d}
        } else {
            ell = std::min(std::min(z, d - z), d);
            if (!(ell > 0.0))
                throw std::invalid_argument("planar trace: scattering part diverges on interfaces");
        }
        auto f = [&](const ImagState& s) { return phi_gap_imag(s, xi, ctx.e3, z, d, part); };
        double err = 0.0;
        const double val = -integrate_k_imag(ctx, ell, f, spec, &err) / ctx.e3;
        if (err_out) *err_out = err / ctx.e3;
        return val;
    }

    const bool below = place.region == Region::Below;
    const double depth = below ? -place.z : place.z - d;
    const double e_out = below ? ctx.e1 : ctx.e2;
    if (std::isinf(e_out)) {
        if (err_out) *err_out = 0.0;
        return 0.0; // conductor limit at xi = 0: fields expelled
    }
    // kt_out >= kt3 * min(1, sqrt(e_out/e3)); fold that into the decay length.
    const double ratio = std::sqrt(std::min(1.0, e_out / ctx.e3));
    double ell = (part == TracePart::Interaction) ? (d + depth * ratio) : depth * ratio;
    if (!(ell > 0.0))
        throw std::invalid_argument("planar trace: scattering part diverges on interfaces");
    auto f = [&](const ImagState& s) {
        const double kt_out = below ? s.kt1 : s.kt2;
        return phi_outer_imag(s, xi, e_out, kt_out, depth, below, part) * (s.kt3 / kt_out);
    };
    double err = 0.0;
    const double val = -integrate_k_imag(ctx, ell, f, spec, &err) / e_out;
    if (err_out) *err_out = err / e_out;
    return val;
}

// ---------------------------------------------------------------------------
// Real-axis (validation mode) machinery.  Quantities are complex; the k
// integral is split at the gap branch point into propagating and evanescent
// sectors.

struct RealState {
    double k;
    complex kap1, kap2, kap3;
    complex rte1, rte2, rtm1, rtm2;
    complex Dte, Dtm;
    complex ph; // e^{2 i kappa3 d}
};

struct RealContext {
    double w, d;
    complex e1, e2, e3;

    RealState at(double k) const {
        RealState s;
        s.k = k;
        const double k2 = k * k, w2 = w * w;
        auto kap = [&](complex e) {
            complex v = std::sqrt(e * w2 - k2);
            if (v.imag() < 0.0) v = -v;
            if (v.imag() == 0.0 && v.real() < 0.0) v = -v;
            return v;
        };
        s.kap1 = kap(e1);
        s.kap2 = kap(e2);
        s.kap3 = kap(e3);
        // cancellation-free numerators (kap3^2 - kapj^2 = (e3 - ej) w^2)
        s.rte1 = (e3 - e1) * w2 / ((s.kap3 + s.kap1) * (s.kap3 + s.kap1));
        s.rte2 = (e3 - e2) * w2 / ((s.kap3 + s.kap2) * (s.kap3 + s.kap2));
        const complex d1 = e1 * s.kap3 + e3 * s.kap1;
        const complex d2 = e2 * s.kap3 + e3 * s.kap2;
        s.rtm1 = (e1 - e3) * (e1 * e3 * w2 - k2 * (e1 + e3)) / (d1 * d1);
        s.rtm2 = (e2 - e3) * (e2 * e3 * w2 - k2 * (e2 + e3)) / (d2 * d2);
        s.ph = std::exp(complex{0.0, 2.0} * s.kap3 * d);
        s.Dte = 1.0 - s.rte1 * s.rte2 * s.ph;
        s.Dtm = 1.0 - s.rtm1 * s.rtm2 * s.ph;
        return s;
    }
};

complex phi_gap_real(const RealState& s, const RealContext& ctx, double z, TracePart part) {
    const complex i2{0.0, 2.0};
    const complex E0 = std::exp(i2 * s.kap3 * z);
    const complex Ed = std::exp(i2 * s.kap3 * (ctx.d - z));
    complex btm_minus, bte, btm_plus;
    if (part == TracePart::Scattering) {
        btm_minus = (2.0 * s.rtm1 * s.rtm2 * s.ph - s.rtm1 * E0 - s.rtm2 * Ed) / s.Dtm;
        bte = (2.0 * s.rte1 * s.rte2 * s.ph + s.rte1 * E0 + s.rte2 * Ed) / s.Dte;
        btm_plus = (2.0 * s.rtm1 * s.rtm2 * s.ph + s.rtm1 * E0 + s.rtm2 * Ed) / s.Dtm;
    } else {
        const complex ctm = s.rtm1 * s.rtm2 * s.ph;
        const complex cte = s.rte1 * s.rte2 * s.ph;
        btm_minus = ctm * (2.0 - s.rtm1 * E0 - s.rtm2 * Ed) / s.Dtm;
        bte = cte * (2.0 + s.rte1 * E0 + s.rte2 * Ed) / s.Dte;
        btm_plus = ctm * (2.0 + s.rtm1 * E0 + s.rtm2 * Ed) / s.Dtm;
    }
    const double w = ctx.w;
    return s.kap3 * s.kap3 * btm_minus + w * w * ctx.e3 * bte + s.k * s.k * btm_plus;
}

complex phi_outer_real(const RealState& s, const RealContext& ctx, double depth, bool below,
                       TracePart part) {
    const complex kap_out = below ? s.kap1 : s.kap2;
    const complex e_out = below ? ctx.e1 : ctx.e2;
    const complex Ez = std::exp(complex{0.0, 2.0} * kap_out * depth);
    const complex rte_n = below ? s.rte1 : s.rte2;
    const complex rtm_n = below ? s.rtm1 : s.rtm2;
    const complex rte_f = below ? s.rte2 : s.rte1;
    const complex rtm_f = below ? s.rtm2 : s.rtm1;
    complex Rte, Rtm;
    if (part == TracePart::Scattering) {
        Rte = (-rte_n + rte_f * s.ph) / s.Dte;
        Rtm = (-rtm_n + rtm_f * s.ph) / s.Dtm;
    } else {
        Rte = rte_f * s.ph * (1.0 - rte_n * rte_n) / s.Dte;
        Rtm = rtm_f * s.ph * (1.0 - rtm_n * rtm_n) / s.Dtm;
    }
    return ((-kap_out * kap_out + s.k * s.k) * Rtm + ctx.w * ctx.w * e_out * Rte) * Ez;
}

complex trace_real_axis(const PlanarStack& stack, const Place& place, double w,
                        const quad::QuadratureSpec& spec, TracePart part) {
    RealContext ctx;
    ctx.w = w;
    ctx.d = stack.gap;
    ctx.e1 = dielectric::eps_real_axis(stack.eps1, w);
    ctx.e2 = dielectric::eps_real_axis(stack.eps2, w);
    ctx.e3 = dielectric::eps_real_axis(stack.eps3, w);
    if (ctx.e1.imag() == 0.0 && ctx.e2.imag() == 0.0 && ctx.e3.imag() == 0.0)
        throw std::invalid_argument(
            "planar trace on the real axis requires absorption in at least one medium");

    double decay;
    std::function<complex(const RealState&)> f;
    complex pref;
    if (place.region == Region::Gap) {
        const double z = place.z;
        decay = (part == TracePart::Interaction) ? ctx.d : std::min({z, ctx.d - z, ctx.d});
        f = [&, z](const RealState& s) { return phi_gap_real(s, ctx, z, part) / s.kap3; };
        pref = complex{0.0, 1.0} / (w * w * ctx.e3);
    } else {
        const bool below = place.region == Region::Below;
        const double depth = below ? -place.z : place.z - ctx.d;
        decay = (part == TracePart::Interaction) ? ctx.d + depth : depth;
        f = [&, depth, below](const RealState& s) {
            const complex kap_out = below ? s.kap1 : s.kap2;
            return phi_outer_real(s, ctx, depth, below, part) / kap_out;
        };
        pref = complex{0.0, 1.0} / (w * w * (below ? ctx.e1 : ctx.e2));
    }
    if (!(decay > 0.0))
        throw std::invalid_argument("planar trace: scattering part diverges on interfaces");

    // Branch-point-aware maps: k = k_b sin(theta) in the propagating sector,
    // k = k_b cosh(u) in the evanescent one, where the integrand decays like
    // e^{-2 k_b sinh(u) decay}.
    const double k_branch = std::sqrt(std::sqrt(std::norm(ctx.e3))) * w;
    auto value_at = [&](double k) { return f(ctx.at(k)) * k; };
    auto prop = [&](double theta) {
        const double k = k_branch * std::sin(theta);
        return value_at(k) * k_branch * std::cos(theta);
    };
    auto prop_re = [&](double th) { return prop(th).real(); };
    auto prop_im = [&](double th) { return prop(th).imag(); };
    const auto pr = quad::integrate(prop_re, 0.0, kHalfPi, spec);
    const auto pi = quad::integrate(prop_im, 0.0, kHalfPi, spec);
    auto evan = [&](double u) {
        const double k = k_branch * std::cosh(u);
        return value_at(k) * k_branch * std::sinh(u);
    };
    auto evan_re = [&](double u) { return evan(u).real(); };
    auto evan_im = [&](double u) { return evan(u).imag(); };
    const auto tr = quad::integrate_exp_decay(evan_re, 0.0, 2.0, spec);
    const auto ti = quad::integrate_exp_decay(evan_im, 0.0, 2.0, spec);
    return pref * complex{pr.value + tr.value, pi.value + ti.value};
}

} // namespace

complex kappa(complex eps, const SpectralPoint& point) {
    point.validate();
    const double w = point.frequency, k = point.k_par;
    if (point.axis == Axis::Imaginary)
        return {std::sqrt(eps.real() * w * w + k * k), 0.0};
    complex v = std::sqrt(eps * w * w - k * k);
    if (v.imag() < 0.0) v = -v;
    if (v.imag() == 0.0 && v.real() < 0.0) v = -v;
    return v;
}

complex fresnel(Polarization pol, int j, const PlanarStack& stack, const SpectralPoint& point) {
    if (j != 1 && j != 2) throw std::invalid_argument("fresnel: j must be 1 or 2");
    stack.validate();
    const auto& med = (j == 1) ? stack.eps1 : stack.eps2;
    const complex ej = eps_at(med, point);
    const complex e3 = eps_at(stack.eps3, point);
    const complex kj = kappa(ej, point);
    const complex k3 = kappa(e3, point);
    // numerators written through eps differences: exact zero for identical
    // media and full precision for weak contrasts
    const double w2 = point.frequency * point.frequency;
    const double k2 = point.k_par * point.k_par;
    const double sgn = (point.axis == Axis::Imaginary) ? 1.0 : -1.0; // k^2 sign under rotation
    if (pol == Polarization::TE) return (e3 - ej) * w2 / ((k3 + kj) * (k3 + kj));
    const complex den = ej * k3 + e3 * kj;
    return (ej - e3) * (ej * e3 * w2 + sgn * k2 * (ej + e3)) / (den * den);
}

ReflectionSet multiple_reflection(const PlanarStack& stack, const SpectralPoint& point) {
    stack.validate();
    ReflectionSet rs;
    rs.r1_te = fresnel(Polarization::TE, 1, stack, point);
    rs.r2_te = fresnel(Polarization::TE, 2, stack, point);
    rs.r1_tm = fresnel(Polarization::TM, 1, stack, point);
    rs.r2_tm = fresnel(Polarization::TM, 2, stack, point);
    const complex k3 = kappa(eps_at(stack.eps3, point), point);
    rs.phase = (point.axis == Axis::Imaginary)
                   ? complex{std::exp(-2.0 * k3.real() * stack.gap), 0.0}
                   : std::exp(complex{0.0, 2.0} * k3 * stack.gap);
    rs.D_te = 1.0 - rs.r1_te * rs.r2_te * rs.phase;
    rs.D_tm = 1.0 - rs.r1_tm * rs.r2_tm * rs.phase;
    if (std::abs(rs.D_te) < 1e-14 || std::abs(rs.D_tm) < 1e-14)
        throw std::runtime_error("multiple_reflection: degenerate denominator");
    rs.R1_te = (-rs.r1_te + rs.r2_te * rs.phase) / rs.D_te;
    rs.R1_tm = (-rs.r1_tm + rs.r2_tm * rs.phase) / rs.D_tm;
    rs.R2_te = (-rs.r2_te + rs.r1_te * rs.phase) / rs.D_te;
    rs.R2_tm = (-rs.r2_tm + rs.r1_tm * rs.phase) / rs.D_tm;
    return rs;
}

GreenTrace homogeneous_green_trace(complex eps, double omega) {
    if (!(omega > 0.0)) throw std::invalid_argument("homogeneous_green_trace: omega must be > 0");
    complex n = std::sqrt(eps);
    if (n.real() < 0.0) n = -n;
    return GreenTrace{-2.0 * n.imag() * omega, 2.0 * n.real() * omega};
}

Eigen::Matrix3cd free_space_dyadic(const Eigen::Vector3d& r, const Eigen::Vector3d& rp,
                                   complex omega) {
    const Eigen::Vector3d dvec = r - rp;
    const double R = dvec.norm();
    if (R == 0.0) throw std::invalid_argument("free_space_dyadic: coincident points");
    const Eigen::Vector3d u = dvec / R;
    const complex kR = omega * R;
    const complex phase = std::exp(complex{0.0, 1.0} * kR);
    const complex a = kR * kR + complex{0.0, 1.0} * kR - 1.0;
    const complex b = kR * kR + complex{0.0, 3.0} * kR - 3.0;
    Eigen::Matrix3cd G;
    const double R3 = R * R * R;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const double delta = (i == j) ? 1.0 : 0.0;
            G(i, j) = (a * delta - b * u[i] * u[j]) * phase / R3;
        }
    return G;
}

Eigen::Matrix3d free_space_dyadic_imag(const Eigen::Vector3d& r, const Eigen::Vector3d& rp,
                                       double xi) {
    const Eigen::Vector3d dvec = r - rp;
    const double R = dvec.norm();
    if (R == 0.0) throw std::invalid_argument("free_space_dyadic: coincident points");
    const Eigen::Vector3d u = dvec / R;
    const double uu = xi * R;
    const double decay = std::exp(-uu) / (R * R * R);
    const double a = -(uu * uu + uu + 1.0);
    const double b = -(uu * uu + 3.0 * uu + 3.0);
    Eigen::Matrix3d G;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const double delta = (i == j) ? 1.0 : 0.0;
            G(i, j) = (a * delta - b * u[i] * u[j]) * decay;
        }
    return G;
}

GreenTrace planar_scattering_trace(const PlanarStack& stack, double z, const SpectralPoint& freq,
                                   const quad::QuadratureSpec& spec, BoundarySide side,
                                   TracePart part) {
    stack.validate();
    freq.validate();
    spec.validate();
    const Place place = resolve_place(stack, z, side, part);
    if (freq.axis == Axis::Imaginary) {
        const double xi = freq.frequency;
        const double w = weighted_trace_imag(stack, place, xi, spec, part, nullptr);
        return GreenTrace{w / (xi * xi), 0.0};
    }
    const complex t = trace_real_axis(stack, place, freq.frequency, spec, part);
    return GreenTrace{t.real(), t.imag()};
}

double planar_trace_weighted_imag(const PlanarStack& stack, double z, double xi,
                                  const quad::QuadratureSpec& spec, BoundarySide side,
                                  TracePart part) {
    stack.validate();
    spec.validate();
    if (xi < 0.0) throw std::invalid_argument("planar_trace_weighted_imag: xi must be >= 0");
    const Place place = resolve_place(stack, z, side, part);
    return weighted_trace_imag(stack, place, xi, spec, part, nullptr);
}

} // namespace caskit::green
