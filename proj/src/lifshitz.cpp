#include "caskit/lifshitz.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

namespace caskit::lifshitz {

namespace {

constexpr double kPi = std::numbers::pi;

struct PolPair {
    double te = 0.0;
    double tm = 0.0;
    double err = 0.0;
};

// State of one (xi, k) node of the Lifshitz integrand on the imaginary axis.
struct Node {
    double kt3;
    double rr_te; // r1 r2
    double rr_tm;
    double q; // e^{-2 kt3 d}
};

struct StackContext {
    double e1, e2, e3, d;

    // The xi = 0 limits mirror green.cpp: kt_j -> k, te -> 0, tm -> static.
    Node at(double xi, double kt3_map) const {
        Node n;
        if (xi == 0.0) {
            n.kt3 = kt3_map;
            n.q = std::exp(-2.0 * n.kt3 * d);
            n.rr_te = 0.0;
            const double r1 = std::isinf(e1) ? 1.0 : (e1 - e3) / (e1 + e3);
            const double r2 = std::isinf(e2) ? 1.0 : (e2 - e3) / (e2 + e3);
            n.rr_tm = r1 * r2;
            return n;
        }
        const double x2 = xi * xi;
        const double k2 = std::max(0.0, kt3_map * kt3_map - e3 * x2);
        // recompute every kt from k so identical media cancel exactly
        n.kt3 = std::sqrt(e3 * x2 + k2);
        n.q = std::exp(-2.0 * n.kt3 * d);
        const double kt1 = std::sqrt(e1 * x2 + k2);
        const double kt2 = std::sqrt(e2 * x2 + k2);
        const double te1 = (e3 - e1) * x2 / ((n.kt3 + kt1) * (n.kt3 + kt1));
        const double te2 = (e3 - e2) * x2 / ((n.kt3 + kt2) * (n.kt3 + kt2));
        const double d1 = e1 * n.kt3 + e3 * kt1;
        const double d2 = e2 * n.kt3 + e3 * kt2;
        const double tm1 = (e1 - e3) * (e1 * e3 * x2 + k2 * (e1 + e3)) / (d1 * d1);
        const double tm2 = (e2 - e3) * (e2 * e3 * x2 + k2 * (e2 + e3)) / (d2 * d2);
        n.rr_te = te1 * te2;
        n.rr_tm = tm1 * tm2;
        return n;
    }
};

StackContext make_context(const PlanarStack& stack, double xi) {
    StackContext c;
    c.e1 = dielectric::eps_imag_axis(stack.eps1, xi);
    c.e2 = dielectric::eps_imag_axis(stack.eps2, xi);
    c.e3 = dielectric::eps_imag_axis(stack.eps3, xi);
    c.d = stack.gap;
    if (std::isinf(c.e3))
        throw std::invalid_argument("lifshitz: gap medium permittivity diverges at xi = 0");
    return c;
}

// Inner k integral for one Matsubara frequency, in the variable t = 2 kt3 d:
//   Int k dk kt3 f(rr, q) = (1/8 d^3) Int t^2 f dt  from t0 = 2 sqrt(e3) xi d.
PolPair inner_force(const PlanarStack& stack, double xi, const QuadratureSpec& spec) {
    const StackContext ctx = make_context(stack, xi);
    const double d = ctx.d;
    const double t0 = 2.0 * std::sqrt(ctx.e3) * xi * d;
    PolPair out;
    auto eval = [&](bool tm) {
        auto f = [&](double t) {
            const Node n = ctx.at(xi, t / (2.0 * d));
            const double rr = tm ? n.rr_tm : n.rr_te;
            const double x = rr * n.q;
            return t * t * x / (1.0 - x);
        };
        const auto r = quad::integrate_exp_decay(f, t0, 3.0, spec);
        out.err += r.error / (8.0 * d * d * d);
        return r.value / (8.0 * d * d * d);
    };
    out.te = eval(false);
    out.tm = eval(true);
    return out;
}

PolPair inner_free_energy(const PlanarStack& stack, double xi, const QuadratureSpec& spec) {
    const StackContext ctx = make_context(stack, xi);
    const double d = ctx.d;
    const double t0 = 2.0 * std::sqrt(ctx.e3) * xi * d;
    PolPair out;
    auto eval = [&](bool tm) {
        auto f = [&](double t) {
            const Node n = ctx.at(xi, t / (2.0 * d));
            const double rr = tm ? n.rr_tm : n.rr_te;
            return t * std::log1p(-rr * n.q);
        };
        const auto r = quad::integrate_exp_decay(f, t0, 3.0, spec);
        out.err += r.error / (4.0 * d * d);
        return r.value / (4.0 * d * d);
    };
    out.te = eval(false);
    out.tm = eval(true);
    return out;
}

struct SpectralSum {
    double te = 0.0, tm = 0.0, n0 = 0.0, err = 0.0;
};

// Ascending Matsubara sum with geometric tail, or the T = 0 xi integral.
SpectralSum spectral_sum(const PlanarStack& stack, const ThermalState& thermal,
                         const QuadratureSpec& spec,
                         const std::function<PolPair(double)>& inner) {
    SpectralSum s;
    if (thermal.T > 0.0) {
        const double dxi = 2.0 * kPi * thermal.T;
        const PolPair p0 = inner(0.0);
        s.te = 0.5 * p0.te;
        s.tm = 0.5 * p0.tm;
        s.n0 = 0.5 * (p0.te + p0.tm);
        s.err = 0.5 * p0.err;
        double prev2 = 0.0, prev1 = 0.0, last = 0.0;
        const int n_max = 100000;
        int n = 1;
        for (; n <= n_max; ++n) {
            const PolPair p = inner(n * dxi);
            const double term = p.te + p.tm;
            s.te += p.te;
            s.tm += p.tm;
            s.err += p.err;
            prev2 = prev1;
            prev1 = last;
            last = term;
            const double total = std::abs(s.te + s.tm);
            if (n >= 3 && std::abs(term) <= spec.matsubara_rel_tail * std::max(total, 1e-300))
                break;
        }
        if (n > n_max) throw quad::NonConvergenceError("Matsubara sum did not converge");
        // geometric tail from the last three terms
        if (prev1 != 0.0 && last != 0.0) {
            const double ratio = last / prev1;
            const double ratio2 = prev2 != 0.0 ? prev1 / prev2 : ratio;
            const double r = 0.5 * (ratio + ratio2);
            if (r > 0.0 && r < 1.0) {
                const double tail = last * r / (1.0 - r);
                const double split = (s.te + s.tm) != 0.0 ? s.te / (s.te + s.tm) : 0.5;
                s.te += tail * split;
                s.tm += tail * (1.0 - split);
                s.err += std::abs(tail);
            }
        }
        return s;
    }
    // T = 0: integral over xi with the spectral scale c/d.
    quad::IntegralResult rte, rtm;
    {
        auto f = [&](double xi) { return inner(xi).te; };
        rte = quad::integrate_semi_infinite(f, 1.0 / stack.gap, spec);
    }
    {
        auto f = [&](double xi) { return inner(xi).tm; };
        rtm = quad::integrate_semi_infinite(f, 1.0 / stack.gap, spec);
    }
    s.te = rte.value;
    s.tm = rtm.value;
    s.err = rte.error + rtm.error;
    return s;
}

bool has_mirror(const PlanarStack& stack) {
    return stack.eps1.is_ideal_mirror() || stack.eps2.is_ideal_mirror() ||
           stack.eps3.is_ideal_mirror();
}

PlanarStack with_scale(const PlanarStack& stack, double scale) {
    PlanarStack s = stack;
    s.eps1 = stack.eps1.with_mirror_scale(scale);
    s.eps2 = stack.eps2.with_mirror_scale(scale);
    s.eps3 = stack.eps3.with_mirror_scale(scale);
    return s;
}

// Conductor limit: evaluate at the mirror scale s and 2s, extrapolate with
// the 1/sqrt(eps) deficit law: F_inf = (sqrt(2) F(2s) - F(s)) / (sqrt(2) - 1).
template <typename R, typename F>
R mirror_extrapolate(const PlanarStack& stack, F&& eval,
                     const std::function<R(const R&, const R&, double)>& combine) {
    if (!has_mirror(stack)) return eval(stack);
    const double s0 = std::max({stack.eps1.is_ideal_mirror() ? stack.eps1.mirror_scale() : 0.0,
                                stack.eps2.is_ideal_mirror() ? stack.eps2.mirror_scale() : 0.0,
                                stack.eps3.is_ideal_mirror() ? stack.eps3.mirror_scale() : 0.0});
    const R a = eval(with_scale(stack, s0));
    const R b = eval(with_scale(stack, 2.0 * s0));
    const double w = std::sqrt(2.0) / (std::sqrt(2.0) - 1.0);
    return combine(a, b, w); // w*b - (w-1)*a  componentwise
}

double richardson(double a, double b, double w) { return w * b - (w - 1.0) * a; }

ForceResult force_per_area_plain(const PlanarStack& stack, const ThermalState& thermal,
                                 const QuadratureSpec& spec) {
    auto inner = [&](double xi) { return inner_force(stack, xi, spec); };
    const SpectralSum s = spectral_sum(stack, thermal, spec, inner);
    ForceResult r;
    const double pref = thermal.T > 0.0 ? -thermal.T / kPi : -1.0 / (2.0 * kPi * kPi);
    r.te = pref * s.te;
    r.tm = pref * s.tm;
    r.pressure = r.te + r.tm;
    r.n0_term = pref * s.n0;
    r.err_estimate = std::abs(pref) * s.err;
    return r;
}

FreeEnergyResult free_energy_plain(const PlanarStack& stack, const ThermalState& thermal,
                                   const QuadratureSpec& spec) {
    auto inner = [&](double xi) { return inner_free_energy(stack, xi, spec); };
    const SpectralSum s = spectral_sum(stack, thermal, spec, inner);
    FreeEnergyResult r;
    const double pref = thermal.T > 0.0 ? thermal.T / (2.0 * kPi) : 1.0 / (4.0 * kPi * kPi);
    r.te = pref * s.te;
    r.tm = pref * s.tm;
    r.value = r.te + r.tm;
    r.n0_term = pref * s.n0;
    r.err_estimate = std::abs(pref) * s.err;
    return r;
}

} // namespace

std::vector<MatsubaraTerm> matsubara_frequencies(double T, int n_max) {
    if (!(T > 0.0)) throw std::domain_error("matsubara_frequencies: T must be > 0");
    if (n_max < 0) throw std::domain_error("matsubara_frequencies: n_max must be >= 0");
    std::vector<MatsubaraTerm> out;
    out.reserve(static_cast<std::size_t>(n_max) + 1);
    for (int n = 0; n <= n_max; ++n)
        out.push_back({2.0 * kPi * n * T, n == 0 ? 0.5 : 1.0});
    return out;
}

ForceResult force_per_area(const PlanarStack& stack, const ThermalState& thermal,
                           const QuadratureSpec& spec) {
    stack.validate();
    thermal.validate();
    spec.validate();
    auto eval = [&](const PlanarStack& st) { return force_per_area_plain(st, thermal, spec); };
    std::function<ForceResult(const ForceResult&, const ForceResult&, double)> combine =
        [](const ForceResult& a, const ForceResult& b, double w) {
            ForceResult r;
            r.te = richardson(a.te, b.te, w);
            r.tm = richardson(a.tm, b.tm, w);
            r.pressure = r.te + r.tm;
            r.n0_term = richardson(a.n0_term, b.n0_term, w);
            r.err_estimate = a.err_estimate + b.err_estimate + std::abs(r.pressure - b.pressure);
            return r;
        };
    return mirror_extrapolate<ForceResult>(stack, eval, combine);
}

FreeEnergyResult free_energy_per_area(const PlanarStack& stack, const ThermalState& thermal,
                                      const QuadratureSpec& spec) {
    stack.validate();
    thermal.validate();
    spec.validate();
    auto eval = [&](const PlanarStack& st) { return free_energy_plain(st, thermal, spec); };
    std::function<FreeEnergyResult(const FreeEnergyResult&, const FreeEnergyResult&, double)>
        combine = [](const FreeEnergyResult& a, const FreeEnergyResult& b, double w) {
            FreeEnergyResult r;
            r.te = richardson(a.te, b.te, w);
            r.tm = richardson(a.tm, b.tm, w);
            r.value = r.te + r.tm;
            r.n0_term = richardson(a.n0_term, b.n0_term, w);
            r.err_estimate = a.err_estimate + b.err_estimate + std::abs(r.value - b.value);
            return r;
        };
    return mirror_extrapolate<FreeEnergyResult>(stack, eval, combine);
}

double force_per_area_dilute(const PlanarStack& stack, const QuadratureSpec& spec) {
    stack.validate();
    spec.validate();
    if (stack.eps3.variant() != dielectric::Variant::Vacuum)
        throw std::invalid_argument("force_per_area_dilute: gap must be vacuum");
    const double d = stack.gap;
    auto inner = [&](double xi) {
        const double de1 = dielectric::eps_imag_axis(stack.eps1, xi) - 1.0;
        const double de2 = dielectric::eps_imag_axis(stack.eps2, xi) - 1.0;
        const double x2 = xi * xi;
        auto f = [&](double t) {
            const double kt = t / (2.0 * d);
            const double kt2 = kt * kt;
            // r_te ~ -(eps-1) xi^2/(4 kt^2), r_tm ~ (eps-1)(2 kt^2 - xi^2)/(4 kt^2)
            const double wte = x2 * x2 / (16.0 * kt2 * kt2);
            const double dmx = 2.0 * kt2 - x2;
            const double wtm = dmx * dmx / (16.0 * kt2 * kt2);
            return t * t * de1 * de2 * (wte + wtm) * std::exp(-t);
        };
        const auto r = quad::integrate_exp_decay(f, 2.0 * xi * d, 3.0, spec);
        return r.value / (8.0 * d * d * d);
    };
    const auto r = quad::integrate_semi_infinite(inner, 1.0 / d, spec);
    return -r.value / (2.0 * kPi * kPi);
}

ForceResult force_per_area_real_axis(const PlanarStack& stack, const ThermalState& thermal,
                                     const QuadratureSpec& spec) {
    stack.validate();
    thermal.validate();
    spec.validate();
    if (stack.eps1.lossless() && stack.eps2.lossless() && stack.eps3.lossless())
        throw std::invalid_argument(
            "force_per_area_real_axis: at least one medium must be absorbing");

    const double d = stack.gap;

    // the inner k quadrature error is the outer integrand's noise floor, so
    // run it two digits tighter than the frequency integral
    quad::QuadratureSpec kspec = spec;
    kspec.rel_tol = std::max(1e-13, 1e-2 * spec.rel_tol);

    // The k integrand kappa3 r1 r2 e^{2 i kappa3 d} / D_p is odd under
    // omega -> -omega* (the kappa3 weight flips), so the rotation that
    // produces the Matsubara sum pairs with the negative REAL part of the
    // coth-weighted integral; the integrable combination is -Re H(w).
    auto real_h = [&](double w, bool tm) {
        const green::complex e1 = dielectric::eps_real_axis(stack.eps1, w);
        const green::complex e2 = dielectric::eps_real_axis(stack.eps2, w);
        const green::complex e3 = dielectric::eps_real_axis(stack.eps3, w);
        auto integrand = [&](double k) {
            const double w2 = w * w, ksq = k * k;
            auto kap = [&](green::complex e) {
                green::complex v = std::sqrt(e * w2 - ksq);
                if (v.imag() < 0.0) v = -v;
                if (v.imag() == 0.0 && v.real() < 0.0) v = -v;
                return v;
            };
            const green::complex k1 = kap(e1), k2 = kap(e2), k3 = kap(e3);
            green::complex r1, r2;
            if (tm) {
                const green::complex q1 = e1 * k3 + e3 * k1, q2 = e2 * k3 + e3 * k2;
                r1 = (e1 - e3) * (e1 * e3 * w2 - ksq * (e1 + e3)) / (q1 * q1);
                r2 = (e2 - e3) * (e2 * e3 * w2 - ksq * (e2 + e3)) / (q2 * q2);
            } else {
                r1 = (e3 - e1) * w2 / ((k3 + k1) * (k3 + k1));
                r2 = (e3 - e2) * w2 / ((k3 + k2) * (k3 + k2));
            }
            const green::complex ph = std::exp(green::complex{0.0, 2.0} * k3 * d);
            const green::complex x = r1 * r2 * ph;
            return -(k * k3 * x / (1.0 - x)).real();
        };
        // branch-point-aware maps: k = kb sin(theta) below, k = kb cosh(u)
        // above (the grazing-incidence reflection feature lives at |k - kb|
        // of order w and needs its own resolution scale)
        const double kb = std::sqrt(std::abs(e3)) * w;
        auto prop = [&](double theta) {
            const double k = kb * std::sin(theta);
            return integrand(k) * kb * std::cos(theta);
        };
        const auto pv = quad::integrate(prop, 0.0, 1.5707963267948966, kspec);
        auto evan = [&](double u) {
            const double k = kb * std::cosh(u);
            return integrand(k) * kb * std::sinh(u);
        };
        const auto ev = quad::integrate_exp_decay(evan, 0.0, 2.0, kspec);
        return pv.value + ev.value;
    };

    // Oscillation-aware frequency integration: adaptive segments of roughly a
    // half period of e^{2 i w n3 d}, accumulated with tail detection.
    auto omega_integral = [&](bool tm) {
        kspec.rel_tol = std::max(1e-13, 1e-2 * spec.rel_tol);
        const double coth_cut = 1e-12;
        auto f = [&](double w) {
            if (w <= coth_cut) return 0.0;
            double weight = 1.0;
            if (thermal.T > 0.0) {
                const double x = w / (2.0 * thermal.T);
                weight = x < 1e-8 ? 1.0 / x : 1.0 / std::tanh(x);
            }
            return weight * real_h(w, tm);
        };
        // resonance breakpoints
        std::vector<double> breaks{0.0};
        for (const auto* m : {&stack.eps1, &stack.eps2, &stack.eps3})
            for (const auto& o : m->oscillators())
                if (o.resonance > 0.0) breaks.push_back(o.resonance);
        std::sort(breaks.begin(), breaks.end());
        double lead_end = 2.0 * breaks.back() + 4.0 / d;
        breaks.push_back(lead_end);

        // the inner k-quadrature noise bounds what the frequency panels can
        // resolve; abs floors are set accordingly
        quad::QuadratureSpec head_spec = spec;
        head_spec.abs_tol = std::max(spec.abs_tol, 1e-10);
        double acc = 0.0, err = 0.0;
        for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
            const auto r = quad::integrate(f, breaks[i], breaks[i + 1], head_spec);
            acc += r.value;
            err += r.error;
        }
        // Oscillatory tail: half-period segments fed into iterated adjacent
        // averaging (Euler-style) of the partial sums; the segments only need
        // modest accuracy, so they run on a relaxed spec.
        quad::QuadratureSpec tail_spec = spec;
        tail_spec.rel_tol = std::max(spec.rel_tol, 1e-5);
        tail_spec.abs_tol = std::max(spec.abs_tol, 1e-6);
        kspec.rel_tol = std::max(1e-2 * tail_spec.rel_tol, 1e-13);
        const double seg = kPi / (2.0 * d);
        std::vector<double> partial;
        double tail_acc = 0.0, est_prev = 0.0;
        bool have_prev = false;
        double a = lead_end;
        const int max_seg = 400;
        double est = 0.0, swing = 0.0;
        for (int i = 0; i < max_seg; ++i) {
            const auto r = quad::integrate(f, a, a + seg, tail_spec);
            tail_acc += r.value;
            err += r.error;
            partial.push_back(tail_acc);
            a += seg;
            if (partial.size() >= 8) {
                std::vector<double> v(partial.end() - 8, partial.end());
                for (int sweep = 0; sweep < 6; ++sweep)
                    for (std::size_t j = 0; j + 1 < v.size(); ++j) v[j] = 0.5 * (v[j] + v[j + 1]);
                est = v.front();
                swing = std::abs(partial.back() - partial[partial.size() - 2]);
                const double settle = std::abs(est - est_prev);
                if (have_prev && settle < 1e-6 * std::abs(acc + est) + 1e-300) break;
                est_prev = est;
                have_prev = true;
            }
        }
        return std::pair<double, double>{acc + est, err + swing * 0.1 + std::abs(est - est_prev)};
    };

    const auto [te_raw, te_err] = omega_integral(false);
    const auto [tm_raw, tm_err] = omega_integral(true);
    ForceResult r;
    r.te = -te_raw / (2.0 * kPi * kPi);
    r.tm = -tm_raw / (2.0 * kPi * kPi);
    r.pressure = r.te + r.tm;
    r.n0_term = 0.0;
    r.err_estimate = (te_err + tm_err) / (2.0 * kPi * kPi);
    return r;
}

SurfaceForceJumps surface_force_jumps(const PlanarStack& stack, const ThermalState& thermal,
                                      const QuadratureSpec& spec) {
    stack.validate();
    thermal.validate();
    spec.validate();
    // The force localizes as delta functions on the two interfaces; the
    // mutual stress flows through both, so each interface carries half of the
    // trace-log derivative.  The total is an independent route to the
    // pressure (log integrand + numerical d-derivative).
    const double h = 1e-3 * stack.gap;
    auto energy_at = [&](double gap) {
        PlanarStack s = stack;
        s.gap = gap;
        return free_energy_per_area(s, thermal, spec);
    };
    const FreeEnergyResult ep = energy_at(stack.gap + h);
    const FreeEnergyResult em = energy_at(stack.gap - h);
    const FreeEnergyResult ep2 = energy_at(stack.gap + 0.5 * h);
    const FreeEnergyResult em2 = energy_at(stack.gap - 0.5 * h);
    const double d1 = (ep.value - em.value) / (2.0 * h);
    const double d2 = (ep2.value - em2.value) / h;
    const double dEdd = (4.0 * d2 - d1) / 3.0; // Richardson
    SurfaceForceJumps out;
    out.total = -dEdd;
    out.interface_0 = 0.5 * out.total;
    out.interface_d = 0.5 * out.total;
    out.err_estimate =
        std::abs(d2 - d1) / 3.0 + (ep.err_estimate + em.err_estimate) / (2.0 * h) * h;
    return out;
}

double energy_density_profile(const PlanarStack& stack, double z, const ThermalState& thermal,
                              const QuadratureSpec& spec, green::BoundarySide side) {
    stack.validate();
    thermal.validate();
    spec.validate();
    const double d = stack.gap;
    const dielectric::PermittivityModel* local = &stack.eps3;
    if (z < 0.0 || (z == 0.0 && side == green::BoundarySide::Minus)) local = &stack.eps1;
    if (z > d || (z == d && side == green::BoundarySide::Plus)) local = &stack.eps2;

    auto weighted = [&](double xi) {
        const double eta = dielectric::eps_imag_axis(*local, xi);
        const double etap = dielectric::eps_imag_axis_derivative(*local, xi);
        const double w2 = 2.0 * eta + xi * etap;
        return w2 * green::planar_trace_weighted_imag(stack, z, xi, spec, side,
                                                      green::TracePart::Interaction);
    };
    if (thermal.T > 0.0) {
        double sum = 0.5 * weighted(0.0);
        const double dxi = 2.0 * kPi * thermal.T;
        double last = 0.0;
        const int n_max = 100000;
        int n = 1;
        for (; n <= n_max; ++n) {
            last = weighted(n * dxi);
            sum += last;
            if (n >= 3 && std::abs(last) <= spec.matsubara_rel_tail * std::max(std::abs(sum), 1e-300))
                break;
        }
        if (n > n_max) throw quad::NonConvergenceError("energy profile Matsubara sum");
        return -thermal.T / (4.0 * kPi) * sum;
    }
    const auto r = quad::integrate_semi_infinite(weighted, 1.0 / d, spec);
    return -r.value / (8.0 * kPi * kPi);
}

BulkSpectralDensity bulk_spectral_energy_density(const PermittivityModel& model, double omega) {
    if (!(omega > 0.0))
        throw std::domain_error("bulk_spectral_energy_density: omega must be > 0");
    const green::complex eps = dielectric::eps_real_axis(model, omega);
    green::complex n = std::sqrt(eps);
    if (n.real() < 0.0) n = -n;

    const green::complex deps = dielectric::eps_real_axis_derivative(model, omega);
    const green::complex dn = deps / (2.0 * n);

    const double nR = n.real(), nI = n.imag();
    const double nRp = dn.real(), nIp = dn.imag();
    const double w3 = omega * omega * omega;

    BulkSpectralDensity out;
    out.closed_form = (1.0 / (2.0 * kPi * kPi)) * w3 * nR * nR * (nR + omega * nRp);

    const double epsR = eps.real(), epsI = eps.imag();
    const double epsRp = deps.real(), epsIp = deps.imag();
    const green::GreenTrace tr = green::homogeneous_green_trace(eps, omega);
    // Im{[2 eps + w eps'] Tr G} plus the noise piece eps_I Tr G_R, assembled
    // from the subtracted coincidence trace.
    const double u_e = (2.0 * epsR + omega * epsRp) * tr.im;
    const double u_m = (2.0 * epsI + omega * epsIp) * tr.re;
    const double u_noise = epsI * tr.re;
    out.general_split = (1.0 / (8.0 * kPi * kPi)) * omega * omega * (u_e + u_m + u_noise);

    // exact lossless-defect correction: (1/2 pi^2) d/dw [w^4 n_R n_I^2]
    const double w4 = w3 * omega;
    const double ddw = 4.0 * w3 * nR * nI * nI + w4 * nRp * nI * nI + 2.0 * w4 * nR * nI * nIp;
    out.defect = out.general_split + ddw / (2.0 * kPi * kPi) - out.closed_form;
    return out;
}

double noise_energy_spectral_density(const PermittivityModel& model, double omega,
                                     const ThermalState& thermal) {
    if (!(omega > 0.0))
        throw std::domain_error("noise_energy_spectral_density: omega must be > 0");
    thermal.validate();
    const green::complex eps = dielectric::eps_real_axis(model, omega);
    const green::GreenTrace tr = green::homogeneous_green_trace(eps, omega);
    double weight = 1.0;
    if (thermal.T > 0.0) weight = 1.0 / std::tanh(omega / (2.0 * thermal.T));
    return weight * (1.0 / (8.0 * kPi * kPi)) * omega * omega * eps.imag() * tr.re;
}

double absorption_rate_spectral_density(const PermittivityModel& model, double omega) {
    if (!(omega > 0.0))
        throw std::domain_error("absorption_rate_spectral_density: omega must be > 0");
    const green::complex eps = dielectric::eps_real_axis(model, omega);
    const green::GreenTrace tr = green::homogeneous_green_trace(eps, omega);
    return (1.0 / (4.0 * kPi * kPi)) * omega * omega * omega * eps.imag() * tr.im;
}

double local_dos(const PermittivityModel& model, double nu) {
    if (!(nu > 0.0)) throw std::domain_error("local_dos: nu must be > 0");
    const double eta = dielectric::eps_imag_axis(model, nu);
    const double etap = dielectric::eps_imag_axis_derivative(model, nu);
    return nu / (4.0 * kPi * kPi) * (2.0 * eta + nu * etap);
}

} // namespace caskit::lifshitz
