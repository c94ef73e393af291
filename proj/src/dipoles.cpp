#include "caskit/dipoles.hpp"

#include <cmath>
#include <numbers>

#include <json.hpp>

#include "caskit/green.hpp"

namespace caskit::dipoles {

namespace {

double alpha_imag(const dielectric::OscillatorParams& o, double strength, double xi) {
    return strength / (o.resonance * o.resonance + xi * xi + o.damping * xi);
}

double min_separation(const std::vector<Eigen::Vector3d>& pos) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pos.size(); ++i)
        for (std::size_t j = i + 1; j < pos.size(); ++j)
            m = std::min(m, (pos[i] - pos[j]).norm());
    return m;
}

// Tr[G0(R) G0(R)] on the imaginary axis, closed form; u = xi R.
double pair_trace_gg(double R, double xi) {
    const double u = xi * R;
    const double P = u * u + u + 1.0;
    const double Q = u + 1.0;
    return std::exp(-2.0 * u) * (2.0 * P * P + 4.0 * Q * Q) / std::pow(R, 6);
}

double pair_trace_gg_dR(double R, double xi) {
    const double u = xi * R;
    const double P = u * u + u + 1.0;
    const double Q = u + 1.0;
    const double S = 2.0 * P * P + 4.0 * Q * Q;
    const double dS_du = 4.0 * P * (2.0 * u + 1.0) + 8.0 * Q;
    const double e = std::exp(-2.0 * u);
    return e * (xi * (dS_du - 2.0 * S) - 6.0 * S / R) / std::pow(R, 6);
}

} // namespace

void DipoleSystem::validate() const {
    if (positions.empty()) throw std::invalid_argument("DipoleSystem: need at least one dipole");
    oscillator.validate();
    if (!(strength > 0.0)) throw std::invalid_argument("DipoleSystem: strength must be > 0");
    if (!(oscillator.resonance > 0.0))
        throw std::invalid_argument("DipoleSystem: oscillator needs omega_0 > 0");
    if (positions.size() > 1) {
        const double rmin = min_separation(positions);
        if (!(rmin > 0.0)) throw std::invalid_argument("DipoleSystem: coincident positions");
        // Point-dipole model breaks down when atoms approach the static
        // polarizability radius; 1 - alpha G can then become singular.
        const double guard = 3.0 * std::cbrt(static_polarizability());
        if (rmin < guard)
            throw std::invalid_argument("DipoleSystem: minimum separation below 3 alpha0^{1/3}");
    }
}

Eigen::MatrixXcd build_interaction_matrix(const DipoleSystem& system, std::complex<double> omega) {
    system.validate();
    const std::size_t n = system.positions.size();
    Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(3 * n, 3 * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b) {
            const Eigen::Matrix3cd blk =
                green::free_space_dyadic(system.positions[a], system.positions[b], omega);
            G.block<3, 3>(3 * a, 3 * b) = blk;
            G.block<3, 3>(3 * b, 3 * a) = blk.transpose();
        }
    return G;
}

Eigen::MatrixXd build_interaction_matrix_imag(const DipoleSystem& system, double xi) {
    system.validate();
    const std::size_t n = system.positions.size();
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(3 * n, 3 * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b) {
            const Eigen::Matrix3d blk =
                green::free_space_dyadic_imag(system.positions[a], system.positions[b], xi);
            G.block<3, 3>(3 * a, 3 * b) = blk;
            G.block<3, 3>(3 * b, 3 * a) = blk.transpose();
        }
    return G;
}

double log_det_scattering(const DipoleSystem& system, double xi) {
    const double a0 = alpha_imag(system.oscillator, system.strength, xi);
    const Eigen::MatrixXd X = a0 * build_interaction_matrix_imag(system, xi);

    // Weak coupling: log det(1 - X) = -Tr X^2/2 - Tr X^3/3 - Tr X^4/4 - ...
    // (Tr X = 0, diagonal blocks excluded).  The series keeps full relative
    // precision where the LU route would return log(1 - tiny) noise.
    const double bound = X.cwiseAbs().rowwise().sum().maxCoeff(); // >= spectral radius
    if (bound < 1e-3) {
        const Eigen::MatrixXd X2 = X * X;
        const double t2 = X2.trace();
        const double t3 = (X2 * X).trace();
        const double t4 = (X2 * X2).trace();
        return -0.5 * t2 - t3 / 3.0 - 0.25 * t4;
    }

    Eigen::MatrixXd M = -X;
    M.diagonal().array() += 1.0;
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(M);
    const auto& U = lu.matrixLU();
    double logdet = 0.0;
    double sign = lu.permutationP().determinant();
    for (Eigen::Index i = 0; i < U.rows(); ++i) {
        const double uii = U(i, i);
        if (!std::isfinite(uii) || uii == 0.0)
            throw SpectralRadiusError("1 - alpha G is singular at a quadrature node");
        logdet += std::log(std::abs(uii));
        if (uii < 0.0) sign = -sign;
    }
    if (sign <= 0.0)
        throw SpectralRadiusError("det(1 - alpha G) changed sign: atoms too close for the "
                                  "point-dipole model");
    return logdet;
}

double vdw_energy(const DipoleSystem& system, const quad::QuadratureSpec& spec) {
    system.validate();
    spec.validate();
    if (system.positions.size() == 1) return 0.0;
    auto f = [&](double xi) { return log_det_scattering(system, xi); };
    const auto r = quad::integrate_semi_infinite(f, system.oscillator.resonance, spec);
    return r.value / (2.0 * std::numbers::pi);
}

double pairwise_vdw_energy(const DipoleSystem& system, const quad::QuadratureSpec& spec) {
    system.validate();
    spec.validate();
    const std::size_t n = system.positions.size();
    if (n == 1) return 0.0;
    auto f = [&](double xi) {
        const double a0 = alpha_imag(system.oscillator, system.strength, xi);
        double acc = 0.0;
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b)
                acc += pair_trace_gg((system.positions[a] - system.positions[b]).norm(), xi);
        return a0 * a0 * acc;
    };
    const auto r = quad::integrate_semi_infinite(f, system.oscillator.resonance, spec);
    return -r.value / (2.0 * std::numbers::pi);
}

Eigen::Vector3d vdw_force(const DipoleSystem& system, std::size_t atom_index,
                          const quad::QuadratureSpec& spec, double step_fraction) {
    system.validate();
    if (atom_index >= system.positions.size())
        throw std::invalid_argument("vdw_force: atom index out of range");
    const double h0 = step_fraction * min_separation(system.positions);

    auto energy_shifted = [&](int axis, double h) {
        DipoleSystem s = system;
        s.positions[atom_index][axis] += h;
        return vdw_energy(s, spec);
    };
    Eigen::Vector3d force;
    for (int axis = 0; axis < 3; ++axis) {
        const double d1 = (energy_shifted(axis, h0) - energy_shifted(axis, -h0)) / (2.0 * h0);
        const double d2 =
            (energy_shifted(axis, 0.5 * h0) - energy_shifted(axis, -0.5 * h0)) / h0;
        force[axis] = -(4.0 * d2 - d1) / 3.0;
    }
    return force;
}

double pair_vdw_energy(double R, const dielectric::OscillatorParams& osc, double strength,
                       const quad::QuadratureSpec& spec) {
    if (!(R > 0.0)) throw std::invalid_argument("pair_vdw_energy: R must be > 0");
    auto f = [&](double xi) {
        const double a0 = alpha_imag(osc, strength, xi);
        return a0 * a0 * pair_trace_gg(R, xi);
    };
    const auto r = quad::integrate_semi_infinite(f, osc.resonance, spec);
    return -r.value / (2.0 * std::numbers::pi);
}

double pair_vdw_radial_force(double R, const dielectric::OscillatorParams& osc, double strength,
                             const quad::QuadratureSpec& spec) {
    if (!(R > 0.0)) throw std::invalid_argument("pair_vdw_radial_force: R must be > 0");
    auto f = [&](double xi) {
        const double a0 = alpha_imag(osc, strength, xi);
        return a0 * a0 * pair_trace_gg_dR(R, xi);
    };
    const auto r = quad::integrate_semi_infinite(f, osc.resonance, spec);
    return r.value / (2.0 * std::numbers::pi);
}

DipoleSystem system_from_json(const std::string& json_text, double length_to_natural,
                              double freq_to_natural) {
    const auto j = nlohmann::json::parse(json_text);
    DipoleSystem s;
    for (const auto& p : j.at("positions")) {
        if (p.size() != 3) throw std::invalid_argument("dipole position must have 3 components");
        s.positions.emplace_back(p.at(0).get<double>() * length_to_natural,
                                 p.at(1).get<double>() * length_to_natural,
                                 p.at(2).get<double>() * length_to_natural);
    }
    const auto& o = j.at("oscillator");
    s.oscillator.resonance = o.at("omega_0").get<double>() * freq_to_natural;
    s.oscillator.damping = o.value("gamma", 0.0) * freq_to_natural;
    // e2_over_m is volume * frequency^2 in SI (alpha0 = e2_over_m / omega_0^2)
    const double l3 = length_to_natural * length_to_natural * length_to_natural;
    s.strength = o.at("e2_over_m").get<double>() * l3 * freq_to_natural * freq_to_natural;
    s.oscillator.coupling = 0.0;
    return s;
}

} // namespace caskit::dipoles
