#pragma once

// Unit system boundary.
//
// Everything inside the library runs in natural units with hbar = c = k_B = 1
// and lengths measured in a single reference length L0.  In these units
//   frequency        = c / L0
//   energy           = hbar c / L0
//   energy / area    = hbar c / L0^3
//   pressure         = hbar c / L0^4
//   energy density   = hbar c / L0^4
//   temperature      = hbar c / (k_B L0)
// SI conversion happens only here and in the CLI front end.

namespace caskit::units {

// CODATA / exact SI values.
inline constexpr double c_m_per_s = 299792458.0;
inline constexpr double hbar_J_s = 1.054571817e-34;
inline constexpr double k_B_J_per_K = 1.380649e-23;

// Scale object tying the natural unit system to SI through L0.
struct NaturalScale {
    double L0_m = 1.0e-6;

    // SI -> natural
    double length(double x_m) const { return x_m / L0_m; }
    double frequency(double omega_rad_per_s) const { return omega_rad_per_s * L0_m / c_m_per_s; }
    double temperature(double T_K) const { return k_B_J_per_K * T_K * L0_m / (hbar_J_s * c_m_per_s); }

    // natural -> SI
    double length_si(double x) const { return x * L0_m; }
    double frequency_si(double w) const { return w * c_m_per_s / L0_m; }
    double temperature_si(double T) const { return T * hbar_J_s * c_m_per_s / (k_B_J_per_K * L0_m); }
    double energy_si(double E) const { return E * hbar_J_s * c_m_per_s / L0_m; }
    double energy_per_area_si(double E) const {
        return E * hbar_J_s * c_m_per_s / (L0_m * L0_m * L0_m);
    }
    double pressure_si(double p) const {
        return p * hbar_J_s * c_m_per_s / (L0_m * L0_m * L0_m * L0_m);
    }
    double energy_density_si(double u) const { return pressure_si(u); }
    // spectral energy density [J s / m^3] = natural * hbar / L0^3
    double spectral_energy_density_si(double u) const {
        return u * hbar_J_s / (L0_m * L0_m * L0_m);
    }
    // the literal local-DOS formula nu/(4 pi^2 c^2){...} carries s/m^2
    double ldos_si(double rho) const { return rho / (c_m_per_s * L0_m); }
};

// Matsubara frequency in SI, xi_n = 2 pi n k_B T / hbar  [rad/s].
double matsubara_si(double T_K, int n);

} // namespace caskit::units
