#pragma once

#include <vector>

#include "caskit/green.hpp"

// Continuum energy densities, spectral quantities and the Casimir force for
// planar stacks at zero and finite temperature: Matsubara sums and
// imaginary-axis integrals, plus the real-axis validation path.
// Natural units, hbar = c = k_B = 1.

namespace caskit::lifshitz {

using dielectric::PermittivityModel;
using green::PlanarStack;
using quad::QuadratureSpec;

struct ThermalState {
    double T = 0.0; // T = 0 selects integral formulas, T > 0 Matsubara sums
    void validate() const {
        if (T < 0.0) throw std::invalid_argument("ThermalState: T must be >= 0");
    }
};

// Pressure convention: negative = attraction.  pressure == te + tm.
struct ForceResult {
    double pressure = 0.0;
    double te = 0.0;
    double tm = 0.0;
    double n0_term = 0.0;       // n = 0 Matsubara term (0 for the T = 0 integral)
    double err_estimate = 0.0;  // quadrature + Matsubara truncation estimate
};

struct FreeEnergyResult {
    double value = 0.0; // energy per area
    double te = 0.0;
    double tm = 0.0;
    double n0_term = 0.0;
    double err_estimate = 0.0;
};

struct MatsubaraTerm {
    double xi;
    double weight; // 1/2 on n = 0, else 1
};

// xi_n = 2 pi n T, n = 0..n_max, ascending, with the n = 0 half weight.
std::vector<MatsubaraTerm> matsubara_frequencies(double T, int n_max);

// Lifshitz pressure between the half-spaces across the gap.
//   T > 0:  -(T/pi)  Sum'_n Int k dk  kt3 Sum_p r1 r2 e^{-2 kt3 d} / D_p
//   T = 0:  -(1/2pi^2) Int dxi Int k dk  (same integrand)
// IdealMirror media are driven to the conductor limit by Richardson
// extrapolation in the mirror scale.
ForceResult force_per_area(const PlanarStack& stack, const ThermalState& thermal,
                           const QuadratureSpec& spec);

// Real-axis validation path (coth-weighted Im integral); requires absorption
// in at least one medium.  Agrees with force_per_area within tolerances.
ForceResult force_per_area_real_axis(const PlanarStack& stack, const ThermalState& thermal,
                                     const QuadratureSpec& spec);

// Interaction free energy per area, the potential whose d-derivative gives the
// pressure:  (T/2pi) Sum'_n Int k dk Sum_p ln(1 - r1 r2 e^{-2 kt3 d}),
// T = 0 analog with (1/4pi^2) Int dxi.
FreeEnergyResult free_energy_per_area(const PlanarStack& stack, const ThermalState& thermal,
                                      const QuadratureSpec& spec);

// Dilute-limit pressure: the Lifshitz integrand linearized in (eps_1 - 1) and
// (eps_2 - 1), single bounce, vacuum gap, T = 0.  Reference for the
// discrete-lattice bridge.
double force_per_area_dilute(const PlanarStack& stack, const QuadratureSpec& spec);

// Per-interface decomposition of the mutual force: each interface contribution
// is obtained by moving that interface in the trace-log free energy (central
// differences); their sum reproduces force_per_area.
struct SurfaceForceJumps {
    double interface_0 = 0.0;
    double interface_d = 0.0;
    double total = 0.0;
    double err_estimate = 0.0;
};
SurfaceForceJumps surface_force_jumps(const PlanarStack& stack, const ThermalState& thermal,
                                      const QuadratureSpec& spec);

// Interaction energy density profile u(z) (both-interface coupling part of the
// scattering trace, so the value is finite in all three regions and at the
// one-sided interface limits):
//   T = 0:  u(z) = -(1/8 pi^2) Int dxi [2 eps + xi eps'](i xi) xi^2 Tr G(z,z,i xi)
//   T > 0:  -(T/4 pi) Sum'_n of the same spectral weight.
double energy_density_profile(const PlanarStack& stack, double z, const ThermalState& thermal,
                              const QuadratureSpec& spec,
                              green::BoundarySide side = green::BoundarySide::Auto);

// Homogeneous-medium spectral energy density, two independent routes:
//   closed_form    = (1/2 pi^2) w^3 n_R^2 d(w n_R)/dw
//   general_split  = (1/4 pi^2) w^3 { [2 eps_R + w eps_R'] n_R
//                     - n_I d(w eps_I)/dw - 2 n_I eps_I }   (trace route)
// The two agree pointwise for lossless media; for absorbing media they differ
// by the exact total derivative (1/2 pi^2) d/dw [w^4 n_R n_I^2], reported via
// `defect` = general_split + derivative_term - closed_form.
struct BulkSpectralDensity {
    double closed_form = 0.0;
    double general_split = 0.0;
    double defect = 0.0;
};
BulkSpectralDensity bulk_spectral_energy_density(const PermittivityModel& model, double omega);

// Noise (Langevin) self-energy spectral density
//   (1/8 pi^2) w^2 eps_I Tr G_R  with Tr G_R = -2 n_I w; coth-weighted at T>0.
double noise_energy_spectral_density(const PermittivityModel& model, double omega,
                                     const ThermalState& thermal);

// Absorbed-power spectral density (1/4 pi^2) w^3 eps_I Im Tr G >= 0.
double absorption_rate_spectral_density(const PermittivityModel& model, double omega);

// Literal local density of states rho(nu) = (nu/4 pi^2) { d/dnu [nu eps(i nu)]
// + eps(i nu) }.  Note: the vacuum value nu/(2 pi^2) is dimensionally
// inconsistent with the vacuum mode density w^2/pi^2 recovered by
// bulk_spectral_energy_density; the formula is reproduced as printed, without
// correction.
double local_dos(const PermittivityModel& model, double nu);

} // namespace caskit::lifshitz
