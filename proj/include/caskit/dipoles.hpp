#pragma once

#include <Eigen/Dense>
#include <vector>

#include "caskit/dielectric.hpp"
#include "caskit/quadrature.hpp"

// Discrete coupled-dipole engine: exact many-body dispersion energy of N
// damped oscillators in free space via the imaginary-axis log-determinant,
// plus the second-order pairwise reduction and finite-difference forces.
// Natural units, c = hbar = 1.

namespace caskit::dipoles {

struct SpectralRadiusError : std::runtime_error {
    explicit SpectralRadiusError(const std::string& w) : std::runtime_error(w) {}
};

// N point dipoles sharing one damped-oscillator response.  strength is e^2/m,
// so the static polarizability volume is strength / omega_0^2.
struct DipoleSystem {
    std::vector<Eigen::Vector3d> positions;
    dielectric::OscillatorParams oscillator;
    double strength = 1.0;

    double static_polarizability() const {
        return strength / (oscillator.resonance * oscillator.resonance);
    }
    void validate() const;
};

// 3N x 3N interaction kernel: off-diagonal blocks (w^2/c^2) G^0(r_n, r_m),
// diagonal blocks zero (self-energy excluded).  Real on the imaginary axis.
Eigen::MatrixXcd build_interaction_matrix(const DipoleSystem& system, std::complex<double> omega);
Eigen::MatrixXd build_interaction_matrix_imag(const DipoleSystem& system, double xi);

// log det(1 - alpha_0(i xi) G_0(i xi)) with LU sign tracking; throws
// SpectralRadiusError if the matrix loses positivity (atoms too close).
double log_det_scattering(const DipoleSystem& system, double xi);

// E = (hbar / 2 pi) Int_0^inf dxi log det[1 - alpha_0(i xi) G_0(i xi)].
double vdw_energy(const DipoleSystem& system, const quad::QuadratureSpec& spec);

// Second-order (pairwise) part:
// E2 = -(hbar / 2 pi) Int dxi alpha_0^2 Sum_{m<n} Tr[G_0(nm) G_0(mn)].
double pairwise_vdw_energy(const DipoleSystem& system, const quad::QuadratureSpec& spec);

// -grad_{r_n} E by Richardson-extrapolated central differences.
Eigen::Vector3d vdw_force(const DipoleSystem& system, std::size_t atom_index,
                          const quad::QuadratureSpec& spec, double step_fraction = 1.0e-3);

// Two-atom closed-route helpers (also the kernel of the lattice bridge to the
// continuum module): energy and radial force for separation R.
double pair_vdw_energy(double R, const dielectric::OscillatorParams& osc, double strength,
                       const quad::QuadratureSpec& spec);
double pair_vdw_radial_force(double R, const dielectric::OscillatorParams& osc, double strength,
                             const quad::QuadratureSpec& spec);

// JSON ingestion: {"positions": [[x,y,z], ...],
//                  "oscillator": {"omega_0":..., "gamma":..., "e2_over_m":...}}
// length_to_natural = 1/L0 applied to positions, freq_to_natural to
// frequencies; e2_over_m is declared such that e2_over_m / omega_0^2 is the
// static polarizability volume.
DipoleSystem system_from_json(const std::string& json_text, double length_to_natural,
                              double freq_to_natural);

} // namespace caskit::dipoles
