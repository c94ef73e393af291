#pragma once

#include <Eigen/Dense>
#include <complex>

#include "caskit/dielectric.hpp"
#include "caskit/quadrature.hpp"

// Dyadic Green functions: free-space closed forms, the homogeneous coincidence
// trace after divergence subtraction, and the three-layer planar scattering
// trace at coincidence (Fresnel + multiple-reflection algebra, k_par
// integrated).  Natural units, c = 1.

namespace caskit::green {

using complex = std::complex<double>;

enum class Axis { Real, Imaginary };

// Evaluation coordinate: a frequency on one of the two axes plus an optional
// transverse wavenumber for planar quantities.
struct SpectralPoint {
    Axis axis = Axis::Imaginary;
    double frequency = 1.0;
    double k_par = 0.0;

    void validate() const {
        if (!(frequency > 0.0)) throw std::invalid_argument("SpectralPoint: frequency must be > 0");
        if (k_par < 0.0) throw std::invalid_argument("SpectralPoint: k_par must be >= 0");
    }
};

// Half-space 1 (z <= 0) | gap medium 3 of width d | half-space 2 (z >= d).
struct PlanarStack {
    dielectric::PermittivityModel eps1 = dielectric::PermittivityModel::vacuum();
    dielectric::PermittivityModel eps2 = dielectric::PermittivityModel::vacuum();
    dielectric::PermittivityModel eps3 = dielectric::PermittivityModel::vacuum();
    double gap = 1.0;

    void validate() const {
        if (!(gap > 0.0)) throw std::invalid_argument("PlanarStack: gap width must be > 0");
    }
};

struct GreenTrace {
    double re = 0.0;
    double im = 0.0;
    complex value() const { return {re, im}; }
};

enum class Polarization { TE, TM };

// kappa_j = sqrt(eps_j w^2 - k_par^2) with Im kappa >= 0 (Re >= 0 when Im = 0)
// on the real axis; on the imaginary axis sqrt(eps_j xi^2 + k_par^2), real > 0.
complex kappa(complex eps, const SpectralPoint& point);

// Single-interface reflection amplitudes seen from the gap medium:
//   r_j^te = (k3 - kj) / (k3 + kj)
//   r_j^tm = (eps_j k3 - eps3 kj) / (eps_j k3 + eps3 kj)
complex fresnel(Polarization pol, int j, const PlanarStack& stack, const SpectralPoint& point);

// Multiple-reflection bookkeeping for the three-layer stack.
struct ReflectionSet {
    complex r1_te, r1_tm, r2_te, r2_tm;
    complex D_te, D_tm;   // D_p = 1 - r1 r2 phase
    complex R1_te, R1_tm; // R1 = (-r1 + r2 phase) / D
    complex R2_te, R2_tm;
    complex phase;        // e^{2 i kappa3 d}; real decay e^{-2 kt3 d} on the imaginary axis
};
ReflectionSet multiple_reflection(const PlanarStack& stack, const SpectralPoint& point);

// Divergence-subtracted coincidence trace of the homogeneous-medium dyadic:
// Im Tr = 2 n_R w, Re Tr = -2 n_I w, n = sqrt(eps) with Re n >= 0.
GreenTrace homogeneous_green_trace(complex eps, double omega);

// Retarded free-space interaction kernel (w^2/c^2) G^0(r, r', w): the 3x3
// dyadic whose static limit is (3 RR - 1)/R^3.  Throws on coincidence.
Eigen::Matrix3cd free_space_dyadic(const Eigen::Vector3d& r, const Eigen::Vector3d& rp,
                                   complex omega);

// Fast real-valued form at omega = i xi.
Eigen::Matrix3d free_space_dyadic_imag(const Eigen::Vector3d& r, const Eigen::Vector3d& rp,
                                       double xi);

// Which side of an interface a boundary evaluation refers to.
enum class BoundarySide { Auto, Minus, Plus };

// Scattering: the full reflection-dependent part of Tr G(z,z) (bulk part of
// the local medium subtracted); finite strictly inside a region, divergent at
// the interfaces.  Interaction: additionally subtracts each interface's
// isolated single-interface profile, leaving only terms that couple both
// interfaces; finite everywhere including one-sided boundary limits.
enum class TracePart { Scattering, Interaction };

// k_par-integrated coincidence trace of the scattering Green function at
// height z for a single frequency.  On the imaginary axis the result is real.
// z on an interface requires an explicit side tag and the Interaction part.
// IdealMirror media are evaluated at their stored finite scale here; the
// conductor-limit extrapolation lives in the lifshitz-level operations.
GreenTrace planar_scattering_trace(const PlanarStack& stack, double z, const SpectralPoint& freq,
                                   const quad::QuadratureSpec& spec,
                                   BoundarySide side = BoundarySide::Auto,
                                   TracePart part = TracePart::Scattering);

// xi^2 * Tr G at omega = i xi, computed without the 1/xi^2 intermediate so the
// xi -> 0 limit is regular.  Used by the finite-temperature energy profile.
double planar_trace_weighted_imag(const PlanarStack& stack, double z, double xi,
                                  const quad::QuadratureSpec& spec,
                                  BoundarySide side = BoundarySide::Auto,
                                  TracePart part = TracePart::Scattering);

} // namespace caskit::green
