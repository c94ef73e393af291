#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "caskit/quadrature.hpp"

// Causal permittivity and polarizability models, evaluable on the real and
// the imaginary frequency axis.  All frequencies are in natural units
// (c = hbar = 1); see units.hpp for the SI boundary.

namespace caskit::dielectric {

using complex = std::complex<double>;

struct DomainError : std::domain_error {
    explicit DomainError(const std::string& w) : std::domain_error(w) {}
};
struct UnsupportedAxisError : std::runtime_error {
    explicit UnsupportedAxisError(const std::string& w) : std::runtime_error(w) {}
};
struct PoleError : std::runtime_error {
    explicit PoleError(const std::string& w) : std::runtime_error(w) {}
};

// One damped-oscillator species: coupling = squared plasma frequency
// Omega^2 = N e^2/m, resonance omega_0, damping gamma.  Drude is omega_0 = 0
// with gamma > 0.
struct OscillatorParams {
    double coupling = 0.0;
    double resonance = 1.0;
    double damping = 0.0;

    void validate() const;
};

enum class Variant { Vacuum, LorentzSum, Drude, TabulatedImagAxis, IdealMirror };

// Out-of-range policy for tabulated imaginary-axis data.  With tails enabled,
// below-range evaluation returns the first sample's value and above-range
// follows 1 + A/xi^2 with A fitted to the last two samples.
struct TableTails {
    bool enabled = false;
};

class PermittivityModel {
public:
    static PermittivityModel vacuum();
    static PermittivityModel lorentz(std::vector<OscillatorParams> oscillators);
    static PermittivityModel drude(double coupling, double damping);
    static PermittivityModel tabulated(std::vector<std::pair<double, double>> xi_eps,
                                       TableTails tails = {});
    // Constant eps = scale, meant to be driven to the conductor limit by
    // Richardson extrapolation in the scale (see lifshitz module).
    static PermittivityModel ideal_mirror(double scale = 1.0e6);

    Variant variant() const { return variant_; }
    bool is_ideal_mirror() const { return variant_ == Variant::IdealMirror; }
    double mirror_scale() const { return mirror_scale_; }
    const std::vector<OscillatorParams>& oscillators() const { return oscillators_; }

    // Returns a copy with the mirror scale replaced (identity for other
    // variants); used by the conductor-limit extrapolation.
    PermittivityModel with_mirror_scale(double scale) const;

    bool lossless() const;

private:
    Variant variant_ = Variant::Vacuum;
    std::vector<OscillatorParams> oscillators_;
    std::vector<std::pair<double, double>> table_;
    TableTails tails_;
    double mirror_scale_ = 0.0;

    friend complex eps_real_axis(const PermittivityModel&, double);
    friend double eps_imag_axis(const PermittivityModel&, double);
    friend double eps_imag_axis_derivative(const PermittivityModel&, double);
};

// eps(omega) = 1 + sum Omega^2 / (omega_0^2 - omega^2 - i gamma omega), omega > 0.
complex eps_real_axis(const PermittivityModel& model, double omega);

// d eps/d omega on the real axis, analytic for oscillator models.
complex eps_real_axis_derivative(const PermittivityModel& model, double omega);

// eps(i xi) = 1 + sum Omega^2 / (omega_0^2 + xi^2 + gamma xi), real and >= 1
// for passive models; monotone log-log interpolation for tables.
double eps_imag_axis(const PermittivityModel& model, double xi);

// d/dxi eps(i xi), analytic for oscillator models, centered log-grid stencil
// for tabulated data.
double eps_imag_axis_derivative(const PermittivityModel& model, double xi);

// Single-species polarizability alpha_0(omega) = strength / (omega_0^2 -
// omega^2 - i gamma omega) for omega in the closed upper half plane.
// strength is e^2/m in natural units; alpha_0(0) has dimension length^3.
complex polarizability(const OscillatorParams& osc, double strength, complex omega);

// Causality self-check: rebuilds eps(i xi) from the real-axis absorption via
// 1 + (2/pi) Int_0^inf w eps_I(w) / (w^2 + xi^2) dw and returns the maximum
// relative deviation from eps_imag_axis over the grid.
double kk_consistency_residual(const PermittivityModel& model, const std::vector<double>& xi_grid,
                               const quad::QuadratureSpec& spec);

// JSON ingestion.  Document shape:
//   {"name": "...", "variant": "vacuum|lorentz|drude|table|ideal_mirror",
//    "oscillators": [{"omega_p2":..., "omega_0":..., "gamma":...}, ...],
//    "table": [[xi, eps], ...], "scale": ...}
// Frequencies in the document are in rad/s and converted with the scale
// supplied by the caller (rad/s * L0 / c).
PermittivityModel model_from_json(const std::string& json_text, double freq_to_natural);

} // namespace caskit::dielectric
