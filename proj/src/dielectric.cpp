#include "caskit/dielectric.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <json.hpp>

namespace caskit::dielectric {

void OscillatorParams::validate() const {
    if (coupling < 0.0 || resonance < 0.0 || damping < 0.0)
        throw std::invalid_argument("OscillatorParams: coupling, resonance, damping must be >= 0");
    if (resonance == 0.0 && damping == 0.0 && coupling > 0.0)
        throw std::invalid_argument("OscillatorParams: Drude case requires gamma > 0");
}

PermittivityModel PermittivityModel::vacuum() { return PermittivityModel{}; }

PermittivityModel PermittivityModel::lorentz(std::vector<OscillatorParams> oscillators) {
    for (const auto& o : oscillators) o.validate();
    PermittivityModel m;
    m.variant_ = Variant::LorentzSum;
    m.oscillators_ = std::move(oscillators);
    return m;
}

PermittivityModel PermittivityModel::drude(double coupling, double damping) {
    OscillatorParams o{coupling, 0.0, damping};
    o.validate();
    PermittivityModel m;
    m.variant_ = Variant::Drude;
    m.oscillators_ = {o};
    return m;
}

PermittivityModel PermittivityModel::tabulated(std::vector<std::pair<double, double>> xi_eps,
                                               TableTails tails) {
    if (xi_eps.size() < 2)
        throw std::invalid_argument("tabulated permittivity needs at least two samples");
    for (std::size_t i = 0; i < xi_eps.size(); ++i) {
        if (xi_eps[i].second < 1.0)
            throw std::invalid_argument("tabulated eps(i xi) must be >= 1 (passive)");
        if (i > 0) {
            if (!(xi_eps[i].first > xi_eps[i - 1].first))
                throw std::invalid_argument("tabulated xi grid must be strictly increasing");
            if (xi_eps[i].second > xi_eps[i - 1].second)
                throw std::invalid_argument("tabulated eps(i xi) must be nonincreasing");
        }
    }
    PermittivityModel m;
    m.variant_ = Variant::TabulatedImagAxis;
    m.table_ = std::move(xi_eps);
    m.tails_ = tails;
    return m;
}

PermittivityModel PermittivityModel::ideal_mirror(double scale) {
    if (!(scale > 0.0)) throw std::invalid_argument("ideal_mirror scale must be > 0");
    PermittivityModel m;
    m.variant_ = Variant::IdealMirror;
    m.mirror_scale_ = scale;
    return m;
}

PermittivityModel PermittivityModel::with_mirror_scale(double scale) const {
    if (variant_ != Variant::IdealMirror) return *this;
    return ideal_mirror(scale);
}

bool PermittivityModel::lossless() const {
    switch (variant_) {
        case Variant::Vacuum:
        case Variant::IdealMirror:
        case Variant::TabulatedImagAxis:
            return true;
        default:
            break;
    }
    return std::all_of(oscillators_.begin(), oscillators_.end(),
                       [](const OscillatorParams& o) { return o.damping == 0.0; });
}

complex eps_real_axis(const PermittivityModel& model, double omega) {
    if (!(omega > 0.0)) throw DomainError("eps_real_axis: omega must be > 0");
    switch (model.variant_) {
        case Variant::Vacuum:
            return {1.0, 0.0};
        case Variant::IdealMirror:
            return {model.mirror_scale_, 0.0};
        case Variant::TabulatedImagAxis:
            throw UnsupportedAxisError(
                "eps_real_axis: imaginary-axis tables cannot be evaluated on the real axis");
        default:
            break;
    }
    complex eps{1.0, 0.0};
    const complex i{0.0, 1.0};
    for (const auto& o : model.oscillators_)
        eps += o.coupling / (o.resonance * o.resonance - omega * omega - i * o.damping * omega);
    return eps;
}

complex eps_real_axis_derivative(const PermittivityModel& model, double omega) {
    if (!(omega > 0.0)) throw DomainError("eps_real_axis_derivative: omega must be > 0");
    switch (model.variant()) {
        case Variant::Vacuum:
        case Variant::IdealMirror:
            return {0.0, 0.0};
        case Variant::TabulatedImagAxis:
            throw UnsupportedAxisError(
                "eps_real_axis_derivative: imaginary-axis tables have no real-axis form");
        default:
            break;
    }
    complex d{0.0, 0.0};
    const complex i{0.0, 1.0};
    for (const auto& o : model.oscillators()) {
        const complex den =
            o.resonance * o.resonance - omega * omega - i * o.damping * omega;
        d += o.coupling * (2.0 * omega + i * o.damping) / (den * den);
    }
    return d;
}

double eps_imag_axis(const PermittivityModel& model, double xi) {
    if (xi < 0.0) throw DomainError("eps_imag_axis: xi must be >= 0");
    switch (model.variant_) {
        case Variant::Vacuum:
            return 1.0;
        case Variant::IdealMirror:
            return model.mirror_scale_;
        case Variant::TabulatedImagAxis: {
            const auto& tab = model.table_;
            if (xi <= tab.front().first) {
                if (xi == tab.front().first) return tab.front().second;
                if (!model.tails_.enabled)
                    throw DomainError("eps_imag_axis: xi below table range, no tail configured");
                return tab.front().second; // constant static tail
            }
            if (xi >= tab.back().first) {
                if (xi == tab.back().first) return tab.back().second;
                if (!model.tails_.enabled)
                    throw DomainError("eps_imag_axis: xi above table range, no tail configured");
                // 1 + A/xi^2 with log A averaged over the last two samples
                const auto& [x1, e1] = tab[tab.size() - 2];
                const auto& [x2, e2] = tab[tab.size() - 1];
                const double logA =
                    0.5 * (std::log((e1 - 1.0) * x1 * x1) + std::log((e2 - 1.0) * x2 * x2));
                return 1.0 + std::exp(logA) / (xi * xi);
            }
            // linear in (log xi, log(eps - 1))
            auto it = std::upper_bound(tab.begin(), tab.end(), xi,
                                       [](double v, const auto& p) { return v < p.first; });
            const auto& [xb, eb] = *it;
            const auto& [xa, ea] = *(it - 1);
            const double t = (std::log(xi) - std::log(xa)) / (std::log(xb) - std::log(xa));
            const double ly = (1.0 - t) * std::log(ea - 1.0) + t * std::log(eb - 1.0);
            return 1.0 + std::exp(ly);
        }
        default:
            break;
    }
    double eps = 1.0;
    for (const auto& o : model.oscillators_)
        eps += o.coupling / (o.resonance * o.resonance + xi * xi + o.damping * xi);
    return eps;
}

double eps_imag_axis_derivative(const PermittivityModel& model, double xi) {
    if (xi < 0.0) throw DomainError("eps_imag_axis_derivative: xi must be >= 0");
    switch (model.variant_) {
        case Variant::Vacuum:
        case Variant::IdealMirror:
            return 0.0;
        case Variant::TabulatedImagAxis: {
            // centered stencil on a log grid; documented fallback for data
            const double h = std::max(1e-4, 1e-4 * xi);
            const double lo = std::max(0.0, xi - h);
            return (eps_imag_axis(model, xi + h) - eps_imag_axis(model, lo)) / (xi + h - lo);
        }
        default:
            break;
    }
    double d = 0.0;
    for (const auto& o : model.oscillators_) {
        const double den = o.resonance * o.resonance + xi * xi + o.damping * xi;
        d -= o.coupling * (2.0 * xi + o.damping) / (den * den);
    }
    return d;
}

complex polarizability(const OscillatorParams& osc, double strength, complex omega) {
    osc.validate();
    if (omega.imag() < 0.0)
        throw DomainError("polarizability: omega must lie in the closed upper half-plane");
    const complex i{0.0, 1.0};
    const complex den =
        osc.resonance * osc.resonance - omega * omega - i * osc.damping * omega;
    if (std::abs(den) == 0.0)
        throw PoleError("polarizability: undamped resonance pole at omega = omega_0");
    return strength / den;
}

double kk_consistency_residual(const PermittivityModel& model, const std::vector<double>& xi_grid,
                               const quad::QuadratureSpec& spec) {
    if (model.variant() == Variant::Vacuum || model.variant() == Variant::IdealMirror) return 0.0;
    if (model.variant() == Variant::TabulatedImagAxis)
        throw UnsupportedAxisError("kk_consistency_residual: model must be evaluable on both axes");

    double residual = 0.0;
    for (const double xi : xi_grid) {
        double scale = std::max(xi, 1.0);
        for (const auto& o : model.oscillators())
            scale = std::max({scale, o.resonance, o.damping});
        auto integrand = [&](double w) {
            if (w == 0.0) return 0.0;
            return w * eps_real_axis(model, w).imag() / (w * w + xi * xi);
        };
        const auto kk = quad::integrate_semi_infinite(integrand, scale, spec);
        const double recon = 1.0 + (2.0 / std::numbers::pi) * kk.value;
        const double ref = eps_imag_axis(model, xi);
        residual = std::max(residual, std::abs(recon - ref) / std::abs(ref));
    }
    return residual;
}

PermittivityModel model_from_json(const std::string& json_text, double freq_to_natural) {
    const auto j = nlohmann::json::parse(json_text);
    const std::string variant = j.at("variant").get<std::string>();
    const double f2n = freq_to_natural;
    if (variant == "vacuum") return PermittivityModel::vacuum();
    if (variant == "ideal_mirror")
        return PermittivityModel::ideal_mirror(j.value("scale", 1.0e6));
    if (variant == "lorentz" || variant == "drude") {
        std::vector<OscillatorParams> oscs;
        for (const auto& o : j.at("oscillators")) {
            OscillatorParams p;
            p.coupling = o.at("omega_p2").get<double>() * f2n * f2n;
            p.resonance = o.value("omega_0", 0.0) * f2n;
            p.damping = o.at("gamma").get<double>() * f2n;
            oscs.push_back(p);
        }
        if (variant == "drude") {
            if (oscs.size() != 1 || oscs[0].resonance != 0.0)
                throw std::invalid_argument("drude variant takes one oscillator with omega_0 = 0");
            return PermittivityModel::drude(oscs[0].coupling, oscs[0].damping);
        }
        return PermittivityModel::lorentz(std::move(oscs));
    }
    if (variant == "table") {
        std::vector<std::pair<double, double>> rows;
        for (const auto& r : j.at("table"))
            rows.emplace_back(r.at(0).get<double>() * f2n, r.at(1).get<double>());
        TableTails tails{j.value("tails", false)};
        return PermittivityModel::tabulated(std::move(rows), tails);
    }
    throw std::invalid_argument("unknown permittivity variant: " + variant);
}

} // namespace caskit::dielectric
