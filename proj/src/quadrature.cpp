#include "caskit/quadrature.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>

namespace caskit::quad {

namespace {

// QUADPACK G7/K15 nodes and weights on [-1, 1].
constexpr double kKronrodNodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0,
};
constexpr double kKronrodWeights[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728,
};
// Gauss weights attach to Kronrod nodes 1, 3, 5, 7.
constexpr double kGaussWeights[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469,
};

struct Panel {
    double value;
    double error;
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
    const double h = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);

    const double f_mid = f(mid);
    double kron = kKronrodWeights[7] * f_mid;
    double gauss = kGaussWeights[3] * f_mid;
    for (int i = 0; i < 7; ++i) {
        const double dx = h * kKronrodNodes[i];
        const double fsum = f(mid - dx) + f(mid + dx);
        kron += kKronrodWeights[i] * fsum;
        if (i % 2 == 1) gauss += kGaussWeights[i / 2] * fsum;
    }
    return Panel{kron * h, std::abs(kron - gauss) * std::abs(h)};
}

// Depth-first bisection, left panel first, so the accumulation order is a
// pure function of the integrand and the spec.  `scale` is the magnitude of
// the leading whole-interval estimate; abs_tol acts as a noise floor relative
// to it (tolerances are dimensionless so results do not depend on the
// integrand's physical units).
void refine(const std::function<double(double)>& f, double a, double b, const Panel& coarse,
            int depth, const QuadratureSpec& spec, double scale, double& acc, double& acc_comp,
            double& err) {
    const double tol =
        std::max({spec.abs_tol * scale, spec.rel_tol * std::abs(coarse.value), 1e-300});
    if (coarse.error <= tol || depth >= spec.max_panel_depth) {
        if (depth >= spec.max_panel_depth && coarse.error > 64.0 * std::max(tol, 1e-30 * scale)) {
            char msg[160];
            std::snprintf(msg, sizeof(msg),
                          "quadrature panel depth exhausted on [%.9g, %.9g], value %.6g, "
                          "error %.6g, scale %.6g",
                          a, b, coarse.value, coarse.error, scale);
            throw NonConvergenceError(msg);
        }
        // Kahan accumulation
        const double y = coarse.value - acc_comp;
        const double t = acc + y;
        acc_comp = (t - acc) - y;
        acc = t;
        err += coarse.error;
        return;
    }
    const double mid = 0.5 * (a + b);
    const Panel left = gk15(f, a, mid);
    const Panel right = gk15(f, mid, b);
    refine(f, a, mid, left, depth + 1, spec, scale, acc, acc_comp, err);
    refine(f, mid, b, right, depth + 1, spec, scale, acc, acc_comp, err);
}

} // namespace

IntegralResult kronrod15(const std::function<double(double)>& f, double a, double b) {
    const Panel p = gk15(f, a, b);
    return IntegralResult{p.value, p.error};
}

IntegralResult integrate(const std::function<double(double)>& f, double a, double b,
                         const QuadratureSpec& spec) {
    spec.validate();
    if (a == b) return {};
    double acc = 0.0, comp = 0.0, err = 0.0;
    const Panel top = gk15(f, a, b);
    const double scale = std::max(std::abs(top.value), top.error);
    refine(f, a, b, top, 0, spec, scale, acc, comp, err);
    return IntegralResult{acc, err};
}

IntegralResult integrate_semi_infinite(const std::function<double(double)>& f, double scale,
                                       const QuadratureSpec& spec) {
    if (!(scale > 0.0)) throw std::invalid_argument("integrate_semi_infinite: scale must be > 0");
    auto g = [&f, scale](double u) {
        const double w = 1.0 - u;
        const double x = scale * u / w;
        return f(x) * scale / (w * w);
    };
    return integrate(g, 0.0, 1.0, spec);
}

IntegralResult integrate_exp_decay(const std::function<double(double)>& f, double t0,
                                   double panel_width, const QuadratureSpec& spec) {
    spec.validate();
    if (!(panel_width > 0.0))
        throw std::invalid_argument("integrate_exp_decay: panel width must be > 0");

    double acc = 0.0, comp = 0.0, err = 0.0;
    double prev = 0.0, last = 0.0;
    int panels = 0;
    const int max_panels = 512;
    double a = t0;
    for (; panels < max_panels; ++panels) {
        const double b = a + panel_width;
        const IntegralResult panel = integrate(f, a, b, spec);
        const double y = panel.value - comp;
        const double t = acc + y;
        comp = (t - acc) - y;
        acc = t;
        err += panel.error;
        prev = last;
        last = panel.value;
        a = b;
        if (panels >= 2 && std::abs(last) <= spec.rel_tol * std::abs(acc)) break;
    }
    if (panels == max_panels) throw NonConvergenceError("integrate_exp_decay: no panel decay");

    // Geometric tail from the last two panels; exact for a pure exponential.
    if (prev != 0.0 && last != 0.0) {
        const double ratio = last / prev;
        if (ratio > 0.0 && ratio < 1.0) {
            const double tail = last * ratio / (1.0 - ratio);
            acc += tail;
            err += std::abs(tail) * 0.1 + std::abs(tail) * (1.0 - ratio);
        }
    }
    return IntegralResult{acc, err};
}

} // namespace caskit::quad
