#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "caskit/lifshitz.hpp"
#include "caskit/units.hpp"

using namespace caskit;
using dielectric::PermittivityModel;
using lifshitz::PlanarStack;
using lifshitz::ThermalState;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kZeta3 = 1.2020569031595943;

PlanarStack mirrors(double d) {
    return PlanarStack{PermittivityModel::ideal_mirror(), PermittivityModel::ideal_mirror(),
                       PermittivityModel::vacuum(), d};
}

PlanarStack drude_plates(double d) {
    return PlanarStack{PermittivityModel::drude(4.0, 0.2), PermittivityModel::drude(4.0, 0.2),
                       PermittivityModel::vacuum(), d};
}

PlanarStack lorentz_plates(double d, double gamma = 0.3) {
    const auto m = PermittivityModel::lorentz({{1.0, 1.0, gamma}});
    return PlanarStack{m, m, PermittivityModel::vacuum(), d};
}

} // namespace

TEST_CASE("matsubara frequencies: spacing, zero weight, SI value at 300 K") {
    const auto terms = lifshitz::matsubara_frequencies(0.5, 4);
    REQUIRE(terms.size() == 5);
    CHECK(terms[0].xi == 0.0);
    CHECK(terms[0].weight == 0.5);
    for (std::size_t n = 1; n < terms.size(); ++n) {
        CHECK(terms[n].weight == 1.0);
        CHECK(terms[n].xi - terms[n - 1].xi == doctest::Approx(2.0 * kPi * 0.5).epsilon(1e-15));
    }
    CHECK_THROWS_AS(lifshitz::matsubara_frequencies(0.0, 3), std::domain_error);

    // independent constant-table computation: 2 pi kB 300 / hbar
    const double expected = 2.0 * kPi * 1.380649e-23 * 300.0 / 1.054571817e-34;
    CHECK(units::matsubara_si(300.0, 1) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(units::matsubara_si(300.0, 1) == doctest::Approx(2.468e14).epsilon(1e-3));
}

TEST_CASE("ideal-mirror Casimir pressure at T = 0 (analytic oracle)") {
    quad::QuadratureSpec spec;
    const double d = 1.0;
    const auto f = lifshitz::force_per_area(mirrors(d), {0.0}, spec);
    const double exact = -kPi * kPi / 240.0;
    CHECK(f.pressure == doctest::Approx(exact).epsilon(0.005));
    CHECK(f.pressure == f.te + f.tm);
    // equal te/tm split for ideal mirrors at T=0
    CHECK(f.te == doctest::Approx(f.tm).epsilon(0.02));
    CHECK(f.err_estimate >= 0.0);
}

TEST_CASE("identical media: force and free energy exactly zero") {
    quad::QuadratureSpec spec;
    const auto med = PermittivityModel::lorentz({{2.0, 1.0, 0.3}});
    PlanarStack st{med, med, med, 1.0};
    const auto f = lifshitz::force_per_area(st, {0.0}, spec);
    CHECK(f.pressure == 0.0);
    CHECK(f.te == 0.0);
    CHECK(f.tm == 0.0);
    CHECK(lifshitz::force_per_area(st, {0.05}, spec).pressure == 0.0);
    CHECK(lifshitz::free_energy_per_area(st, {0.0}, spec).value == 0.0);
}

TEST_CASE("swap of the two plates leaves the pressure unchanged") {
    quad::QuadratureSpec spec;
    PlanarStack st{PermittivityModel::drude(3.0, 0.4),
                   PermittivityModel::lorentz({{1.0, 2.0, 0.1}}), PermittivityModel::vacuum(),
                   0.7};
    const double a = lifshitz::force_per_area(st, {0.0}, spec).pressure;
    std::swap(st.eps1, st.eps2);
    const double b = lifshitz::force_per_area(st, {0.0}, spec).pressure;
    CHECK(a == doctest::Approx(b).epsilon(1e-12));
}

TEST_CASE("identical plates across vacuum attract; te and tm each attract") {
    quad::QuadratureSpec spec;
    for (const auto& st : {drude_plates(1.0), lorentz_plates(0.6), mirrors(2.0)}) {
        for (const double T : {0.0, 0.08}) {
            const auto f = lifshitz::force_per_area(st, {T}, spec);
            CHECK(f.pressure < 0.0);
            CHECK(f.te <= 1e-15);
            CHECK(f.tm <= 1e-15);
        }
    }
}

TEST_CASE("|pressure| strictly decreasing in d (property)") {
    quad::QuadratureSpec spec;
    double prev = std::numeric_limits<double>::infinity();
    for (double d = 0.3; d < 12.0; d *= 1.9) {
        const double p = std::abs(lifshitz::force_per_area(drude_plates(d), {0.0}, spec).pressure);
        CHECK(p < prev);
        prev = p;
    }
}

TEST_CASE("ideal-mirror free energy at T = 0 and d -> infinity limit") {
    quad::QuadratureSpec spec;
    const auto e = lifshitz::free_energy_per_area(mirrors(1.0), {0.0}, spec);
    CHECK(e.value == doctest::Approx(-kPi * kPi / 720.0).epsilon(0.005));
    CHECK(e.value < 0.0);

    const auto near = lifshitz::free_energy_per_area(drude_plates(1.0), {0.0}, spec);
    const auto far = lifshitz::free_energy_per_area(drude_plates(80.0), {0.0}, spec);
    CHECK(std::abs(far.value) < 1e-5 * std::abs(near.value));
}

TEST_CASE("gradient identity: -dE/dd equals the pressure (Drude plates)") {
    quad::QuadratureSpec spec;
    spec.rel_tol = 1e-10;
    for (const double d : {0.5, 1.0, 3.0}) {
        const double h = 1e-3 * d;
        auto E = [&](double dd) {
            return lifshitz::free_energy_per_area(drude_plates(dd), {0.0}, spec).value;
        };
        const double d1 = (E(d + h) - E(d - h)) / (2.0 * h);
        const double d2 = (E(d + 0.5 * h) - E(d - 0.5 * h)) / h;
        const double dEdd = (4.0 * d2 - d1) / 3.0;
        const double p = lifshitz::force_per_area(drude_plates(d), {0.0}, spec).pressure;
        CHECK(-dEdd == doctest::Approx(p).epsilon(1e-3));
    }
}

TEST_CASE("high-temperature ideal mirrors: -zeta(3) T / 8 pi d^3") {
    quad::QuadratureSpec spec;
    const double d = 1.0;
    const double T = 20.0 / (2.0 * kPi * d); // 2 pi T d = 20
    const auto f = lifshitz::force_per_area(mirrors(d), {T}, spec);
    const double exact = -kZeta3 * T / (8.0 * kPi * d * d * d);
    CHECK(f.pressure == doctest::Approx(exact).epsilon(0.01));
    // n = 0 dominates and is tm-only for constant-eps mirrors
    CHECK(f.n0_term == doctest::Approx(f.pressure).epsilon(1e-6));
    CHECK(std::abs(f.te) < 1e-8 * std::abs(f.tm));
}

TEST_CASE("low-temperature limit matches the T = 0 integral") {
    quad::QuadratureSpec spec;
    const double d = 1.0;
    const double T = 0.02 / (2.0 * kPi * d); // 2 pi T d = 0.02
    const auto cold = lifshitz::force_per_area(drude_plates(d), {T}, spec);
    const auto zero = lifshitz::force_per_area(drude_plates(d), {0.0}, spec);
    CHECK(cold.pressure == doctest::Approx(zero.pressure).epsilon(0.01));
}

TEST_CASE("Wick rotation: real-axis force equals the imaginary-axis force") {
    quad::QuadratureSpec spec;
    spec.rel_tol = 1e-7;
    const PlanarStack st = lorentz_plates(1.0, 0.3);
    const auto imag = lifshitz::force_per_area(st, {0.0}, spec);
    const auto real = lifshitz::force_per_area_real_axis(st, {0.0}, spec);
    CHECK(real.pressure == doctest::Approx(imag.pressure).epsilon(0.01));

    // lossless stacks are rejected on the real axis
    CHECK_THROWS(lifshitz::force_per_area_real_axis(mirrors(1.0), {0.0}, spec));
}

TEST_CASE("surface force jumps: zero stack, symmetry, matches the pressure") {
    quad::QuadratureSpec spec;
    const auto med = PermittivityModel::drude(2.0, 0.5);
    PlanarStack same{med, med, med, 1.0};
    const auto zero = lifshitz::surface_force_jumps(same, {0.0}, spec);
    CHECK(zero.total == doctest::Approx(0.0).epsilon(1e-12));

    const auto j = lifshitz::surface_force_jumps(mirrors(1.0), {0.0}, spec);
    CHECK(j.interface_0 == j.interface_d);
    CHECK(j.interface_0 + j.interface_d == doctest::Approx(j.total).epsilon(1e-14));
    const auto f = lifshitz::force_per_area(mirrors(1.0), {0.0}, spec);
    CHECK(j.total == doctest::Approx(f.pressure).epsilon(0.01));
}

TEST_CASE("energy density profile: vacuum zero, mirror symmetry, cavity center") {
    quad::QuadratureSpec spec;
    PlanarStack vac{PermittivityModel::vacuum(), PermittivityModel::vacuum(),
                    PermittivityModel::vacuum(), 1.0};
    CHECK(lifshitz::energy_density_profile(vac, 0.3, {0.0}, spec) == 0.0);

    const PlanarStack dr = drude_plates(1.0);
    const double a = lifshitz::energy_density_profile(dr, 0.25, {0.0}, spec);
    const double b = lifshitz::energy_density_profile(dr, 0.75, {0.0}, spec);
    CHECK(a == doctest::Approx(b).epsilon(1e-9));

    // ideal cavity, gap center: exact reduction of the image/mode sum gives
    // u(d/2) = (11 pi^4 / 45 - 24) / (4 pi^2 d^4) = -0.0047843 / d^4
    const double d = 1.0;
    const double u = lifshitz::energy_density_profile(mirrors(d), 0.5 * d, {0.0}, spec);
    const double exact = (11.0 * std::pow(kPi, 4) / 45.0 - 24.0) / (4.0 * kPi * kPi);
    CHECK(u < 0.0);
    CHECK(u == doctest::Approx(exact / (d * d * d * d)).epsilon(0.005));

    // boundary limits need a side tag, then are finite
    CHECK_THROWS(lifshitz::energy_density_profile(dr, 0.0, {0.0}, spec));
    const double edge = lifshitz::energy_density_profile(dr, 0.0, {0.0}, spec,
                                                         green::BoundarySide::Plus);
    CHECK(std::isfinite(edge));
}

TEST_CASE("bulk spectral energy density: vacuum, dense lossless, two routes") {
    const double w = 0.7;
    const auto vac = lifshitz::bulk_spectral_energy_density(PermittivityModel::vacuum(), w);
    const double vac_exact = w * w * w / (2.0 * kPi * kPi); // (hw/2) * w^2/pi^2
    CHECK(vac.closed_form == doctest::Approx(vac_exact).epsilon(1e-12));
    CHECK(vac.general_split == doctest::Approx(vac_exact).epsilon(1e-12));
    CHECK(vac.defect == doctest::Approx(0.0).epsilon(1e-12));

    // dispersionless n = 2: 8x vacuum
    const auto dense = PermittivityModel::lorentz({{3.0e12, 1.0e6, 0.0}});
    const auto v = lifshitz::bulk_spectral_energy_density(dense, w);
    CHECK(v.closed_form == doctest::Approx(8.0 * vac_exact).epsilon(1e-9));
    CHECK(v.general_split == doctest::Approx(v.closed_form).epsilon(1e-9));

    // lossy model: the two routes differ by the exact total derivative;
    // the corrected defect vanishes
    const auto lossy = PermittivityModel::lorentz({{1.0, 1.0, 0.1}});
    const auto l = lifshitz::bulk_spectral_energy_density(lossy, 0.5);
    CHECK(std::abs(l.defect) <= 1e-9 * std::abs(l.closed_form));
    CHECK(l.general_split != doctest::Approx(l.closed_form).epsilon(1e-9));
}

TEST_CASE("noise energy spectral density: lossless zero, eps = 3+4i value") {
    const ThermalState t0{0.0};
    CHECK(lifshitz::noise_energy_spectral_density(PermittivityModel::vacuum(), 1.0, t0) == 0.0);
    const auto lossless = PermittivityModel::lorentz({{1.0, 2.0, 0.0}});
    CHECK(lifshitz::noise_energy_spectral_density(lossless, 1.0, t0) == 0.0);

    // eps(1) = 1 + 5/(1.5 - 1 - i) = 3 + 4i exactly; n = 2 + i
    const auto m = PermittivityModel::lorentz({{5.0, std::sqrt(1.5), 1.0}});
    const double w = 1.0;
    CHECK(lifshitz::noise_energy_spectral_density(m, w, t0) ==
          doctest::Approx(-w * w * w / (kPi * kPi)).epsilon(1e-12));
}

TEST_CASE("absorption rate spectral density: nonnegative, eps = 3+4i, resonance peak") {
    const auto lossless = PermittivityModel::lorentz({{1.0, 2.0, 0.0}});
    CHECK(lifshitz::absorption_rate_spectral_density(lossless, 1.3) == 0.0);

    const auto m = PermittivityModel::lorentz({{5.0, std::sqrt(1.5), 1.0}});
    CHECK(lifshitz::absorption_rate_spectral_density(m, 1.0) ==
          doctest::Approx(4.0 / (kPi * kPi)).epsilon(1e-12));

    // scan: maximal near the resonance
    const auto res = PermittivityModel::lorentz({{1.0, 1.0, 0.05}});
    double best_w = 0.0, best_v = -1.0;
    for (double w = 0.3; w < 3.0; w += 0.01) {
        const double v = lifshitz::absorption_rate_spectral_density(res, w);
        CHECK(v >= 0.0);
        if (v > best_v) {
            best_v = v;
            best_w = w;
        }
    }
    CHECK(best_w == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("local density of states: vacuum, static Lorentz, derivative oracle") {
    CHECK(lifshitz::local_dos(PermittivityModel::vacuum(), 2.0) ==
          doctest::Approx(2.0 / (2.0 * kPi * kPi)).epsilon(1e-14));

    const auto m = PermittivityModel::lorentz({{1.0, 1.0, 0.1}});
    // static limit: (nu/4pi^2) * 2 (1 + W/w0^2)
    const double nu0 = 1e-6;
    CHECK(lifshitz::local_dos(m, nu0) ==
          doctest::Approx(nu0 / (4.0 * kPi * kPi) * 4.0).epsilon(1e-5));

    // finite-difference derivative oracle at nu = 1
    const double nu = 1.0, h = 1e-6;
    const double eta = dielectric::eps_imag_axis(m, nu);
    const double etap_fd =
        (dielectric::eps_imag_axis(m, nu + h) - dielectric::eps_imag_axis(m, nu - h)) / (2.0 * h);
    const double expected = nu / (4.0 * kPi * kPi) * (2.0 * eta + nu * etap_fd);
    CHECK(lifshitz::local_dos(m, nu) == doctest::Approx(expected).epsilon(1e-9));

    // positivity for passive models
    for (double nu_s = 0.1; nu_s < 30.0; nu_s *= 1.6)
        CHECK(lifshitz::local_dos(m, nu_s) > 0.0);
}

TEST_CASE("dilute linearized force agrees with the full force for weak media") {
    quad::QuadratureSpec spec;
    const auto weak = PermittivityModel::lorentz({{1e-3, 1.0, 0.1}});
    PlanarStack st{weak, weak, PermittivityModel::vacuum(), 1.0};
    const double full = lifshitz::force_per_area(st, {0.0}, spec).pressure;
    const double lin = lifshitz::force_per_area_dilute(st, spec);
    CHECK(lin == doctest::Approx(full).epsilon(2e-3));
    CHECK(lin < 0.0);
}

TEST_CASE("tabulated imaginary-axis material drives the full force pipeline") {
    quad::QuadratureSpec spec;
    // samples of eps(i xi) = 1 + 3/(1 + xi^2) on a log grid, with tails
    std::vector<std::pair<double, double>> rows;
    for (double xi = 0.01; xi < 400.0; xi *= 1.25)
        rows.emplace_back(xi, 1.0 + 3.0 / (1.0 + xi * xi));
    const auto tab = dielectric::PermittivityModel::tabulated(rows, dielectric::TableTails{true});
    const auto exact = PermittivityModel::lorentz({{3.0, 1.0, 0.0}});
    PlanarStack st_tab{tab, tab, PermittivityModel::vacuum(), 1.0};
    PlanarStack st_exact{exact, exact, PermittivityModel::vacuum(), 1.0};
    const double p_tab = lifshitz::force_per_area(st_tab, {0.0}, spec).pressure;
    const double p_exact = lifshitz::force_per_area(st_exact, {0.0}, spec).pressure;
    CHECK(p_tab == doctest::Approx(p_exact).epsilon(2e-3)); // interpolation error only
}

TEST_CASE("energy profile is finite inside the plates and decays into them") {
    quad::QuadratureSpec spec;
    const PlanarStack st = drude_plates(1.0);
    const double u_in1 = lifshitz::energy_density_profile(st, -0.2, {0.0}, spec);
    const double u_in2 = lifshitz::energy_density_profile(st, -0.8, {0.0}, spec);
    CHECK(std::isfinite(u_in1));
    CHECK(std::abs(u_in2) < std::abs(u_in1)); // deeper = weaker
    // mirror symmetry maps plate 1 to plate 2
    const double u_mirror = lifshitz::energy_density_profile(st, 1.2, {0.0}, spec);
    CHECK(u_in1 == doctest::Approx(u_mirror).epsilon(1e-9));
}

TEST_CASE("free energy n0 term and truncation estimate are populated at T > 0") {
    quad::QuadratureSpec spec;
    const auto f = lifshitz::force_per_area(drude_plates(1.0), {0.2}, spec);
    CHECK(f.n0_term < 0.0);
    CHECK(f.err_estimate >= 0.0);
    CHECK(f.pressure == f.te + f.tm);
}

TEST_CASE("real axis: identical lossy media give zero; plate swap invariant") {
    quad::QuadratureSpec spec;
    const auto med = PermittivityModel::lorentz({{1.0, 1.0, 0.3}});
    PlanarStack st{med, med, med, 1.0};
    CHECK(lifshitz::force_per_area_real_axis(st, {0.0}, spec).pressure == 0.0);

    spec.rel_tol = 1e-6;
    PlanarStack ab{med, PermittivityModel::drude(2.0, 0.4), PermittivityModel::vacuum(), 1.0};
    PlanarStack ba{PermittivityModel::drude(2.0, 0.4), med, PermittivityModel::vacuum(), 1.0};
    const double pa = lifshitz::force_per_area_real_axis(ab, {0.0}, spec).pressure;
    const double pb = lifshitz::force_per_area_real_axis(ba, {0.0}, spec).pressure;
    CHECK(pa == doctest::Approx(pb).epsilon(1e-10));
}

TEST_CASE("energy profile and surface jumps at finite temperature") {
    quad::QuadratureSpec spec;
    const PlanarStack st = drude_plates(1.0);
    const double T_small = 0.02 / (2.0 * kPi);
    const double u_T = lifshitz::energy_density_profile(st, 0.4, {T_small}, spec);
    const double u_0 = lifshitz::energy_density_profile(st, 0.4, {0.0}, spec);
    CHECK(u_T == doctest::Approx(u_0).epsilon(0.02));
    // mirror symmetry also at T > 0
    const double u_Tb = lifshitz::energy_density_profile(st, 0.6, {T_small}, spec);
    CHECK(u_T == doctest::Approx(u_Tb).epsilon(1e-9));

    const auto j = lifshitz::surface_force_jumps(st, {0.1}, spec);
    const auto f = lifshitz::force_per_area(st, {0.1}, spec);
    CHECK(j.total == doctest::Approx(f.pressure).epsilon(0.01));
}
