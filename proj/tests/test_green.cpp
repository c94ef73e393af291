#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "caskit/green.hpp"

using namespace caskit;
using green::Axis;
using green::PlanarStack;
using green::Polarization;
using green::SpectralPoint;
using dielectric::PermittivityModel;

namespace {

using complex = std::complex<double>;

// Transverse and longitudinal components of the free-space dyadic (the
// 4 pi delta normalization, NOT weighted by w^2) at separation R along the
// axis, evaluated at omega = i xi.  Used by the image oracles.
double g0_trans(double R, double xi) {
    const double u = xi * R;
    return (1.0 + 1.0 / u + 1.0 / (u * u)) * std::exp(-u) / R;
}
double g0_long(double R, double xi) {
    const double u = xi * R;
    return -2.0 * (1.0 / u + 1.0 / (u * u)) * std::exp(-u) / R;
}

// Single perfect mirror at z = 0: one odd image at distance 2z.
double mirror_trace_closed_form(double z, double xi) {
    return -2.0 * g0_trans(2.0 * z, xi) + g0_long(2.0 * z, xi);
}

// Perfect planar cavity [0, d]: image sum.  Even images (translations) sit at
// 2 m d and add with the plain trace 2t + l; odd images (reflections) sit at
// 2|m d - z| and add with -2t + l.
double cavity_trace_image_sum(double z, double d, double xi, bool interaction_only) {
    double acc = 0.0;
    const int M = 120;
    for (int m = 1; m <= M; ++m)
        acc += 2.0 * (2.0 * g0_trans(2.0 * m * d, xi) + g0_long(2.0 * m * d, xi));
    for (int m = -M; m <= M; ++m) {
        if (interaction_only && (m == 0 || m == 1)) continue; // the two lone-wall images
        const double R = 2.0 * std::abs(m * d - z);
        acc += -2.0 * g0_trans(R, xi) + g0_long(R, xi);
    }
    return acc;
}

PlanarStack mirror_stack(double d, double scale = 1e12) {
    return PlanarStack{PermittivityModel::ideal_mirror(scale),
                       PermittivityModel::ideal_mirror(scale), PermittivityModel::vacuum(), d};
}

} // namespace

TEST_CASE("kappa: propagating, evanescent, imaginary axis") {
    SpectralPoint p{Axis::Real, 2.0, 0.0};
    CHECK(green::kappa({1.0, 0.0}, p) == complex{2.0, 0.0});

    p.k_par = 4.0; // k = 2 w: kappa = i sqrt(3) w
    const auto ev = green::kappa({1.0, 0.0}, p);
    CHECK(ev.real() == doctest::Approx(0.0));
    CHECK(ev.imag() == doctest::Approx(2.0 * std::sqrt(3.0)));

    SpectralPoint pi{Axis::Imaginary, 3.0, 0.0};
    const auto im = green::kappa({4.0, 0.0}, pi);
    CHECK(im.real() == doctest::Approx(6.0));
    CHECK(im.imag() == 0.0);
}

TEST_CASE("kappa branch consistency (property)") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> up(0.1, 5.0);
    for (int i = 0; i < 200; ++i) {
        const complex eps{1.0 + up(rng), up(rng)}; // lossy
        SpectralPoint p{Axis::Real, up(rng), up(rng)};
        CHECK(green::kappa(eps, p).imag() > 0.0);
        SpectralPoint q{Axis::Imaginary, up(rng), up(rng)};
        const auto k = green::kappa({1.0 + up(rng), 0.0}, q);
        CHECK(k.real() > 0.0);
        CHECK(k.imag() == 0.0);
    }
}

TEST_CASE("fresnel: identical media, mirror limit, eps=4 case") {
    const auto med = PermittivityModel::lorentz({{1.0, 1.0, 0.1}});
    PlanarStack same{med, PermittivityModel::vacuum(), med, 1.0};
    SpectralPoint p{Axis::Imaginary, 0.7, 0.4};
    // eps1 == eps3 => r1 = 0
    CHECK(std::abs(green::fresnel(Polarization::TE, 1, same, p)) < 1e-15);
    CHECK(std::abs(green::fresnel(Polarization::TM, 1, same, p)) < 1e-15);

    const PlanarStack mir = mirror_stack(1.0);
    CHECK(green::fresnel(Polarization::TE, 1, mir, p).real() ==
          doctest::Approx(-1.0).epsilon(1e-4));
    CHECK(green::fresnel(Polarization::TM, 1, mir, p).real() ==
          doctest::Approx(1.0).epsilon(1e-4));

    PlanarStack four{PermittivityModel::lorentz({{3.0e12, 1e6, 0.0}}),
                     PermittivityModel::vacuum(), PermittivityModel::vacuum(), 1.0};
    // eps(i xi) ~ 1 + 3e12/1e12 = 4 for xi << 1e6
    SpectralPoint nrm{Axis::Imaginary, 1.0, 0.0};
    CHECK(green::fresnel(Polarization::TE, 1, four, nrm).real() ==
          doctest::Approx(-1.0 / 3.0).epsilon(1e-9));
    CHECK(green::fresnel(Polarization::TM, 1, four, nrm).real() ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("|r| <= 1 on the imaginary axis for passive media (property)") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> up(0.05, 4.0);
    for (int i = 0; i < 100; ++i) {
        PlanarStack st{PermittivityModel::lorentz({{up(rng), up(rng), up(rng)}}),
                       PermittivityModel::drude(up(rng), up(rng)), PermittivityModel::vacuum(),
                       1.0};
        SpectralPoint p{Axis::Imaginary, up(rng), up(rng)};
        for (auto pol : {Polarization::TE, Polarization::TM})
            for (int j : {1, 2}) CHECK(std::abs(green::fresnel(pol, j, st, p)) <= 1.0 + 1e-14);
    }
}

TEST_CASE("multiple_reflection: limits, symmetry, fixed-point identity") {
    // r1 = 0 (eps1 == eps3)
    PlanarStack st{PermittivityModel::vacuum(), PermittivityModel::drude(2.0, 0.5),
                   PermittivityModel::vacuum(), 0.8};
    SpectralPoint p{Axis::Imaginary, 1.1, 0.6};
    auto rs = green::multiple_reflection(st, p);
    CHECK(std::abs(rs.D_te - 1.0) < 1e-15);
    CHECK(std::abs(rs.R1_te - rs.r2_te * rs.phase) < 1e-15);

    // d -> infinity kills the phase
    st.gap = 60.0;
    st.eps1 = PermittivityModel::drude(1.0, 0.3);
    rs = green::multiple_reflection(st, p);
    CHECK(std::abs(rs.R1_tm + rs.r1_tm) < 1e-12);
    CHECK(std::abs(rs.D_tm - 1.0) < 1e-12);

    // symmetric stack: R1 == R2
    st.gap = 1.3;
    st.eps2 = st.eps1;
    rs = green::multiple_reflection(st, p);
    CHECK(std::abs(rs.R1_te - rs.R2_te) < 1e-15);
    CHECK(std::abs(rs.R1_tm - rs.R2_tm) < 1e-15);

    // fixed point R1 = -r1 + (1 - r1^2) r2 e / D at random points
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> up(0.1, 3.0);
    for (int i = 0; i < 50; ++i) {
        PlanarStack r{PermittivityModel::lorentz({{up(rng), up(rng), up(rng)}}),
                      PermittivityModel::drude(up(rng), up(rng)), PermittivityModel::vacuum(),
                      up(rng)};
        SpectralPoint q{Axis::Imaginary, up(rng), up(rng)};
        const auto m = green::multiple_reflection(r, q);
        const auto lhs = m.R1_tm;
        const auto rhs = -m.r1_tm + (1.0 - m.r1_tm * m.r1_tm) * m.r2_tm * m.phase / m.D_tm;
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));
    }
}

TEST_CASE("homogeneous trace: vacuum, lossless, 3+4i") {
    auto t = green::homogeneous_green_trace({1.0, 0.0}, 2.5);
    CHECK(t.im == doctest::Approx(5.0));
    CHECK(t.re == 0.0);

    t = green::homogeneous_green_trace({4.0, 0.0}, 2.5);
    CHECK(t.im == doctest::Approx(10.0));
    CHECK(t.re == doctest::Approx(0.0));

    t = green::homogeneous_green_trace({3.0, 4.0}, 1.0); // n = 2 + i
    CHECK(t.im == doctest::Approx(4.0));
    CHECK(t.re == doctest::Approx(-2.0));

    // fluctuation-dissipation pairing: Im Tr >= 0 for passive eps
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> up(0.05, 6.0);
    for (int i = 0; i < 100; ++i)
        CHECK(green::homogeneous_green_trace({up(rng), up(rng)}, up(rng)).im >= 0.0);
}

TEST_CASE("free-space dyadic: reciprocity, static limit, imaginary-axis decay") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> up(-2.0, 2.0);
    for (int i = 0; i < 20; ++i) {
        const Eigen::Vector3d a{up(rng), up(rng), up(rng)};
        const Eigen::Vector3d b{up(rng), up(rng), up(rng)};
        if ((a - b).norm() < 0.1) continue;
        const auto G = green::free_space_dyadic(a, b, {0.9, 0.0});
        const auto Gt = green::free_space_dyadic(b, a, {0.9, 0.0});
        CHECK((G - Gt.transpose()).norm() < 1e-12 * G.norm());
    }

    // w -> 0: (3 RR - 1)/R^3
    const Eigen::Vector3d a{0.0, 0.0, 0.0}, b{0.0, 0.0, 1.5};
    const auto G = green::free_space_dyadic(a, b, {1e-8, 0.0});
    const double R3 = 1.5 * 1.5 * 1.5;
    CHECK(G(0, 0).real() == doctest::Approx(-1.0 / R3).epsilon(1e-6));
    CHECK(G(2, 2).real() == doctest::Approx(2.0 / R3).epsilon(1e-6));
    CHECK(std::abs(G(0, 1)) < 1e-12);

    // imaginary axis: e^{-xi R} suppression at xi R = 10
    const double xi = 10.0 / 1.5;
    const auto Gi = green::free_space_dyadic_imag(a, b, xi);
    const double static_zz = 2.0 / R3;
    CHECK(std::abs(Gi(2, 2)) < static_zz * std::exp(-10.0) * 12.0);
    CHECK(std::abs(Gi(2, 2)) > static_zz * std::exp(-10.0) * 1.0);

    // complex path and fast real path agree
    const auto Gc = green::free_space_dyadic(a, b, {0.0, xi});
    CHECK((Gc.real() - Gi).norm() < 1e-13 * Gi.norm());
    CHECK(Gc.imag().norm() < 1e-15);

    CHECK_THROWS(green::free_space_dyadic(a, a, {1.0, 0.0}));
}

TEST_CASE("planar trace: identical media give zero everywhere") {
    const auto med = PermittivityModel::lorentz({{1.5, 1.2, 0.2}});
    PlanarStack st{med, med, med, 1.0};
    quad::QuadratureSpec spec;
    for (double z : {-0.4, 0.3, 0.5, 1.7}) {
        const auto t = green::planar_scattering_trace(st, z, {Axis::Imaginary, 1.3, 0.0}, spec);
        CHECK(t.re == doctest::Approx(0.0).epsilon(1e-14));
        CHECK(t.im == 0.0);
        const auto tr = green::planar_scattering_trace(st, z, {Axis::Real, 1.3, 0.0}, spec);
        CHECK(std::abs(tr.value()) < 1e-14);
    }
}

TEST_CASE("planar trace: single perfect mirror matches the image closed form") {
    // eps2 = eps3 = vacuum leaves only the z = 0 interface
    PlanarStack st{PermittivityModel::ideal_mirror(1e12), PermittivityModel::vacuum(),
                   PermittivityModel::vacuum(), 50.0};
    quad::QuadratureSpec spec;
    for (const double xi : {0.4, 1.0, 2.7}) {
        for (const double z : {0.3, 0.8, 2.0}) {
            const auto t =
                green::planar_scattering_trace(st, z, {Axis::Imaginary, xi, 0.0}, spec);
            const double oracle = mirror_trace_closed_form(z, xi);
            CHECK(t.re == doctest::Approx(oracle).epsilon(2e-5));
            CHECK(t.im == 0.0);
            CHECK(t.re < 0.0);
        }
    }
}

TEST_CASE("planar trace: ideal cavity against the image-sum oracle") {
    const double d = 1.0;
    const PlanarStack st = mirror_stack(d);
    quad::QuadratureSpec spec;

    // z = d/2, xi = c/d -> finite negative real value
    const auto t =
        green::planar_scattering_trace(st, 0.5 * d, {Axis::Imaginary, 1.0 / d, 0.0}, spec);
    const double oracle = cavity_trace_image_sum(0.5 * d, d, 1.0 / d, false);
    CHECK(t.re < 0.0);
    CHECK(t.im == 0.0);
    CHECK(t.re == doctest::Approx(oracle).epsilon(2e-5));

    // off-center points, several frequencies, both parts
    for (const double xi : {0.6, 1.9}) {
        for (const double z : {0.2, 0.35, 0.7}) {
            const auto full =
                green::planar_scattering_trace(st, z, {Axis::Imaginary, xi, 0.0}, spec);
            CHECK(full.re ==
                  doctest::Approx(cavity_trace_image_sum(z, d, xi, false)).epsilon(3e-5));
            const auto inter = green::planar_scattering_trace(
                st, z, {Axis::Imaginary, xi, 0.0}, spec, green::BoundarySide::Auto,
                green::TracePart::Interaction);
            CHECK(inter.re ==
                  doctest::Approx(cavity_trace_image_sum(z, d, xi, true)).epsilon(3e-5));
        }
    }
}

TEST_CASE("planar trace: symmetric stack is mirror symmetric in the gap") {
    PlanarStack st{PermittivityModel::drude(2.0, 0.4), PermittivityModel::drude(2.0, 0.4),
                   PermittivityModel::vacuum(), 1.4};
    quad::QuadratureSpec spec;
    for (const double z : {0.2, 0.5}) {
        const auto a = green::planar_scattering_trace(st, z, {Axis::Imaginary, 0.9, 0.0}, spec);
        const auto b =
            green::planar_scattering_trace(st, st.gap - z, {Axis::Imaginary, 0.9, 0.0}, spec);
        CHECK(a.re == doctest::Approx(b.re).epsilon(1e-10));
    }
}

TEST_CASE("planar trace: gap value decays exponentially as d grows") {
    quad::QuadratureSpec spec;
    const double z = 0.5, xi = 1.0;
    double prev = 0.0;
    int i = 0;
    for (const double d : {2.0, 3.0, 4.0}) {
        PlanarStack st{PermittivityModel::drude(3.0, 0.5), PermittivityModel::drude(3.0, 0.5),
                       PermittivityModel::vacuum(), d};
        const double v = std::abs(green::planar_scattering_trace(
                                      st, z, {Axis::Imaginary, xi, 0.0}, spec,
                                      green::BoundarySide::Auto, green::TracePart::Interaction)
                                      .re);
        if (i++ > 0) CHECK(v < prev * std::exp(-2.0 * xi * 0.9)); // ~ e^{-2 xi (d - d_prev)}
        prev = v;
    }
}

TEST_CASE("planar trace: boundary side tags") {
    const PlanarStack st = mirror_stack(1.0);
    quad::QuadratureSpec spec;
    const SpectralPoint p{Axis::Imaginary, 1.0, 0.0};
    CHECK_THROWS(green::planar_scattering_trace(st, 0.0, p, spec));
    CHECK_THROWS(green::planar_scattering_trace(st, 0.0, p, spec, green::BoundarySide::Plus,
                                                green::TracePart::Scattering));
    const auto gap_side = green::planar_scattering_trace(
        st, 0.0, p, spec, green::BoundarySide::Plus, green::TracePart::Interaction);
    CHECK(std::isfinite(gap_side.re));
    const auto wall_side = green::planar_scattering_trace(
        st, 0.0, p, spec, green::BoundarySide::Minus, green::TracePart::Interaction);
    CHECK(std::isfinite(wall_side.re));
    // mirror symmetry pairs the 0+ and d- one-sided limits
    const auto d_side = green::planar_scattering_trace(
        st, 1.0, p, spec, green::BoundarySide::Minus, green::TracePart::Interaction);
    CHECK(gap_side.re == doctest::Approx(d_side.re).epsilon(1e-9));
}

TEST_CASE("planar trace real axis: lossy symmetric stack sanity") {
    PlanarStack st{PermittivityModel::lorentz({{2.0, 1.0, 0.6}}),
                   PermittivityModel::lorentz({{2.0, 1.0, 0.6}}), PermittivityModel::vacuum(),
                   1.0};
    quad::QuadratureSpec spec;
    const auto a = green::planar_scattering_trace(st, 0.4, {Axis::Real, 0.8, 0.0}, spec);
    const auto b = green::planar_scattering_trace(st, 0.6, {Axis::Real, 0.8, 0.0}, spec);
    CHECK(std::isfinite(a.re));
    CHECK(std::isfinite(a.im));
    CHECK(a.re == doctest::Approx(b.re).epsilon(1e-8));
    CHECK(a.im == doctest::Approx(b.im).epsilon(1e-8));
}
