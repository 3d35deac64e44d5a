#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sgsim/fields.hpp"
#include "sgsim/model.hpp"

using namespace sgsim;

TEST_CASE("field evaluation") {
    // unit coefficients
    FieldSample s = field_at({FieldKind::Linear2D, 0.0, 1.0}, 1.0, 1.0);
    CHECK(s.Bx == doctest::Approx(1.0));
    CHECK(s.By == doctest::Approx(-1.0));

    s = field_at({FieldKind::Nonlinear2D, 10.0, 1e6}, 0.0, 0.0);
    CHECK(s.Bx == doctest::Approx(10.0));
    CHECK(s.By == doctest::Approx(0.0));

    // hand evaluation at (1e-3, 1e-3): Bx = 10 - 1 + 1, By = +2 eta x y
    s = field_at({FieldKind::Nonlinear2D, 10.0, 1e6}, 1e-3, 1e-3);
    CHECK(s.Bx == doctest::Approx(10.0).epsilon(1e-15));
    CHECK(s.By == doctest::Approx(2.0).epsilon(1e-15));

    // 1D kinds ignore y
    s = field_at({FieldKind::Nonlinear1D, 10.0, 1e6}, 1e-3, 55.0);
    CHECK(s.Bx == doctest::Approx(9.0));
    CHECK(s.By == 0.0);
}

TEST_CASE("Maxwell residuals vanish identically for both 2D fields") {
    for (FieldModel f : {FieldModel{FieldKind::Linear2D, 0.0, 2507.0},
                         FieldModel{FieldKind::Nonlinear2D, 10.0, 1e6}}) {
        const MaxwellResiduals r = maxwell_residuals(f, {25e-6, 101});
        CHECK(r.max_abs_div == 0.0);
        CHECK(r.max_abs_curl == 0.0);
    }
    CHECK_THROWS_AS((void)maxwell_residuals({FieldKind::Linear1D, 0.0, 1.0}),
                    std::invalid_argument);
}

TEST_CASE("corrupted y-gradient is detected") {
    FieldModel f{FieldKind::Linear2D, 0.0, 2507.0};
    f.y_gradient_scale = 2.0;
    const MaxwellResiduals r = maxwell_residuals(f, {1.0, 3});
    // div = eta - 2 eta = -eta everywhere
    CHECK(r.max_abs_div == doctest::Approx(2507.0).epsilon(1e-15));

    FieldModel g{FieldKind::Nonlinear2D, 10.0, 1e6};
    g.y_gradient_scale = 2.0;
    const MaxwellResiduals rn = maxwell_residuals(g, {1e-3, 5});
    CHECK(rn.max_abs_div > 0.0);
    CHECK(rn.max_abs_curl > 0.0);
}

TEST_CASE("force decomposition") {
    PhysicalConstants c;
    const double m = 1e-15;

    SUBCASE("nonlinear force vanishes at the origin for spin 0") {
        const ForceSample f = force_at({FieldKind::Nonlinear2D, 10.0, 1e6}, c, m, 0, 0.0, 0.0);
        CHECK(f.force[0] == 0.0);
        CHECK(f.force[1] == 0.0);
    }

    SUBCASE("inverted quadratic term dominates along x at 25 um") {
        const ForceSample f =
            force_at({FieldKind::Nonlinear2D, 10.0, 1e6}, c, m, 0, 25e-6, 0.0);
        CHECK(f.dominant_term[0] == "inverted_quadratic");
        // and it is repulsive for chi < 0
        CHECK(f.force[0] > 0.0);
    }

    SUBCASE("pure spin force at the origin of an unbiased linear field") {
        const ForceSample f = force_at({FieldKind::Linear2D, 0.0, 2507.0}, c, m, +1, 0.0, 0.0);
        // term-by-term: only -hbar gamma_e S_x eta survives
        CHECK(f.force[0] == doctest::Approx(-c.hbar * c.gamma_e * 2507.0).epsilon(1e-14));
        CHECK(f.dominant_term[0] == "spin_x");
    }

    SUBCASE("force is the negative potential gradient (finite differences)") {
        for (FieldModel fm : {FieldModel{FieldKind::Linear2D, 0.1, 2507.0},
                              FieldModel{FieldKind::Nonlinear2D, 10.0, 1e6}}) {
            const int spin = fm.kind == FieldKind::Linear2D ? 1 : 0;
            const double x = 1.3e-5, y = -0.7e-5, h = 1e-9;
            const ForceSample f = force_at(fm, c, m, spin, x, y);
            const double fx_fd = -(potential_energy(fm, c, m, spin, x + h, y) -
                                   potential_energy(fm, c, m, spin, x - h, y)) /
                                 (2.0 * h);
            const double fy_fd = -(potential_energy(fm, c, m, spin, x, y + h) -
                                   potential_energy(fm, c, m, spin, x, y - h)) /
                                 (2.0 * h);
            CHECK(f.force[0] == doctest::Approx(fx_fd).epsilon(1e-5));
            CHECK(f.force[1] == doctest::Approx(fy_fd).epsilon(1e-5));
        }
    }
}

TEST_CASE("1D potential matches the quadratic form plus the spin term") {
    PhysicalConstants c;
    const double m = 1e-15, eta = 2507.0;
    const double w = omega_harmonic(c, eta);
    const FieldModel f{FieldKind::Linear1D, 0.0, eta};
    const double u0 = potential_energy(f, c, m, +1, 0.0, 0.0);
    for (double x = -100e-6; x <= 100e-6; x += 12.5e-6) {
        const double u = potential_energy(f, c, m, +1, x, 0.0) - u0;
        const double expect = 0.5 * m * w * w * x * x + c.hbar * c.gamma_e * eta * x;
        CHECK(u == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("nonlinear 1D force approaches the inverted-quadratic form near the origin") {
    PhysicalConstants c;
    const double m = 1e-15, B0 = 10.0, eta = 1e6;
    const double w = omega_inverted(c, B0, eta);
    const double bound = ihp_validity_bound(B0, eta);
    const FieldModel f{FieldKind::Nonlinear1D, B0, eta};
    // quadratic-vs-full ratio is eta x^2 / B0: 1% inside bound/sqrt(2)/10
    for (double frac : {0.01, 0.03, 0.0707}) {
        const double x = frac * bound;
        const double full = force_at(f, c, m, 0, x, 0.0).force[0];
        const double quad = m * w * w * x;
        CHECK(std::abs(full - quad) / std::abs(quad) <= 0.01);
    }
    const double x = 0.1 * bound;
    const double full = force_at(f, c, m, 0, x, 0.0).force[0];
    const double quad = m * w * w * x;
    CHECK(std::abs(full - quad) / std::abs(quad) == doctest::Approx(0.02).epsilon(1e-10));
}

TEST_CASE("larmor frequency") {
    PhysicalConstants c;
    CHECK(larmor_frequency(c, 10.0) == doctest::Approx(10.0 * c.gamma_e).epsilon(1e-15));
    CHECK(larmor_frequency(c, 10.0) > 1e12);
    CHECK(larmor_frequency(c, 0.0) == 0.0);
    CHECK(larmor_frequency(c, 1.0) == doctest::Approx(c.gamma_e).epsilon(1e-15));
}

TEST_CASE("y confinement stays far below the superposition scale") {
    PhysicalConstants c;
    const auto r = y_confinement_report({FieldKind::Nonlinear2D, 10.0, 1e6}, c, 1e-15, 2e-11);
    CHECK(r.omega_y == doctest::Approx(omega_inverted(c, 10.0, 1e6)).epsilon(1e-15));
    CHECK(r.amplitude == doctest::Approx(2e-11));
    CHECK(r.ratio < 1e-6);

    const auto z = y_confinement_report({FieldKind::Nonlinear2D, 10.0, 1e6}, c, 1e-15, 0.0);
    CHECK(z.amplitude == 0.0);

    const auto lin = y_confinement_report({FieldKind::Linear2D, 0.0, 2507.0}, c, 1e-15, 2e-11);
    CHECK(lin.omega_y == doctest::Approx(omega_harmonic(c, 2507.0)).epsilon(1e-15));
}
