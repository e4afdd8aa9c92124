#include "oracles.hpp"

#include <doctest.h>

using namespace kahler;

namespace {

GridRequest box(double lo, double hi, int res) {
    GridRequest g;
    g.lo = {lo, lo, lo, lo};
    g.hi = {hi, hi, hi, hi};
    g.resolution = {res, res, res, res};
    return g;
}

}  // namespace

TEST_SUITE("field_analysis") {

TEST_CASE("grid nodes are row-major with x slowest") {
    GridRequest g = box(0, 1, 3);
    g.resolution = {2, 3, 1, 5};
    CHECK(g.size() == 30);
    const ChartPoint p = g.node(1 * 15 + 2 * 5 + 0 * 5 + 4);
    CHECK(p[0] == 1.0);
    CHECK(p[1] == 1.0);
    CHECK(p[2] == 0.0);
    CHECK(p[3] == 1.0);
    CHECK(g.spacing()[3] == 0.25);
    CHECK(default_fd_step(box(-1, 1, 5)) == 2e-3);
    CHECK(default_fd_step(box(0, 0.01, 5)) == 1e-4);
}

TEST_CASE("scan reproduces the closed-form angle of the Cayley example") {
    const auto s = ImmersionSpec::catalog("cayley-sin-sinh");
    const FieldGrid g = scan(s, box(-1, 1, 9), FieldAngles);
    REQUIRE(g.samples.size() == 6561);
    double worst = 0;
    for (const auto& n : g.samples) {
        REQUIRE(n.status == "ok");
        const double e = *expected_cos(s, n.p);
        worst = std::max({worst, std::abs(*n.values[0] - e), std::abs(*n.values[1] - e)});
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("scan of the zero map is trivial") {
    const FieldGrid g = scan(ImmersionSpec::catalog("zero"), box(-1, 1, 3), FieldAll);
    for (const auto& n : g.samples) {
        CHECK(n.cls == PointClass::Lagrangian);
        for (std::size_t i = 0; i < n.values.size(); ++i) {
            REQUIRE(n.values[i]);
            if (g.columns[i] == "calibration_omega_prime") continue;
            CHECK(*n.values[i] == doctest::Approx(0.0).epsilon(1e-14));
        }
    }
}

TEST_CASE("angle bound of the alpha/beta family") {
    // alpha = beta: Lagrangian, so the naive bound 0.5 holds trivially.
    const auto eq = ImmersionSpec::catalog("alpha-beta-u0v0", {{"alpha", 0.5}, {"beta", 0.5}});
    for (const auto& n : scan(eq, box(-1, 1, 5), FieldAngles).samples) CHECK(*n.values[0] <= 0.5);
    CHECK(alpha_beta_naive_bound(0.5, 0.5) == doctest::Approx(0.5));
    // With beta - alpha = d, cos theta stays below sqrt(2 d^2 / (1 + 2 d^2)); the naive bound can fail.
    for (const char* id : {"alpha-beta-u0v0", "prop84-sum"}) {
        const ParamMap pm{{"alpha", 1.0}, {"beta", -1.0}};
        const auto s = ImmersionSpec::catalog(id, pm);
        const double bound = *find_catalog_entry(id).cos_bound(pm);
        double top = 0;
        for (const auto& n : scan(s, box(-1.5, 1.5, 7), FieldAngles).samples) top = std::max(top, *n.values[0]);
        CHECK(top <= bound + 1e-12);
        if (std::string(id) == "alpha-beta-u0v0") CHECK(top > alpha_beta_naive_bound(1.0, -1.0));
    }
}

TEST_CASE("singular cells are masked, not evaluated") {
    const FieldGrid g = scan(ImmersionSpec::catalog("hopf-cone"), box(-1, 1, 3), FieldAngles | FieldEta);
    std::size_t masked = 0;
    for (const auto& n : g.samples) {
        if (n.p.vec().norm() == 0.0) {
            CHECK(n.status == "skipped:singular");
            for (const auto& v : n.values) CHECK_FALSE(v.has_value());
            ++masked;
        } else {
            CHECK(n.status == "ok");
        }
    }
    CHECK(masked == 1);
    const FieldGrid c = scan(ImmersionSpec::catalog("j-plus-quadratic-1"), box(-1, 1, 3), FieldAngles | FieldEta);
    CHECK(c.samples[40].status == "skipped:near-complex");
    CHECK(c.samples[40].values[0].has_value());
}

TEST_CASE("scan output does not depend on the thread count") {
    const auto s = ImmersionSpec::catalog("j-plus-quadratic-1");
    const FieldGrid a = scan(s, box(-1, 1, 4), FieldAll, {}, {}, 1);
    const FieldGrid b = scan(s, box(-1, 1, 4), FieldAll, {}, {}, 4);
    REQUIRE(a.samples.size() == b.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        CHECK(a.samples[i].status == b.samples[i].status);
        CHECK(a.samples[i].values == b.samples[i].values);
    }
}

TEST_CASE("Laplace-Beltrami on the flat metric") {
    const auto zero = ImmersionSpec::catalog("zero");
    const ChartPoint p(0.2, -0.4, 0.3, 0.1);
    CHECK(std::abs(laplace_beltrami(zero, [](const ChartPoint&) { return 3.5; }, p, 1e-3)) < 1e-9);
    CHECK(std::abs(laplace_beltrami(zero, [](const ChartPoint& q) { return q[0]; }, p, 1e-3)) < 1e-9);
    const double v = laplace_beltrami(zero, [](const ChartPoint& q) { return q[0] * q[0] + q[1] * q[1]; }, p, 1e-3);
    CHECK(std::abs(v - 4.0) < 1e-6);
    CHECK_THROWS_AS(laplace_beltrami(ImmersionSpec::catalog("hopf-cone"), [](const ChartPoint&) { return 1.0; },
                                     {1e-3, 0, 0, 0}, 1e-3),
                    GeometryError);
}

TEST_CASE("Laplace-Beltrami of a coordinate on a curved graph converges at second order") {
    // On a minimal graph the coordinate functions are harmonic.
    const auto s = ImmersionSpec::catalog("coassociative-hl");
    const ChartPoint p(0.3, 0.2, -0.1, 0.4);
    auto res = [&](double h) { return std::abs(laplace_beltrami(s, [](const ChartPoint& q) { return q[1]; }, p, h)); };
    const RichardsonPair r = richardson(res, 1e-2);
    CHECK(r.residual_h < 1e-3);
    CHECK(r.order >= 1.8);
}

TEST_CASE("log cos^2 PDE residual on the Cayley example") {
    const auto s = ImmersionSpec::catalog("cayley-sin-sinh");
    const ChartPoint p(0.3, 0.2, 0.1, 0.0);
    const double r1 = log_cos2_pde_residual(s, p, 1e-3), r2 = log_cos2_pde_residual(s, p, 5e-4);
    CHECK(r1 < 1e-4);
    CHECK(r1 / r2 >= 3.5);
    CHECK(r1 / r2 <= 4.5);
    const auto lin = ImmersionSpec::catalog("linear-a-Jw");
    CHECK(log_cos2_pde_residual(lin, p, 1e-3) < 1e-9);
    try {
        log_cos2_pde_residual(s, {0, 0, std::numbers::pi / 2, 0}, 1e-3);
        FAIL("expected NearLagrangian");
    } catch (const GeometryError& e) {
        CHECK(e.code() == ErrorCode::NearLagrangian);
    }
}

TEST_CASE("p1 / d eta identity residual") {
    CHECK(transgression_identity_residual(ImmersionSpec::catalog("linear-a-Jw"), {0.2, 0.1, 0, 0}, 1e-3) < 1e-12);
    const auto hl = ImmersionSpec::catalog("coassociative-hl");
    const ChartPoint p(0.4, -0.3, 0.5, 0.2);
    const RichardsonPair r = richardson([&](double h) { return transgression_identity_residual(hl, p, h); }, 2e-3);
    CHECK(r.residual_h < 1e-4);
    CHECK(r.order >= 1.8);
    const auto jq1 = ImmersionSpec::catalog("j-plus-quadratic-1");
    CHECK(transgression_identity_residual(jq1, {0.6, -0.2, 0.1, 0.3}, 1e-3) < 1e-10);
    try {
        transgression_identity_residual(jq1, {1e-3, 0, 0, 0}, 1e-4);
        FAIL("expected NearComplex");
    } catch (const GeometryError& e) {
        CHECK(e.code() == ErrorCode::NearComplex);
    }
}

TEST_CASE("pullback form is closed on any graph") {
    std::mt19937_64 rng(3);
    std::vector<ImmersionSpec> specs = {ImmersionSpec::catalog("cayley-sin-sinh"), ImmersionSpec::catalog("hopf-cone")};
    for (int i = 0; i < 3; ++i) specs.push_back(oracle::random_polynomial(rng, 3, 12));
    const ChartPoint p(0.35, -0.2, 0.45, 0.1);
    for (const auto& s : specs) {
        const double c1 = pullback_form_closedness(s, p, 2e-3), c2 = pullback_form_closedness(s, p, 1e-3);
        CHECK(c1 < 1e-4);
        if (c1 > 1e-10) CHECK(observed_order(c1, c2) >= 1.8);
    }
}

TEST_CASE("pullback form is coclosed on minimal examples only") {
    const ChartPoint p(0.35, -0.2, 0.45, 0.1);
    for (const char* id : {"cayley-sin-sinh", "j-plus-quadratic-1", "hopf-cone", "coassociative-hl"}) {
        const auto s = ImmersionSpec::catalog(id);
        const double c1 = pullback_form_coclosedness(s, p, 2e-3), c2 = pullback_form_coclosedness(s, p, 1e-3);
        CAPTURE(id);
        CHECK(c1 < 1e-4);
        if (c1 > 1e-10) CHECK(observed_order(c1, c2) >= 1.8);
    }
    std::mt19937_64 rng(3);
    CHECK(pullback_form_coclosedness(oracle::random_polynomial(rng, 3, 12), p, 1e-3) > 1e-2);
}

TEST_CASE("Kahler form relation at equal-angle points") {
    for (const char* id : {"cayley-sin-sinh", "j-plus-quadratic-1", "hopf-cone"}) {
        const auto s = ImmersionSpec::catalog(id);
        const ChartPoint p(0.35, -0.2, 0.45, 0.3);
        const double d1 = kahler_form_relation_defect(s, p, 2e-3), d2 = kahler_form_relation_defect(s, p, 1e-3);
        CAPTURE(id);
        CHECK(d1 < 1e-4);
        if (d1 > 1e-10) CHECK(observed_order(d1, d2) >= 1.8);
    }
}

TEST_CASE("Gauss-Legendre rules integrate polynomials exactly") {
    std::vector<double> x, w;
    gauss_legendre(6, -1.0, 2.0, x, w);
    double s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * std::pow(x[i], 11);
    CHECK(s == doctest::Approx((std::pow(2.0, 12) - 1.0) / 12.0).epsilon(1e-13));
}

TEST_CASE("tube integrals") {
    const auto lin = ImmersionSpec::catalog("linear-a-Jw");
    CHECK(tube_integral_eta(lin, {0.3, 0.1, 0, 0}, 0.5, 8).value == 0.0);
    const auto jq1 = ImmersionSpec::catalog("j-plus-quadratic-1");
    for (double r : {0.4, 0.2}) {
        const TubeResult t = tube_integral_eta(jq1, {}, r, 12, 1e-6);
        MESSAGE("j-plus-quadratic-1 tube radius " << r << ": " << t.value);
        CHECK(std::isfinite(t.value));
        CHECK(std::abs(t.value) < 1e-10);
    }
    try {
        tube_integral_eta(jq1, {}, 1e-6, 4);
        FAIL("expected NearComplex");
    } catch (const GeometryError& e) {
        CHECK(e.code() == ErrorCode::NearComplex);
    }
}

TEST_CASE("tube integrals satisfy Stokes over a shell") {
    const auto hl = ImmersionSpec::catalog("coassociative-hl");
    const TubeResult outer = tube_integral_eta(hl, {}, 0.8, 24, 1e-3);
    const TubeResult inner = tube_integral_eta(hl, {}, 0.6, 24, 1e-3);
    CHECK(outer.value == doctest::Approx(20.853275592046444).epsilon(1e-9));
    CHECK(inner.value == doctest::Approx(17.627261746336107).epsilon(1e-9));
    const double shell = shell_integral_deta(hl, {}, 0.6, 0.8, 8, 1e-3);
    MESSAGE("outer " << outer.value << " inner " << inner.value << " shell " << shell);
    CHECK(std::abs((outer.value - inner.value) - shell) < 2e-3 * std::abs(shell));
    try {
        tube_integral_eta(hl, {}, 0.8, 4, 1e-9);
        FAIL("expected QuadratureNonConvergent");
    } catch (const GeometryError& e) {
        CHECK(e.code() == ErrorCode::QuadratureNonConvergent);
    }
}

}
