#include "doctest.h"

#include "degenlab/error.hpp"
#include "degenlab/profile.hpp"
#include "degenlab/rng.hpp"

#include <cmath>

using namespace degenlab;

TEST_CASE("gamma closed form values") {
    const auto p = DispersionProfile::model(1, 0.5);
    CHECK(gamma_eval(p, 1.0, 0) == 1.0);
    CHECK(gamma_eval(p, 1.0, 2) == 0.0);
    CHECK(gamma_eval(p, 1.25, 0) == doctest::Approx(1.25 + 0.25 * 0.25 * 0.25 / 6.0).epsilon(1e-15));
    CHECK(gamma_eval(p, 1.25, 0) == doctest::Approx(1.2526041666666667).epsilon(1e-15));
    CHECK_THROWS_AS(gamma_eval(p, 1.0, 3), ValidationError);
    const auto gc = DispersionProfile::gravity_capillary(0.5);
    CHECK_THROWS_AS(gamma_eval(gc, 0.0, 0), ValidationError);
    CHECK(gamma_eval(gc, 1.0, 0) == doctest::Approx(1.0));
    CHECK(std::abs(gamma_eval(gc, 1.0, 2)) < 1e-12);
}

TEST_CASE("derivatives match finite differences") {
    for (int beta : {1, 2, 3}) {
        const auto p = DispersionProfile::model(beta, 0.5);
        for (double r : {0.6, 0.83, 0.97, 1.04, 1.2, 1.45}) {
            const double h = 1e-5;
            const double d1 = (gamma_eval(p, r + h, 0) - gamma_eval(p, r - h, 0)) / (2 * h);
            const double d2 = (gamma_eval(p, r + h, 1) - gamma_eval(p, r - h, 1)) / (2 * h);
            CHECK(std::abs(d1 - gamma_eval(p, r, 1)) <= 1e-6 * std::abs(gamma_eval(p, r, 1)));
            CHECK(std::abs(d2 - gamma_eval(p, r, 2)) <= 1e-6 * std::max(std::abs(gamma_eval(p, r, 2)), 1e-3));
        }
    }
    const auto gc = DispersionProfile::gravity_capillary(0.5);
    for (double r : {0.7, 0.9, 1.1, 1.3}) {
        const double h = 1e-5;
        const double d1 = (gamma_eval(gc, r + h, 0) - gamma_eval(gc, r - h, 0)) / (2 * h);
        CHECK(std::abs(d1 - gamma_eval(gc, r, 1)) <= 1e-6 * std::abs(d1));
    }
}

TEST_CASE("model degeneracy ratio is exactly one") {
    for (int beta : {1, 2}) {
        const auto p = DispersionProfile::model(beta, 0.5);
        for (double r : {0.55, 0.8, 0.999, 1.001, 1.3, 1.49})
            CHECK(gamma_eval(p, r, 2) / std::pow(std::abs(r - 1.0), beta) == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("chi plateau, support, symmetry, smoothness") {
    for (double r = 0.0; r <= 0.5; r += 0.01) CHECK(chi(r) == 1.0);
    for (double r = 0.75; r <= 2.0; r += 0.01) CHECK(chi(r) == 0.0);
    double maxd = 0;
    for (double r = -1.0; r <= 1.0; r += 1e-3) {
        CHECK(chi(r) == chi(-r));
        CHECK(chi(r) >= 0.0);
        CHECK(chi(r) <= 1.0);
        maxd = std::max(maxd, std::abs(chi(r + 1e-4) - chi(r)) / 1e-4);
    }
    CHECK(maxd < 10.0);
    CHECK(chi(0.5) == 1.0);
}

TEST_CASE("h and grad_h") {
    const auto p = DispersionProfile::model(1, 0.5);
    CHECK(h_symbol(p, {1, 0}) == 1.0);
    const Vec2 g = grad_h(p, {1, 0});
    CHECK(g[0] == 1.0);
    CHECK(g[1] == 0.0);
    const Vec2 g2 = grad_h(p, {0, 1.25});
    CHECK(g2[0] == 0.0);
    CHECK(g2[1] == doctest::Approx(1.0 + 0.25 * 0.25 / 2).epsilon(1e-15));
    const Vec2 z = grad_h(p, {0, 0});
    CHECK(z[0] == 0.0);
    CHECK(z[1] == 0.0);

    Rng rng(7);
    for (int i = 0; i < 100; ++i) {
        const double r = rng.uniform(0.6, 1.4), a = rng.uniform(0, 6.283185307179586);
        const Vec2 xi{r * std::cos(a), r * std::sin(a)};
        const double e = 1e-5;
        const double fx = (h_symbol(p, {xi[0] + e, xi[1]}) - h_symbol(p, {xi[0] - e, xi[1]})) / (2 * e);
        const double fy = (h_symbol(p, {xi[0], xi[1] + e}) - h_symbol(p, {xi[0], xi[1] - e})) / (2 * e);
        const Vec2 gr = grad_h(p, xi);
        CHECK(std::abs(gr[0] - fx) <= 1e-6);
        CHECK(std::abs(gr[1] - fy) <= 1e-6);
        // rotation equivariance
        const double b = rng.uniform(0, 6.283185307179586), c = std::cos(b), s = std::sin(b);
        const Vec2 rg = grad_h(p, {c * xi[0] - s * xi[1], s * xi[0] + c * xi[1]});
        CHECK(std::abs(rg[0] - (c * gr[0] - s * gr[1])) <= 1e-12);
        CHECK(std::abs(rg[1] - (s * gr[0] + c * gr[1])) <= 1e-12);
    }
}

TEST_CASE("null symbol") {
    const auto p1 = DispersionProfile::model(1, 0.6);
    const auto p2 = DispersionProfile::model(2, 0.6);
    const int M = -5;
    CHECK(null_symbol(p1, M, {1, 0}) == 0.0);
    CHECK(null_symbol(p1, M, {0, 1.0 + std::ldexp(1.0, M - 1)}) == 0.0);
    CHECK(null_symbol(p2, M, {1.0 + std::ldexp(1.0, -7), 0}) == std::ldexp(1.0, -7));
    // vanishes identically outside ||xi|-1| < 2^(M-1), bounded by ||xi|-1|^(beta/2) inside
    for (double s = -0.1; s <= 0.1; s += 1e-4) {
        const double a = null_symbol_radial(p1, M, 1.0 + s);
        if (std::abs(s) >= std::ldexp(1.0, M - 1)) CHECK(a == 0.0);
        CHECK(std::abs(a) <= std::sqrt(std::abs(s)) * (1 + 1e-12));
    }
    CHECK_THROWS_AS(check_cutoff_level(DispersionProfile::model(1, 0.5), -5), ValidationError);
    CHECK_THROWS_AS(check_cutoff_level(p1, -2), ValidationError);
    CHECK_NOTHROW(check_cutoff_level(p1, -5));
}

TEST_CASE("curvature weight sign") {
    const auto p = DispersionProfile::model(1, 0.5);
    CHECK(curvature_weight(p, {1, 0}) == 0.0);
    CHECK(curvature_weight(p, {0, 1.25}) > 0.0);
    for (double r = 0.51; r < 1.5; r += 0.01)
        if (std::abs(r - 1.0) > 1e-9) CHECK(curvature_weight(p, {r, 0}) != 0.0);
}

TEST_CASE("check_assumptions on model profiles") {
    for (int beta : {1, 2}) {
        const auto r = check_assumptions(DispersionProfile::model(beta, 0.6), 2000, -5, -12, 10);
        CHECK(r.pass);
        CHECK(r.gamma1_min >= 0.5);
        CHECK(r.gamma1_max <= 1.5);
        CHECK(r.degeneracy_min == doctest::Approx(1.0));
        CHECK(r.degeneracy_max == doctest::Approx(1.0));
    }
    // wide annulus still meets the transversality bound
    const auto wide = check_assumptions(DispersionProfile::model(1, 0.9), 2000, -5, -12, 10);
    CHECK(wide.transversality_ok);
    // the comparison needs gap ceil(4 + log2(3)/beta): 6 for beta 1, 5 for beta 2
    CHECK(check_assumptions(DispersionProfile::model(1, 0.6), 2000, -5, -12, 6).comparison_ok);
    CHECK_FALSE(check_assumptions(DispersionProfile::model(1, 0.6), 2000, -5, -12, 5).comparison_ok);
    CHECK(check_assumptions(DispersionProfile::model(1, 0.6), 2000, -5, -12, 10).min_admissible_gap == 6);
    CHECK(check_assumptions(DispersionProfile::model(2, 0.6), 2000, -5, -12, 10).min_admissible_gap == 5);
    CHECK_THROWS_AS(check_assumptions(DispersionProfile::model(1, 0.6), 50, -5, -12, 10), ValidationError);
}

TEST_CASE("oscillating second derivative fails the comparison") {
    ProfileView v;
    v.beta = 1;
    v.delta = 0.6;
    v.d1 = [](double) { return 1.0; };
    v.d2 = [](double r) {
        const double s = r - 1.0;
        return s == 0.0 ? 0.0 : std::abs(s) * (2.0 + std::sin(1.0 / s));
    };
    const auto r = check_assumptions(v, 2000, -5, -12, 6);
    CHECK_FALSE(r.pass);
    CHECK_FALSE(r.comparison_ok);
    CHECK(r.transversality_ok);
    CHECK_FALSE(r.failure.empty());
}
