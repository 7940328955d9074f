#include "doctest.h"

#include "degenlab/error.hpp"
#include "degenlab/fit.hpp"
#include "degenlab/rng.hpp"
#include "degenlab/solver.hpp"

#include <cmath>

using namespace degenlab;

namespace {

SolverConfig small_cfg(double T = 5.0) {
    SolverConfig c;
    c.profile = DispersionProfile::model(1, 0.6);
    c.grid = {512, 64};
    c.M = -5;
    c.dt = 0.1;
    c.T_final = T;
    c.epsilon = 32.0; // dt * lipschitz_bound ~ 0.2 here
    return c;
}

double max_dist(const Trajectory& a, const Trajectory& b) {
    double m = 0;
    for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, l2_distance(a.at(k), b.at(k)));
    return m;
}

Field scaled(Field f, double a) {
    for (auto& v : f.values) v *= a;
    return f;
}

Field conj_space(const Field& f) {
    Field x = as_space(f);
    for (auto& v : x.values) v = std::conj(v);
    return to_frequency(x);
}

} // namespace

TEST_CASE("config validation") {
    SolverConfig c = small_cfg();
    CHECK_NOTHROW(c.validate());
    c.grid = {256, 32}; // supp P_{<=M} narrower than 2 cells
    CHECK_THROWS_AS(c.validate(), ValidationError);
    c = small_cfg();
    c.M = -4; // 2^0 = 1 > delta
    CHECK_THROWS_AS(c.validate(), ValidationError);
    c = small_cfg();
    c.epsilon0 = 0.01;
    CHECK_THROWS_AS(c.validate(), ValidationError);
    c = small_cfg();
    c.epsilon = 1e3;
    try {
        c.validate();
        FAIL("expected step_too_large");
    } catch (const ValidationError& e) {
        CHECK(e.kind() == "step_too_large");
    }
    c = small_cfg();
    const Field big = solver_datum(c, 33.0, 1);
    CHECK_THROWS_AS(solve(c, big), ValidationError);
}

TEST_CASE("nonlinearity: zero, support, gauge covariance, L2 bound") {
    const SolverConfig c = small_cfg();
    CHECK(l2_norm_frequency(nonlinearity(c, Field(c.grid, Rep::frequency))) == 0.0);
    const Field u = solver_datum(c, 0.05, 2);
    const Field n = nonlinearity(c, u);
    bool supported = true;
    for (std::size_t i = 0; i < c.grid.size(); ++i)
        if (null_symbol(c.profile, c.M, c.grid.xi(i)) == 0.0) supported = supported && n.values[i] == cd(0.0, 0.0);
    CHECK(supported);
    Field ua = u;
    const cd ph = std::polar(1.0, 0.73);
    for (auto& v : ua.values) v *= ph;
    const Field na = nonlinearity(c, ua);
    double err = 0, scale = 0;
    for (std::size_t i = 0; i < n.values.size(); ++i) {
        err = std::max(err, std::abs(na.values[i] - ph * n.values[i]));
        scale = std::max(scale, std::abs(n.values[i]));
    }
    CHECK(err <= 1e-13 * scale);

    // ||N(u)|| <= C ||u||^3 with C independent of the grid. Random phases spread u over the
    // torus and make ||N(u)|| scale like L^-2, so the extremal data here are phase-aligned.
    double C[2] = {0, 0};
    const SpectralGrid grids[2] = {{256, 32}, {512, 64}};
    for (int g = 0; g < 2; ++g) {
        SolverConfig cg = c;
        cg.grid = grids[g];
        for (int s = 0; s < 5; ++s) {
            Field v = solver_datum(cg, 1.0, stream_seed(99, s));
            for (auto& x : v.values) x = std::abs(x);
            v = scaled(v, 1.0 / l2_norm_frequency(v));
            C[g] = std::max(C[g], l2_norm_frequency(nonlinearity(cg, v)));
        }
    }
    MESSAGE("L2 constants " << C[0] << " " << C[1]);
    CHECK(C[1] / C[0] < 2.0);
    CHECK(C[1] / C[0] > 0.5);
}

TEST_CASE("linear hook reproduces the free flow") {
    SolverConfig c = small_cfg();
    c.coupling = 0.0;
    const Field u0 = solver_datum(c, 30.0, 3);
    const Trajectory tr = solve(c, u0);
    double err = 0;
    for (std::size_t k = 0; k < tr.size(); ++k)
        err = std::max(err, l2_distance(tr.at(k), propagate(c.profile, u0, tr.core.times[k])));
    CHECK(err <= 1e-10);
    const MassDrift md = mass_drift(c, tr);
    CHECK(md.total_drift <= 1e-10);
}

TEST_CASE("determinism") {
    const SolverConfig c = small_cfg(2.0);
    const Field u0 = solver_datum(c, 30.0, 4);
    const Trajectory a = solve(c, u0), b = solve(c, u0);
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(a.core.snapshots[k].c == b.core.snapshots[k].c);
}

TEST_CASE("time reversal: conj(u(-t)) solves the equation with coupling -conj(c)") {
    SolverConfig c = small_cfg(3.0);
    const Field u0 = solver_datum(c, 30.0, 5);
    SolverConfig back = c;
    back.backward = true;
    const Trajectory tb = solve(back, u0); // times -3 .. 0
    SolverConfig fwd = c;
    fwd.coupling = -std::conj(c.coupling);
    const Trajectory tf = solve(fwd, conj_space(u0)); // times 0 .. 3
    REQUIRE(tb.size() == tf.size());
    double err = 0, scale = 0;
    for (std::size_t k = 0; k < tf.size(); ++k) {
        const std::size_t kb = tb.size() - 1 - k;
        CHECK(tb.core.times[kb] == doctest::Approx(-tf.core.times[k]));
        err = std::max(err, l2_distance(tf.at(k), conj_space(tb.at(kb))));
        scale = std::max(scale, l2_norm_frequency(tf.at(k)));
    }
    CHECK(err <= 1e-10 * scale);
    // the nonlinear term is active at this size
    SolverConfig lin = fwd;
    lin.coupling = 0.0;
    CHECK(max_dist(solve(lin, conj_space(u0)), tf) > 1e-6);
}

TEST_CASE("mass drift identity") {
    SolverConfig c = small_cfg(4.0);
    c.coupling = {1.0, 0.0}; // non-conservative coupling makes d/dt ||u||^2 nonzero
    const Field u0 = solver_datum(c, 30.0, 6);
    const MassDrift md = mass_drift(c, solve(c, u0));
    double scale = 0;
    for (const auto& r : md.rows) scale = std::max(scale, std::abs(r.dnorm2_exact));
    REQUIRE(scale > 0);
    CHECK(md.max_mismatch <= 1e-3 * scale);
}

TEST_CASE("Picard ratios are non-increasing for small data") {
    // the small-data sweep values; rho_j sits near 1e-8 here on this grid
    for (double eps : {0.1, 0.05, 0.025}) {
        SolverConfig c = small_cfg(4.0);
        c.epsilon = eps;
        const PicardResult p = picard_iterate(c, solver_datum(c, eps * 0.999, 7), 4);
        CHECK(p.contracting_half);
        for (std::size_t j = 0; j + 1 < p.ratio_linf.size(); ++j) {
            CHECK(p.ratio_linf[j + 1] <= p.ratio_linf[j] + 1e-6);
            CHECK(p.ratio_y0[j + 1] <= p.ratio_y0[j] + 1e-6);
        }
    }
}

TEST_CASE("Picard fixed point agrees with RK4, rho_1 ~ eps^2") {
    SolverConfig c = small_cfg(4.0);
    const Field u0 = solver_datum(c, 30.0, 7);
    const PicardResult p = picard_iterate(c, u0, 5);
    CHECK(p.contracting_half);
    CHECK_FALSE(p.diverged);

    // quadrature error estimate of the trapezoidal Duhamel map: dt vs dt/2
    SolverConfig half = c;
    half.dt = c.dt / 2; // the quadrature runs on the snapshot grid, so this halves its step
    const PicardResult ph = picard_iterate(half, u0, 5);
    const Trajectory tr = solve(c, u0);
    double tol = 0, gap = 0;
    for (std::size_t k = 0; k < tr.size(); ++k) {
        tol = std::max(tol, l2_distance(p.iterates.back().snapshots[k], ph.iterates.back().snapshots[2 * k]));
        gap = std::max(gap, l2_distance(p.iterates.back().snapshots[k], tr.core.snapshots[k]));
    }
    MESSAGE("picard vs rk4 " << gap << " quadrature estimate " << tol);
    CHECK(gap <= 10 * tol);

    // rho_1 against eps at eps = 16, 8, 4 (same unit datum)
    std::vector<double> x, y;
    const Field unit = scaled(u0, 1.0 / l2_norm_frequency(u0));
    for (double eps : {16.0, 8.0, 4.0}) {
        const PicardResult q = picard_iterate(c, scaled(unit, eps * 0.999), 2);
        x.push_back(std::log2(eps));
        y.push_back(std::log2(q.ratio_linf[0]));
    }
    const FitResult f = least_squares(x, y);
    MESSAGE("rho_1 eps exponent " << f.slope);
    CHECK(std::abs(f.slope - 2.0) <= 0.3);
}

TEST_CASE("scattering diagnostics") {
    SolverConfig c = small_cfg(100.0);
    c.coupling = 0.0;
    c.dt = 1.0; // linear flow, the step only sets the snapshot spacing
    const Field u0 = solver_datum(c, 30.0, 8);
    const Trajectory tr = solve(c, u0);
    const ScatterResult s = scattering_state(c, tr);
    for (const auto& w : s.windows) CHECK(w.sup <= 1e-10);
    CHECK(l2_distance(s.u_plus, u0) <= 1e-10);
    SolverConfig shortc = small_cfg(10.0);
    CHECK_THROWS_AS(scattering_state(shortc, solve(shortc, solver_datum(shortc, 30.0, 8))), ValidationError);
}
