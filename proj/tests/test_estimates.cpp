#include "doctest.h"

#include "degenlab/error.hpp"
#include "degenlab/estimates.hpp"
#include "degenlab/rng.hpp"

#include <cmath>
#include <numbers>

using namespace degenlab;

namespace {

constexpr double kPi = std::numbers::pi;

SweepConfig radial_cfg(int beta) {
    SweepConfig c;
    c.profile = DispersionProfile::model(beta, 0.5);
    c.backend = Backend::radial;
    c.recipe = DataRecipe::bump;
    c.T = 50.0;
    c.dt = 0.1;
    return c;
}

} // namespace

TEST_CASE("sweep validation") {
    SweepConfig c = radial_cfg(1);
    c.k_values = {-5, -4, -3};
    CHECK_NOTHROW(c.validate());
    c.dt = 0.25;
    CHECK_THROWS_AS(c.validate(), ValidationError);
    c.dt = 0.1;
    c.repetitions = 2;
    CHECK_THROWS_AS(c.validate(), ValidationError);
    c.repetitions = 3;
    c.recipe = DataRecipe::random;
    CHECK_THROWS_AS(c.validate(), ValidationError);
    c.recipe = DataRecipe::bump;
    c.backend = Backend::grid;
    c.grid = {1024, 128};
    c.k_values = {-6, -4};
    try {
        c.validate();
        FAIL("expected an unresolvable shell");
    } catch (const ValidationError& e) {
        CHECK(e.kind() == "unresolvable_shell");
        CHECK(std::string(e.what()).find("k=-6") != std::string::npos);
    }
}

TEST_CASE("shell data are unit and supported on the shell") {
    const SpectralGrid g{256, 32};
    for (DataRecipe r : {DataRecipe::random, DataRecipe::bump}) {
        const Field f = shell_datum(g, SymbolSpec::p(-2), r, 11);
        CHECK(l2_norm_frequency(f) == doctest::Approx(1.0).epsilon(1e-13));
        for (std::size_t i = 0; i < g.size(); ++i)
            if (SymbolSpec::p(-2)(g.xi(i)) == 0.0) CHECK(f.values[i] == cd(0.0, 0.0));
    }
    const Field a = shell_datum(g, SymbolSpec::p(-2), DataRecipe::random, 11);
    const Field b = shell_datum(g, SymbolSpec::p(-2), DataRecipe::random, 11);
    CHECK(a.values == b.values);
}

TEST_CASE("radial and lattice L4 norms agree on a bump datum") {
    // two independent routes: exact radial free wave (Bessel synthesis) vs FFT propagation on the torus
    const auto p = DispersionProfile::model(1, 0.5);
    const SpectralGrid g{512, 64};
    const Field u0 = shell_datum(g, SymbolSpec::p(-3), DataRecipe::bump, 0);
    const double lattice = grid_l4_norm(p, u0, 20.0, 0.1);
    SweepConfig c = radial_cfg(1);
    c.T = 20.0;
    c.k_values = {-3, -2, -1};
    const StrichartzResult r = strichartz_l4(c);
    MESSAGE("lattice " << lattice << " radial " << r.rows[0].norm);
    CHECK(r.rows[0].k == -3);
    CHECK(lattice == doctest::Approx(r.rows[0].norm).epsilon(0.01));
}

TEST_CASE("strichartz ratios and determinism") {
    SweepConfig c = radial_cfg(1);
    c.k_values = {-5, -4, -3};
    const StrichartzResult a = strichartz_l4(c), b = strichartz_l4(c);
    REQUIRE(a.rows.size() == 3);
    double lo = 1e300, hi = 0;
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].norm == b.rows[i].norm);
        CHECK(a.rows[i].ratio == doctest::Approx(a.rows[i].norm * std::exp2(a.rows[i].k / 8.0)).epsilon(1e-15));
        lo = std::min(lo, a.rows[i].ratio);
        hi = std::max(hi, a.rows[i].ratio);
    }
    CHECK(a.band == doctest::Approx(hi / lo));
    CHECK(a.fit.n == 3);
}

TEST_CASE("doubling T changes the L4 norm by less than 5%") {
    SweepConfig c = radial_cfg(1);
    c.k_values = {-4, -3, -2};
    c.T = 200.0;
    const StrichartzResult a = strichartz_l4(c);
    c.T = 400.0;
    const StrichartzResult b = strichartz_l4(c);
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CAPTURE(a.rows[i].k);
        CHECK(std::abs(b.rows[i].norm / a.rows[i].norm - 1.0) < 0.05);
    }
}

TEST_CASE("bilinear controls on the radial backend") {
    SweepConfig c = radial_cfg(1);
    c.k_pairs = {{-9, -3}};
    const BilinearResult r = bilinear_l2(c);
    // |u conj(v)| = |u v| pointwise
    CHECK(r.conjugate_change == doctest::Approx(1.0).epsilon(1e-12));
    REQUIRE(r.degenerate_factor.size() == 1);
    CHECK(r.degenerate_factor[0] > 1.0);
    CHECK_FALSE(r.warnings.empty()); // gap 6 < 10 is recorded
    bool seen_sep = false;
    for (const auto& w : r.rows)
        if (w.variant == "separated") {
            seen_sep = true;
            CHECK(w.gap == 6);
            CHECK(w.ratio == doctest::Approx(w.norm * std::exp2(-3 / 4.0) * std::exp2(6 / 4.0)).epsilon(1e-14));
        }
    CHECK(seen_sep);
}

TEST_CASE("generic bound geometry") {
    const auto p = DispersionProfile::model(1, 0.5);
    const PolarBox b1{0.95, 1.05, 0.1, 0.5}, b2{0.95, 1.05, kPi + 0.1, kPi + 0.5};
    const GenericBound g = generic_bilinear_bound(p, SymbolSpec::sector(b1), SymbolSpec::sector(b2), 10000, 1, 8, 128);
    CHECK(g.theta > 1.0);
    CHECK(g.theta <= 2.0 * gamma_eval(p, 1.05, 1) + 1e-12);
    CHECK(g.l > 0.0);
    CHECK(g.bound == doctest::Approx(std::sqrt(g.l / g.theta)).epsilon(1e-14));
    CHECK(g.normalized == doctest::Approx(g.bound / std::sqrt(2 * kPi)).epsilon(1e-14));
    try {
        generic_bilinear_bound(p, SymbolSpec::sector(b1), SymbolSpec::sector(b1), 10000);
        FAIL("same sector must fail");
    } catch (const NumericalError& e) {
        CHECK(e.kind() == "transversality_failure");
        CHECK(std::string(e.what()).find("witness") != std::string::npos);
    }
    CHECK_THROWS_AS(generic_bilinear_bound(p, SymbolSpec::sector(b1), SymbolSpec::sector(b2), 100), ValidationError);
}

TEST_CASE("resonance curves") {
    for (int beta : {1, 2}) {
        const auto p = DispersionProfile::model(beta, 0.5);
        const ResonanceSweep s = resonance_sweep(p, -14, -4, 60, 5);
        CHECK(s.rows.size() == 60);
        CHECK(s.max_components <= 8);
        CHECK(s.max_normalized_len > 0.0);
        // tau0 far outside the range of gamma(|r e - xi0|) + gamma(r)
        const ResonanceCurve c = resonance_curve(p, 50.0, {0.5, 0.1}, -14, -4, default_theta_resolution(-14, -4));
        CHECK(c.n_components() == 0);
        const ResonanceSweep again = resonance_sweep(p, -14, -4, 60, 5);
        for (std::size_t i = 0; i < s.rows.size(); ++i) CHECK(s.rows[i].max_len == again.rows[i].max_len);
    }
    CHECK_THROWS_AS(resonance_curve(DispersionProfile::model(1, 0.5), 1.0, {0.5, 0}, -4, -4, 0.01), ValidationError);
}

TEST_CASE("sector decomposition") {
    const SectorReport r = sector_decomposition_check(-4, -4, 0, SpectralGrid{256, 32}, 3);
    CHECK(r.n_sectors == 32);
    CHECK(r.q_partition);
    CHECK(r.t_partition);
    CHECK(r.r_orthogonal);
    CHECK(r.quadruples > 0);
    MESSAGE("d_min " << r.d_min << " d_pair " << r.d_pair);
    CHECK(r.d_min <= 8);
    CHECK_THROWS_AS(sector_decomposition_check(0, -4, 0, SpectralGrid{256, 32}), ValidationError);
}
