#include "degenlab/error.hpp"
#include "degenlab/estimates.hpp"
#include "degenlab/kernels.hpp"
#include "degenlab/radial.hpp"
#include "degenlab/rng.hpp"

#include <algorithm>
#include <cmath>

namespace degenlab {

std::string to_string(Backend b) { return b == Backend::radial ? "radial" : "grid"; }
std::string to_string(DataRecipe r) { return r == DataRecipe::random ? "random" : "bump"; }

Backend backend_from_string(const std::string& s) {
    if (s == "radial") return Backend::radial;
    if (s == "grid") return Backend::grid;
    throw ValidationError("invalid_backend", "unknown backend '" + s + "'");
}

DataRecipe recipe_from_string(const std::string& s) {
    if (s == "random") return DataRecipe::random;
    if (s == "bump") return DataRecipe::bump;
    throw ValidationError("invalid_recipe", "unknown data recipe '" + s + "'");
}

void SweepConfig::validate() const {
    profile.validate();
    if (!(T > 0)) throw ValidationError("invalid_window", "T must be positive");
    if (!(dt > 0) || dt > 0.1) throw ValidationError("invalid_window", "dt must lie in (0, 0.1]");
    if (!(drho > 0)) throw ValidationError("invalid_window", "drho must be positive");
    if (repetitions < 3) throw ValidationError("invalid_repetitions", "repetitions must be >= 3");
    if (backend == Backend::radial && recipe != DataRecipe::bump)
        throw ValidationError("invalid_recipe", "the radial backend supports the bump recipe only");
    std::vector<int> ks = k_values;
    for (const auto& [a, b] : k_pairs) {
        ks.push_back(a);
        ks.push_back(b);
        if (a > b) throw ValidationError("invalid_shell", "bilinear pairs need k1 <= k2");
    }
    for (int k : ks) {
        if (k > -1) throw ValidationError("invalid_shell", "shell k=" + std::to_string(k) + " must be <= -1");
        if (backend == Backend::grid && !grid.resolves(k))
            throw ValidationError("unresolvable_shell", "k=" + std::to_string(k) + " is below grid resolvability (min k=" +
                                                            std::to_string(grid.min_resolvable_k()) + ")");
    }
    if (backend == Backend::grid) grid.validate();
}

Field shell_datum(const SpectralGrid& g, const SymbolSpec& s, DataRecipe recipe, std::uint64_t seed) {
    Field f(g, Rep::frequency);
    const std::vector<double> tab = symbol_table(g, s);
    if (recipe == DataRecipe::random) {
        Rng rng(seed);
        for (std::size_t i = 0; i < f.values.size(); ++i) f.values[i] = rng.complex_normal() * tab[i];
    } else {
        for (std::size_t i = 0; i < f.values.size(); ++i) f.values[i] = tab[i];
    }
    const double n = l2_norm_frequency(f);
    if (!(n > 0)) throw ValidationError("empty_datum", "symbol " + s.describe() + " has no lattice support");
    kernels::scale(f.values.data(), f.values.size(), 1.0 / n);
    return f;
}

namespace {

std::vector<double> trapezoid(double T, double dt, std::vector<double>& times) {
    const long n = std::lround(2.0 * T / dt);
    times.resize(n + 1);
    std::vector<double> w(n + 1, dt);
    for (long i = 0; i <= n; ++i) times[i] = -T + i * dt;
    w.front() = w.back() = 0.5 * dt;
    return w;
}

double gamma1_max(const DispersionProfile& p, double lo, double hi) {
    double m = 0.0;
    for (int i = 0; i <= 200; ++i) m = std::max(m, std::abs(gamma_jet(p, lo + (hi - lo) * i / 200).g1));
    return m;
}

double radial_l4(const SweepConfig& cfg, int k) {
    const double w = std::ldexp(1.0, k), lo = 1.0 - 0.75 * w, hi = 1.0 + 0.75 * w;
    RadialWindow win;
    win.T = cfg.T;
    win.dt = cfg.dt;
    win.drho = cfg.drho;
    win.rho_max = cfg.T * gamma1_max(cfg.profile, lo, hi) + 12.0 / w;
    const RadialWave u = make_radial_wave(cfg.profile, [k](double r) { return p_shell_radial(k, r); }, lo, hi, cfg.T,
                                          win.rho_max);
    return radial_spacetime_norm(u, win, 4.0);
}

} // namespace

double grid_l4_norm(const DispersionProfile& p, const Field& u0, double T, double dt) {
    std::vector<double> times;
    const std::vector<double> w = trapezoid(T, dt, times);
    const Field f = as_frequency(u0);
    const std::vector<double> h = h_table(p, f.grid);
    const double area = f.grid.cell_area_space();
    double total = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const Field s = to_space(propagate_with(h, f, times[i]));
        total += w[i] * kernels::sum_abs_pow(s.values.data(), s.values.size(), 4.0) * area;
    }
    if (!std::isfinite(total)) throw NumericalError("norm_overflow", "L4 norm is not finite");
    return std::pow(total, 0.25);
}

StrichartzResult strichartz_l4(const SweepConfig& cfg) {
    cfg.validate();
    if (cfg.k_values.size() < 3) throw ValidationError("invalid_sweep", "strichartz sweep needs at least 3 shells");
    StrichartzResult res;
    const int beta = cfg.profile.beta;
    std::vector<double> xs, ys, ratios;
    for (int k : cfg.k_values) {
        double best = 0.0;
        if (cfg.backend == Backend::radial) {
            best = radial_l4(cfg, k);
            res.rows.push_back({beta, k, cfg.T, best, best * std::exp2(beta * k / 8.0), cfg.seed});
        } else {
            const int reps = cfg.recipe == DataRecipe::random ? cfg.repetitions : 1;
            for (int r = 0; r < reps; ++r) {
                const std::uint64_t sd = stream_seed(cfg.seed, static_cast<std::uint64_t>((k + 1024) * 4096 + r));
                const Field u0 = shell_datum(cfg.grid, SymbolSpec::p(k), cfg.recipe, sd);
                const double n = grid_l4_norm(cfg.profile, u0, cfg.T, cfg.dt);
                res.rows.push_back({beta, k, cfg.T, n, n * std::exp2(beta * k / 8.0), sd});
                best = std::max(best, n);
            }
        }
        xs.push_back(k);
        ys.push_back(std::log2(best));
        ratios.push_back(best * std::exp2(beta * k / 8.0));
    }
    res.fit = least_squares(xs, ys);
    res.band = *std::max_element(ratios.begin(), ratios.end()) / *std::min_element(ratios.begin(), ratios.end());
    return res;
}

} // namespace degenlab
