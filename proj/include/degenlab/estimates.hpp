#pragma once

#include "degenlab/field.hpp"
#include "degenlab/fit.hpp"
#include "degenlab/profile.hpp"
#include "degenlab/symbols.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace degenlab {

enum class Backend { radial, grid };
enum class DataRecipe { random, bump };

std::string to_string(Backend b);
std::string to_string(DataRecipe r);
Backend backend_from_string(const std::string& s);
DataRecipe recipe_from_string(const std::string& s);

/**
 * Sweep over shells. The radial backend integrates exact radial free waves in 1D
 * (bump recipe only); the grid backend propagates lattice fields on the torus.
 * Random data is repeated `repetitions` times with split seeds; bump data is
 * deterministic and runs once.
 */
struct SweepConfig {
    DispersionProfile profile;
    SpectralGrid grid{1024, 128.0};
    Backend backend = Backend::radial;
    DataRecipe recipe = DataRecipe::bump;
    std::vector<int> k_values;                  // strichartz
    std::vector<std::pair<int, int>> k_pairs;   // bilinear (k1, k2)
    double T = 200.0;
    double dt = 0.1;
    double drho = 0.25; // radial backend spatial step
    int repetitions = 3;
    std::uint64_t seed = 0;

    void validate() const;
};

// Unit-L2 shell datum on the lattice: coefficients times the symbol, normalized.
Field shell_datum(const SpectralGrid& g, const SymbolSpec& s, DataRecipe recipe, std::uint64_t seed);

struct StrichartzRow {
    int beta = 0, k = 0;
    double T = 0, norm = 0, ratio = 0;
    std::uint64_t seed = 0;
};

struct StrichartzResult {
    std::vector<StrichartzRow> rows;
    FitResult fit;     // log2 norm vs k (per-k maximum over repetitions)
    double band = 0;   // max_k ratio / min_k ratio
};

StrichartzResult strichartz_l4(const SweepConfig& cfg);

struct BilinearRow {
    int beta = 0, k1 = 0, k2 = 0, gap = 0;
    double norm = 0, ratio = 0;
    std::uint64_t seed = 0;
    std::string variant; // "separated", "degenerate", "conjugate"
};

struct BilinearResult {
    std::vector<BilinearRow> rows;
    std::optional<FitResult> fit_k2;  // at fixed k1
    std::optional<FitResult> fit_k1;  // at fixed k2
    double band = 0;                  // max/min separated ratio
    std::vector<double> degenerate_factor; // degenerate ratio / separated ratio, per k2
    double conjugate_change = 0;      // max over pairs of max(r_c/r, r/r_c)
    std::vector<std::string> warnings;
};

struct BilinearOptions {
    bool degenerate_control = true;
    bool conjugate_variant = true;
};

BilinearResult bilinear_l2(const SweepConfig& cfg, const BilinearOptions& opt = {});

// ||(e^{ith} S1 u)(e^{ith} S2 v)||_{L2([-T,T] x torus)} for lattice data.
double grid_bilinear_norm(const DispersionProfile& p, const Field& u0, const Field& v0, double T, double dt,
                          bool conj_second = false);
// (int int |e^{ith} u0|^4)^(1/4) over [-T,T] x torus.
double grid_l4_norm(const DispersionProfile& p, const Field& u0, double T, double dt);

struct GenericBound {
    double theta = 0;        // min |grad h(xi) - grad h(eta)| over sampled pairs
    double l = 0;            // max measured resonance-curve length
    double bound = 0;        // theta^-1/2 l^1/2
    double normalized = 0;   // (2 pi)^-1/2 bound, the constant for unitary transforms
    Vec2 theta_xi{}, theta_eta{};
    long pairs = 0;
    int draws = 0;
};

// Samples >= 1e4 pairs (about sqrt(samples) points per sector). Curve length by
// marching squares on the polar box of sector1.
GenericBound generic_bilinear_bound(const DispersionProfile& p, const SymbolSpec& sector1, const SymbolSpec& sector2,
                                    long samples, std::uint64_t seed = 0, int draws = 48, int march = 256);

struct ThetaInterval {
    double lo = 0, hi = 0; // hi may exceed 2 pi for arcs through 0
    double length() const { return hi - lo; }
};

struct ResonanceCurve {
    std::vector<ThetaInterval> intervals;
    long gaps = 0; // bisections that ended on a jump, not a root
    int n_components() const { return static_cast<int>(intervals.size()); }
    double max_len() const;
};

/**
 * Angular extent of {xi in Omega1 : xi0 - xi in Omega2, h(xi) + h(xi0 - xi) = tau0},
 *   Omega1 = {1 - 2^(k1+2) < |xi| < 1 + 2^(k1+2)},
 *   Omega2 = {1 + 2^(k2-2) < |xi| < 1 + 2^(k2+2)}.
 */
ResonanceCurve resonance_curve(const DispersionProfile& p, double tau0, const Vec2& xi0, int k1, int k2,
                               double theta_res);

double default_theta_resolution(int k1, int k2);

struct ResonanceRow {
    int beta = 0, k1 = 0, k2 = 0;
    double tau0 = 0, xi0_r = 0, xi0_theta = 0;
    int n_components = 0;
    double max_len = 0, normalized_len = 0;
    long gaps = 0;
};

struct ResonanceSweep {
    std::vector<ResonanceRow> rows;
    int max_components = 0;
    double max_normalized_len = 0;
};

// Random draws: r0 log-uniform in [2^(k2-1), 2], theta0 uniform, tau0 from a random
// feasible xi so that the curve is nonempty.
ResonanceSweep resonance_sweep(const DispersionProfile& p, int k1, int k2, int draws, std::uint64_t seed,
                               double theta_res = 0.0);

struct SectorReport {
    int k = 0, m = 0, n_sectors = 0, N = 0;
    long lattice_points = 0;
    bool q_partition = false, t_partition = false, r_orthogonal = false;
    long quadruples = 0;
    int d_min = 0;   // max over nonvanishing quadruples of min(|i1-i2|, |i1-i|)
    int d_pair = 0;  // smallest d for which every quadruple satisfies the two-way pairing
};

// n_sectors = 0 selects 8 2^(-k/2).
SectorReport sector_decomposition_check(int k, int m, int n_sectors, const SpectralGrid& grid, std::uint64_t seed = 0);

} // namespace degenlab
