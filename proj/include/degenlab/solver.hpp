#pragma once

#include "degenlab/field.hpp"
#include "degenlab/shell.hpp"
#include "degenlab/variation.hpp"

#include <complex>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace degenlab {

enum class Scheme { interaction_rk4, picard };
std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

/**
 * u_t - i h(D) u = c A(D)(|P_{<=M} u|^2 P_{<=M} u), c = `coupling`.
 * The default c = i is the Duhamel form
 *   u(t) = e^{ith} u0 + i int_0^t e^{i(t-s)h} A(D)(...) ds.
 * c = 0 switches the nonlinearity off (linear-flow hook).
 */
struct SolverConfig {
    DispersionProfile profile;
    SpectralGrid grid;
    int M = -5;
    double dt = 0.1;
    double T_final = 10.0;
    Scheme scheme = Scheme::interaction_rk4;
    double epsilon = 0.05;
    int stride = 1;                 // snapshot every `stride` steps
    std::complex<double> coupling{0.0, 1.0};
    bool backward = false;          // integrate over [-T_final, 0]
    double epsilon0 = 0.0;          // configured smallness bound, 0 = unchecked

    void validate() const;
};

// A(D)(|P_{<=M} u|^2 P_{<=M} u) in frequency representation (no coupling factor).
Field nonlinearity(const SolverConfig& cfg, const Field& u);

// 3 sup|A| B^2 eps^2 with the Bernstein constant B of supp P_{<=M} on the lattice.
double lipschitz_bound(const SolverConfig& cfg);

/**
 * Solution sampled at snapshot times. The spectrum inside supp P_{<=M} is stored
 * compressed; the rest of u0 only evolves linearly and is kept once.
 */
struct Trajectory {
    TimeSeries<ShellField> core; // u(t_k) restricted to supp P_{<=M}
    Field outer;                 // u0 outside supp P_{<=M} (frequency)
    std::shared_ptr<const std::vector<double>> h_full;

    std::size_t size() const { return core.size(); }
    Field at(std::size_t k) const; // full u(t_k), frequency representation
};

Trajectory solve(const SolverConfig& cfg, const Field& u0);

// Datum of L2 norm eps on supp P_{<=M}: a wave packet at the origin with a seeded smooth
// angular profile.
Field solver_datum(const SolverConfig& cfg, double eps, std::uint64_t seed);

struct PicardResult {
    std::vector<TimeSeries<ShellField>> iterates; // u^(0) .. u^(n), on supp P_{<=M}
    std::vector<double> diff_linf;  // ||u^(j) - u^(j-1)||_{L^inf L^2}, j = 1..n
    std::vector<double> diff_y0;
    std::vector<double> ratio_linf; // rho_j = diff_{j+1} / diff_j
    std::vector<double> ratio_y0;
    bool contracting_half = false;  // all rho_j <= 1/2 (both norms)
    bool diverged = false;          // some rho_j > 1
};

// Picard iteration of the Duhamel map on the snapshot grid (trapezoidal quadrature).
// Throws NumericalError("divergence") when some ratio exceeds 1 and `allow_divergence` is false.
PicardResult picard_iterate(const SolverConfig& cfg, const Field& u0, int n_iters, bool allow_divergence = false);

struct Eps0Result {
    double eps0 = 0;
    std::vector<std::pair<double, bool>> history; // (eps, contracting)
};

// Largest eps (log-bisection) for which every Picard ratio is <= 1/2 on data eps * unit.
Eps0Result bisect_eps0(const SolverConfig& cfg, const Field& unit_datum, int n_iters, double eps_lo, double eps_hi,
                       int steps);

struct CauchyWindow {
    double t_lo = 0, t_hi = 0, sup = 0;
};

struct ScatterResult {
    Field u_plus;                        // e^{-iTh} u(T), frequency
    std::vector<CauchyWindow> windows;   // dyadic windows [T/2^(m+1), T/2^m], latest first
    double early_sup = 0, late_sup = 0;  // pairs in [T/4, T/2] and in [T/2, T]
    bool cauchy = false;                 // late <= early
    bool monotone = false;               // window sups non-increasing toward late times
    std::vector<std::string> warnings;
};

ScatterResult scattering_state(const SolverConfig& cfg, const Trajectory& traj, int n_windows = 4);

struct MassRow {
    double t = 0, norm = 0, dnorm2_fd = 0, dnorm2_exact = 0;
};

struct MassDrift {
    std::vector<MassRow> rows;     // fd entries are NaN where the stencil does not fit
    double max_mismatch = 0;       // max |fd - exact| over interior rows
    double total_drift = 0;        // | ||u(T)|| - ||u(0)|| |
};

MassDrift mass_drift(const SolverConfig& cfg, const Trajectory& traj);

} // namespace degenlab
