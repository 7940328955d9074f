#pragma once

#include "degenlab/fit.hpp"
#include "degenlab/profile.hpp"

#include <complex>
#include <vector>

namespace degenlab {

// chi_k(r) = chi(2^{-k-2}(r-1)) - chi(2^{-k+3}(r-1)), supported in ||xi|-1| < 3 2^k.
double chi_k(int k, double r);

struct KernelRequest {
    DispersionProfile profile;
    int k = -4;
    double t = 1.0;
    std::vector<double> radii;
    long nodes = 0; // minimum number of radial quadrature nodes
};

// Smallest node count allowed by the phase-resolution rule 64 max(1, |t| 2^k).
long min_kernel_nodes(int k, double t);

struct KernelResult {
    std::vector<std::complex<double>> values;
    long nodes_used = 0;
};

/**
 * K(t, rho) = (2 pi)^-1 int exp(i t gamma(r)) J0(r rho) chi_k(r)^2 r dr by composite
 * Gauss-Legendre panels. `refine` multiplies every panel count (2 = doubled-node rerun).
 */
KernelResult kernel_eval(const KernelRequest& req, int refine = 1);

struct KernelSup {
    double sup = 0;
    double argmax = 0;
    long nodes = 0;
};

// max over rho in [0, rho_max] of |K(t, rho)|: coarse scan then golden-section refinement.
KernelSup kernel_sup(const DispersionProfile& p, int k, double t, double rho_max, int rho_samples);

// Default scan used by sweeps: rho_max = 4 max(1,|t|), spacing <= 1/2.
KernelSup kernel_sup_default(const DispersionProfile& p, int k, double t);

struct DecayFits {
    FitResult t_fit; // log2 sup vs log2 |t| at fixed k
    FitResult k_fit; // log2 sup vs k at fixed t
};

DecayFits decay_fit(const DispersionProfile& p, int k_fixed, const std::vector<double>& t_values, double t_fixed,
                    const std::vector<int>& k_values);

// C(k,t) = sup |K| |t| 2^{beta k / 2}
double normalized_c(const DispersionProfile& p, int k, double t, double sup);

} // namespace degenlab
