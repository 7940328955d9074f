#pragma once

#include "degenlab/profile.hpp"

#include <functional>
#include <vector>

namespace degenlab {

/**
 * Radial datum with Fourier transform a(|xi|). The free wave is
 *   u(t, rho) = int a(r) exp(i t gamma(r)) J0(r rho) r dr,
 * discretized by Gauss-Legendre panels; amplitudes normalized so that
 * ||u(0)||_2^2 = 2 pi int |a|^2 r dr = 1 under the same quadrature.
 */
struct RadialWave {
    std::vector<double> r, c, g; // nodes, a r w (normalized), gamma(r)
    double norm_before = 0;      // L2 norm of the unnormalized datum
};

RadialWave make_radial_wave(const DispersionProfile& p, const std::function<double(double)>& a, double r_lo,
                            double r_hi, double t_max, double rho_max);

// Space-time sampling: t in [-T, T] step dt (trapezoid), rho midpoints with step drho up to rho_max.
struct RadialWindow {
    double T = 200, dt = 0.1, drho = 0.25, rho_max = 0;
};

// (int int |u|^p 2 pi rho drho dt)^(1/p)
double radial_spacetime_norm(const RadialWave& u, const RadialWindow& w, double p);
// || u v ||_{L^2_{t,x}}; `conj_second` uses conj(v) (same modulus, kept for the conjugate variant)
double radial_bilinear_norm(const RadialWave& u, const RadialWave& v, const RadialWindow& w, bool conj_second);

} // namespace degenlab
