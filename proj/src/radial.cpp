#include "degenlab/radial.hpp"

#include "degenlab/bessel.hpp"
#include "degenlab/error.hpp"
#include "degenlab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

namespace degenlab {

namespace {

constexpr int kOrder = 10;
constexpr std::size_t kChunk = 64;

std::vector<double> time_grid(const RadialWindow& w, std::vector<double>& weights) {
    if (!(w.T > 0) || !(w.dt > 0) || !(w.drho > 0) || !(w.rho_max > 0))
        throw ValidationError("invalid_window", "radial window needs positive T, dt, drho, rho_max");
    const long n = std::lround(2.0 * w.T / w.dt);
    std::vector<double> t(n + 1);
    weights.assign(n + 1, w.dt);
    for (long i = 0; i <= n; ++i) t[i] = -w.T + i * w.dt;
    weights.front() = weights.back() = 0.5 * w.dt;
    return t;
}

std::vector<double> rho_grid(const RadialWindow& w) {
    const long n = static_cast<long>(std::ceil(w.rho_max / w.drho));
    std::vector<double> rho(n);
    for (long i = 0; i < n; ++i) rho[i] = (i + 0.5) * w.drho;
    return rho;
}

} // namespace

RadialWave make_radial_wave(const DispersionProfile& p, const std::function<double(double)>& a, double r_lo,
                            double r_hi, double t_max, double rho_max) {
    if (!(r_hi > r_lo) || r_lo < 0) throw ValidationError("invalid_support", "radial support must satisfy 0 <= r_lo < r_hi");
    double g1max = 0.0;
    for (int i = 0; i <= 100; ++i) g1max = std::max(g1max, std::abs(gamma_jet(p, r_lo + (r_hi - r_lo) * i / 100).g1));
    const double rate = std::abs(t_max) * g1max + rho_max; // phase change per unit r
    const long panels = std::max<long>(64, static_cast<long>(std::ceil((r_hi - r_lo) * rate / 2.0)));
    const GaussRule& gr = gauss_legendre(kOrder);
    const double h = (r_hi - r_lo) / panels;
    RadialWave w;
    double mass = 0.0;
    for (long q = 0; q < panels; ++q) {
        for (int i = 0; i < kOrder; ++i) {
            const double r = r_lo + q * h + 0.5 * h * (gr.x[i] + 1.0);
            const double wt = 0.5 * h * gr.w[i];
            const double av = a(r);
            if (av == 0.0) continue;
            w.r.push_back(r);
            w.c.push_back(av * r * wt);
            w.g.push_back(gamma_jet(p, r).g0);
            mass += av * av * r * wt;
        }
    }
    w.norm_before = std::sqrt(2.0 * std::numbers::pi * mass);
    if (!(w.norm_before > 0)) throw ValidationError("empty_datum", "radial datum vanishes on its support");
    for (double& c : w.c) c /= w.norm_before;
    return w;
}

double radial_spacetime_norm(const RadialWave& u, const RadialWindow& w, double p) {
    std::vector<double> tw;
    const std::vector<double> t = time_grid(w, tw);
    const std::vector<double> rho = rho_grid(w);
    std::vector<double> B;
    kernels::bessel_table(u.r, u.c, rho, B);
    double total = 0.0;
    std::vector<std::complex<double>> out;
    for (std::size_t t0 = 0; t0 < t.size(); t0 += kChunk) {
        const std::vector<double> tc(t.begin() + t0, t.begin() + std::min(t.size(), t0 + kChunk));
        kernels::radial_synthesis(tc, u.g, B, rho.size(), out);
        for (std::size_t a = 0; a < tc.size(); ++a) {
            double s = 0.0;
            for (std::size_t b = 0; b < rho.size(); ++b) s += std::pow(std::norm(out[a * rho.size() + b]), 0.5 * p) * rho[b];
            total += tw[t0 + a] * s * 2.0 * std::numbers::pi * w.drho;
        }
    }
    if (!std::isfinite(total)) throw NumericalError("norm_overflow", "space-time norm is not finite");
    return std::pow(total, 1.0 / p);
}

double radial_bilinear_norm(const RadialWave& u, const RadialWave& v, const RadialWindow& w, bool conj_second) {
    std::vector<double> tw;
    const std::vector<double> t = time_grid(w, tw);
    const std::vector<double> rho = rho_grid(w);
    std::vector<double> Bu, Bv;
    kernels::bessel_table(u.r, u.c, rho, Bu);
    kernels::bessel_table(v.r, v.c, rho, Bv);
    double total = 0.0;
    std::vector<std::complex<double>> ou, ov;
    for (std::size_t t0 = 0; t0 < t.size(); t0 += kChunk) {
        const std::vector<double> tc(t.begin() + t0, t.begin() + std::min(t.size(), t0 + kChunk));
        kernels::radial_synthesis(tc, u.g, Bu, rho.size(), ou);
        kernels::radial_synthesis(tc, v.g, Bv, rho.size(), ov);
        for (std::size_t a = 0; a < tc.size(); ++a) {
            double s = 0.0;
            for (std::size_t b = 0; b < rho.size(); ++b) {
                const std::size_t i = a * rho.size() + b;
                const std::complex<double> second = conj_second ? std::conj(ov[i]) : ov[i];
                s += std::norm(ou[i] * second) * rho[b];
            }
            total += tw[t0 + a] * s * 2.0 * std::numbers::pi * w.drho;
        }
    }
    if (!std::isfinite(total)) throw NumericalError("norm_overflow", "bilinear norm is not finite");
    return std::sqrt(total);
}

} // namespace degenlab
