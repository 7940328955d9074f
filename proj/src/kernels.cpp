#include "degenlab/kernels.hpp"

#include "degenlab/bessel.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace degenlab::kernels {

namespace {

inline double abs_pow(cd z, double p) {
    const double n2 = std::norm(z);
    if (p == 2.0) return n2;
    if (p == 4.0) return n2 * n2;
    return std::pow(n2, 0.5 * p);
}

// Fixed-block reduction: block boundaries depend only on n.
template <class F>
double block_reduce(std::size_t n, F&& term) {
    std::array<double, kReduceBlocks> part{};
    const long nb = static_cast<long>(kReduceBlocks);
#pragma omp parallel for schedule(static)
    for (long b = 0; b < nb; ++b) {
        const std::size_t lo = n * b / kReduceBlocks, hi = n * (b + 1) / kReduceBlocks;
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += term(i);
        part[b] = s;
    }
    double total = 0.0;
    for (double s : part) total += s;
    return total;
}

} // namespace

void scale(cd* v, std::size_t n, double s) {
    const long m = static_cast<long>(n);
#pragma omp parallel for schedule(static)
    for (long i = 0; i < m; ++i) v[i] *= s;
}

void multiply_real(cd* v, const double* s, std::size_t n) {
    const long m = static_cast<long>(n);
#pragma omp parallel for schedule(static)
    for (long i = 0; i < m; ++i) v[i] *= s[i];
}

void apply_phase(cd* out, const cd* in, const double* h, double t, std::size_t n) {
    const long m = static_cast<long>(n);
#pragma omp parallel for schedule(static)
    for (long i = 0; i < m; ++i) {
        const double ph = t * h[i];
        out[i] = in[i] * cd(std::cos(ph), std::sin(ph));
    }
}

void cubic(cd* v, std::size_t n) {
    const long m = static_cast<long>(n);
#pragma omp parallel for schedule(static)
    for (long i = 0; i < m; ++i) v[i] *= std::norm(v[i]);
}

double sum_abs_pow(const cd* v, std::size_t n, double p) {
    return block_reduce(n, [&](std::size_t i) { return abs_pow(v[i], p); });
}

double sum_sq_diff(const cd* a, const cd* b, std::size_t n) {
    return block_reduce(n, [&](std::size_t i) { return std::norm(a[i] - b[i]); });
}

double weighted_sum_sq(const cd* v, const double* w, std::size_t n) {
    return block_reduce(n, [&](std::size_t i) { return w[i] * std::norm(v[i]); });
}

double real_inner(const cd* a, const cd* b, std::size_t n) {
    return block_reduce(n, [&](std::size_t i) { return (std::conj(b[i]) * a[i]).real(); });
}

void bessel_table(const std::vector<double>& r, const std::vector<double>& c, const std::vector<double>& rho,
                  std::vector<double>& B) {
    const std::size_t nr = r.size(), np = rho.size();
    B.resize(nr * np);
    const long nrl = static_cast<long>(nr);
#pragma omp parallel for schedule(static)
    for (long i = 0; i < nrl; ++i)
        for (std::size_t b = 0; b < np; ++b) B[i * np + b] = c[i] * bessel_j0(r[i] * rho[b]);
}

void radial_synthesis(const std::vector<double>& times, const std::vector<double>& g, const std::vector<double>& B,
                      std::size_t np, std::vector<cd>& out) {
    const std::size_t nt = times.size(), nr = g.size();
    out.assign(nt * np, cd(0.0, 0.0));
    constexpr std::size_t tile = 8;
    const long ntiles = static_cast<long>((nt + tile - 1) / tile);
#pragma omp parallel
    {
        std::vector<double> re(tile * np), im(tile * np), cs(tile), sn(tile);
#pragma omp for schedule(dynamic)
        for (long tt = 0; tt < ntiles; ++tt) {
            const std::size_t t0 = tt * tile, t1 = std::min(nt, t0 + tile), m = t1 - t0;
            std::fill(re.begin(), re.end(), 0.0);
            std::fill(im.begin(), im.end(), 0.0);
            for (std::size_t i = 0; i < nr; ++i) {
                for (std::size_t a = 0; a < m; ++a) {
                    const double ph = times[t0 + a] * g[i];
                    cs[a] = std::cos(ph);
                    sn[a] = std::sin(ph);
                }
                const double* row = &B[i * np];
                for (std::size_t a = 0; a < m; ++a) {
                    double* pr = &re[a * np];
                    double* pi = &im[a * np];
                    const double ca = cs[a], sa = sn[a];
                    for (std::size_t b = 0; b < np; ++b) {
                        pr[b] += ca * row[b];
                        pi[b] += sa * row[b];
                    }
                }
            }
            for (std::size_t a = 0; a < m; ++a)
                for (std::size_t b = 0; b < np; ++b) out[(t0 + a) * np + b] = cd(re[a * np + b], im[a * np + b]);
        }
    }
}

namespace serial {

void scale(cd* v, std::size_t n, double s) {
    for (std::size_t i = 0; i < n; ++i) v[i] *= s;
}

void multiply_real(cd* v, const double* s, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) v[i] *= s[i];
}

void apply_phase(cd* out, const cd* in, const double* h, double t, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = in[i] * std::polar(1.0, t * h[i]);
}

void cubic(cd* v, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) v[i] = std::norm(v[i]) * v[i];
}

double sum_abs_pow(const cd* v, std::size_t n, double p) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::pow(std::abs(v[i]), p);
    return s;
}

double sum_sq_diff(const cd* a, const cd* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::norm(a[i] - b[i]);
    return s;
}

double weighted_sum_sq(const cd* v, const double* w, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += w[i] * std::norm(v[i]);
    return s;
}

double real_inner(const cd* a, const cd* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += (std::conj(b[i]) * a[i]).real();
    return s;
}

void bessel_table(const std::vector<double>& r, const std::vector<double>& c, const std::vector<double>& rho,
                  std::vector<double>& B) {
    B.resize(r.size() * rho.size());
    for (std::size_t i = 0; i < r.size(); ++i)
        for (std::size_t b = 0; b < rho.size(); ++b) B[i * rho.size() + b] = c[i] * bessel_j0(r[i] * rho[b]);
}

void radial_synthesis(const std::vector<double>& times, const std::vector<double>& g, const std::vector<double>& B,
                      std::size_t np, std::vector<cd>& out) {
    const std::size_t nt = times.size(), nr = g.size();
    out.assign(nt * np, cd(0.0, 0.0));
    for (std::size_t a = 0; a < nt; ++a)
        for (std::size_t b = 0; b < np; ++b) {
            cd s(0.0, 0.0);
            for (std::size_t i = 0; i < nr; ++i) s += std::polar(1.0, times[a] * g[i]) * B[i * np + b];
            out[a * np + b] = s;
        }
}

} // namespace serial

} // namespace degenlab::kernels
