#pragma once

// Hot pointwise loops and reductions. The default versions are OpenMP parallel;
// the `serial` namespace keeps straightforward single-threaded references that the
// tests compare against and the benchmark times.
//
// Reductions sum over a fixed number of blocks whose boundaries do not depend on
// the thread count, so results are bitwise identical for any --jobs value.

#include <complex>
#include <cstddef>
#include <vector>

namespace degenlab::kernels {

using cd = std::complex<double>;

constexpr std::size_t kReduceBlocks = 256;

void scale(cd* v, std::size_t n, double s);
void multiply_real(cd* v, const double* s, std::size_t n);
// out[i] = in[i] * exp(i t h[i])
void apply_phase(cd* out, const cd* in, const double* h, double t, std::size_t n);
// v[i] = |v[i]|^2 v[i]
void cubic(cd* v, std::size_t n);
// sum |v[i]|^p
double sum_abs_pow(const cd* v, std::size_t n, double p);
// sum |a[i] - b[i]|^2
double sum_sq_diff(const cd* a, const cd* b, std::size_t n);
// sum w[i] |v[i]|^2
double weighted_sum_sq(const cd* v, const double* w, std::size_t n);
// Re sum conj(b[i]) a[i]
double real_inner(const cd* a, const cd* b, std::size_t n);

/**
 * Radial free-wave synthesis. With B(i, b) = c[i] J0(r[i] rho_b) tabulated once,
 *   U(a, b) = sum_i exp(i t_a g[i]) B(i, b)
 * where c already carries amplitude, Jacobian and quadrature weight.
 * Tables and outputs are row-major.
 */
void bessel_table(const std::vector<double>& r, const std::vector<double>& c, const std::vector<double>& rho,
                  std::vector<double>& B);
void radial_synthesis(const std::vector<double>& times, const std::vector<double>& g, const std::vector<double>& B,
                      std::size_t np, std::vector<cd>& out);

namespace serial {
void scale(cd* v, std::size_t n, double s);
void multiply_real(cd* v, const double* s, std::size_t n);
void apply_phase(cd* out, const cd* in, const double* h, double t, std::size_t n);
void cubic(cd* v, std::size_t n);
double sum_abs_pow(const cd* v, std::size_t n, double p);
double sum_sq_diff(const cd* a, const cd* b, std::size_t n);
double weighted_sum_sq(const cd* v, const double* w, std::size_t n);
double real_inner(const cd* a, const cd* b, std::size_t n);
void bessel_table(const std::vector<double>& r, const std::vector<double>& c, const std::vector<double>& rho,
                  std::vector<double>& B);
void radial_synthesis(const std::vector<double>& times, const std::vector<double>& g, const std::vector<double>& B,
                      std::size_t np, std::vector<cd>& out);
} // namespace serial

} // namespace degenlab::kernels
