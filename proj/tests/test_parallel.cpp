#include "doctest.h"

#include "degenlab/kernels.hpp"
#include "degenlab/rng.hpp"

#include <cmath>
#include <omp.h>
#include <vector>

using namespace degenlab;
namespace kn = degenlab::kernels;
using cd = std::complex<double>;

namespace {

std::vector<cd> random_vec(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<cd> v(n);
    for (auto& z : v) z = rng.complex_normal();
    return v;
}

std::vector<double> random_real(std::size_t n, std::uint64_t seed, double lo, double hi) {
    Rng rng(seed);
    std::vector<double> v(n);
    for (auto& x : v) x = rng.uniform(lo, hi);
    return v;
}

// Runs f with 1 thread and with several; results must be bitwise identical.
template <class F>
void same_for_any_thread_count(F&& f) {
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const auto one = f();
    for (int t : {2, 3, 7}) {
        omp_set_num_threads(t);
        CHECK(f() == one);
    }
    omp_set_num_threads(saved);
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

} // namespace

TEST_CASE("pointwise kernels match the serial reference bitwise") {
    for (std::size_t n : {0ul, 1ul, 7ul, 1000ul, 65537ul}) {
        CAPTURE(n);
        const auto a = random_vec(n, 1);
        const auto w = random_real(n, 2, -3, 3);

        auto p = a, s = a;
        kn::scale(p.data(), n, 1.7);
        kn::serial::scale(s.data(), n, 1.7);
        CHECK(p == s);

        p = a, s = a;
        kn::multiply_real(p.data(), w.data(), n);
        kn::serial::multiply_real(s.data(), w.data(), n);
        CHECK(p == s);

        p = a, s = a;
        kn::cubic(p.data(), n);
        kn::serial::cubic(s.data(), n);
        CHECK(p == s);

        std::vector<cd> po(n), so(n);
        kn::apply_phase(po.data(), a.data(), w.data(), 12.5, n);
        kn::serial::apply_phase(so.data(), a.data(), w.data(), 12.5, n);
        CHECK(po == so);
    }
}

TEST_CASE("reductions agree with the serial reference and ignore the thread count") {
    for (std::size_t n : {0ul, 1ul, 255ul, 257ul, 100003ul}) {
        CAPTURE(n);
        const auto a = random_vec(n, 3), b = random_vec(n, 4);
        const auto w = random_real(n, 5, 0, 2);
        if (n > 0) {
            CHECK(rel(kn::sum_abs_pow(a.data(), n, 4.0), kn::serial::sum_abs_pow(a.data(), n, 4.0)) <= 1e-12);
            CHECK(rel(kn::sum_abs_pow(a.data(), n, 3.0), kn::serial::sum_abs_pow(a.data(), n, 3.0)) <= 1e-12);
            CHECK(rel(kn::sum_sq_diff(a.data(), b.data(), n), kn::serial::sum_sq_diff(a.data(), b.data(), n)) <= 1e-12);
            CHECK(rel(kn::weighted_sum_sq(a.data(), w.data(), n), kn::serial::weighted_sum_sq(a.data(), w.data(), n)) <=
                  1e-12);
            // an inner product can cancel, so compare against the scale of the terms
            const double scale = std::sqrt(kn::serial::sum_abs_pow(a.data(), n, 2) * kn::serial::sum_abs_pow(b.data(), n, 2));
            CHECK(std::abs(kn::real_inner(a.data(), b.data(), n) - kn::serial::real_inner(a.data(), b.data(), n)) <=
                  1e-13 * scale);
        } else {
            CHECK(kn::sum_abs_pow(a.data(), 0, 2.0) == 0.0);
        }
        same_for_any_thread_count([&] {
            return std::vector<double>{kn::sum_abs_pow(a.data(), n, 4.0), kn::sum_sq_diff(a.data(), b.data(), n),
                                       kn::weighted_sum_sq(a.data(), w.data(), n), kn::real_inner(a.data(), b.data(), n)};
        });
    }
}

TEST_CASE("radial synthesis matches the serial reference") {
    const std::size_t nr = 300, np = 37;
    const auto r = random_real(nr, 6, 0.9, 1.1);
    const auto c = random_real(nr, 7, 0, 1e-2);
    const auto g = random_real(nr, 8, -0.2, 0.2);
    std::vector<double> rho(np);
    for (std::size_t b = 0; b < np; ++b) rho[b] = 0.5 * b;
    std::vector<double> times;
    for (int a = -20; a <= 20; ++a) times.push_back(2.5 * a);

    std::vector<double> Bp, Bs;
    kn::bessel_table(r, c, rho, Bp);
    kn::serial::bessel_table(r, c, rho, Bs);
    CHECK(Bp == Bs);

    std::vector<cd> up, us;
    kn::radial_synthesis(times, g, Bp, np, up);
    kn::serial::radial_synthesis(times, g, Bs, np, us);
    REQUIRE(up.size() == us.size());
    double err = 0, scale = 0;
    for (std::size_t i = 0; i < up.size(); ++i) {
        err = std::max(err, std::abs(up[i] - us[i]));
        scale = std::max(scale, std::abs(us[i]));
    }
    CHECK(err <= 1e-13 * scale);
    same_for_any_thread_count([&] {
        std::vector<cd> o;
        kn::radial_synthesis(times, g, Bp, np, o);
        return o;
    });
}
