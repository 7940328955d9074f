#include "degenlab/bessel.hpp"

#include "degenlab/error.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace degenlab {

namespace {

double j0_series(double x) {
    const double q = 0.25 * x * x;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 80; ++k) {
        term *= -q / (static_cast<double>(k) * k);
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum) && k > 2) break;
    }
    return sum;
}

double j0_asymptotic(double x) {
    // a_k = a_{k-1} (0 - (2k-1)^2) / (8k); P collects even k, Q odd k, alternating.
    double p = 1.0, q = 0.0, a = 1.0, prev = 1.0;
    for (int k = 1; k < 60; ++k) {
        const double f = static_cast<double>(2 * k - 1);
        a *= -(f * f) / (8.0 * k * x);
        if (std::abs(a) > prev) break; // asymptotic series starts diverging
        prev = std::abs(a);
        if (k % 2 == 0)
            p += ((k / 2) % 2 == 0 ? 1.0 : -1.0) * a;
        else
            q += (((k - 1) / 2) % 2 == 0 ? 1.0 : -1.0) * a;
        if (prev < 1e-17) break;
    }
    const double c = std::cos(x), s = std::sin(x);
    // cos(x - pi/4) = (c + s)/sqrt2, sin(x - pi/4) = (s - c)/sqrt2
    const double amp = std::sqrt(2.0 / (std::numbers::pi * x));
    return amp * (p * (c + s) - q * (s - c)) / std::numbers::sqrt2;
}

// J0(x) = pi^-1 int_0^pi cos(x sin th) dth. The integrand is smooth and pi-periodic, so the
// midpoint rule converges geometrically once n exceeds about e x / 2. The power series
// loses digits to cancellation here and the asymptotic series is only good to e^{-2x}.
double j0_midpoint(double x) {
    const int n = 40 + static_cast<int>(x);
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += std::cos(x * std::sin(std::numbers::pi * (i + 0.5) / n));
    return s / n;
}

} // namespace

double bessel_j0(double x) {
    x = std::abs(x);
    if (x < 5.0) return j0_series(x);
    return x < 25.0 ? j0_midpoint(x) : j0_asymptotic(x);
}

const GaussRule& gauss_legendre(int n) {
    if (n < 1) throw ValidationError("invalid_quadrature", "Gauss-Legendre order must be positive");
    static std::mutex mu;
    static std::map<int, GaussRule> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    GaussRule g;
    g.x.resize(n);
    g.w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it2 = 0; it2 < 100; ++it2) {
            double p0 = 1.0, p1 = z;
            for (int k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            dp = n * (z * p1 - p0) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        g.x[i] = -z;
        g.x[n - 1 - i] = z;
        g.w[i] = g.w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    return cache.emplace(n, std::move(g)).first->second;
}

} // namespace degenlab
