#include "degenlab/rng.hpp"

#include <cmath>
#include <numbers>

namespace degenlab {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t root, std::uint64_t index) {
    return splitmix64(root ^ splitmix64(index + 0x9E3779B97F4A7C15ULL));
}

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u = uniform();
    while (u <= 0.0) u = uniform();
    const double v = uniform();
    const double rad = std::sqrt(-2.0 * std::log(u));
    spare_ = rad * std::sin(2.0 * std::numbers::pi * v);
    has_spare_ = true;
    return rad * std::cos(2.0 * std::numbers::pi * v);
}

std::complex<double> Rng::complex_normal() {
    const double a = normal(), b = normal();
    return {a / std::numbers::sqrt2, b / std::numbers::sqrt2};
}

} // namespace degenlab
