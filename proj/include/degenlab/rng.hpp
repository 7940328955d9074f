#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace degenlab {

// SplitMix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x);

// Seed of stream `index` under root seed `root`:
//   splitmix64(root ^ splitmix64(index + 0x9E3779B97F4A7C15))
// Streams are independent of the number of workers that consume them.
std::uint64_t stream_seed(std::uint64_t root, std::uint64_t index);

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}
    // uniform in [0, 1) from the top 53 bits
    double uniform() { return (eng_() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }
    // Box-Muller standard normal
    double normal();
    // complex Gaussian with E|z|^2 = 1
    std::complex<double> complex_normal();

private:
    std::mt19937_64 eng_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

} // namespace degenlab
