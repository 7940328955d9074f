#pragma once

#include <vector>

namespace degenlab {

// J0: ascending series below |x| = 12, Hankel asymptotic expansion above.
double bessel_j0(double x);

// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
    std::vector<double> x, w;
};
const GaussRule& gauss_legendre(int n);

} // namespace degenlab
