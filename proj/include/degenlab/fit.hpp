#pragma once

#include <string>
#include <vector>

namespace degenlab {

// Ordinary least squares y = slope * x + intercept; residual is the RMS misfit.
struct FitResult {
    double slope = 0, intercept = 0, residual = 0;
    int n = 0;
};

FitResult least_squares(const std::vector<double>& x, const std::vector<double>& y);
std::string to_json(const FitResult& f);

} // namespace degenlab
