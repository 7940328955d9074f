#include "degenlab/fit.hpp"

#include "degenlab/error.hpp"

#include <cmath>
#include "json.hpp"

namespace degenlab {

FitResult least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw ValidationError("fit_error", "fit inputs differ in length");
    if (x.size() < 3) throw ValidationError("fit_error", "fit needs at least 3 points");
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i]) || !std::isfinite(y[i])) throw NumericalError("degenerate_fit", "non-finite fit input");
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw NumericalError("degenerate_fit", "fit abscissae are all equal");
    FitResult f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double e = y[i] - (f.slope * x[i] + f.intercept);
        ss += e * e;
    }
    f.residual = std::sqrt(ss / n);
    f.n = static_cast<int>(x.size());
    return f;
}

std::string to_json(const FitResult& f) {
    nlohmann::ordered_json j;
    j["slope"] = f.slope;
    j["intercept"] = f.intercept;
    j["residual"] = f.residual;
    j["n"] = f.n;
    return j.dump();
}

} // namespace degenlab
