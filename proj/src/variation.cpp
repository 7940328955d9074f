#include "degenlab/variation.hpp"

#include "degenlab/kernels.hpp"

#include <algorithm>

namespace degenlab {

double vp_from_data(const VariationData& d, double p) {
    if (!(p > 1.0) || !std::isfinite(p)) throw ValidationError("invalid_exponent", "V^p needs 1 < p < inf");
    const std::size_t n = d.norms.size();
    if (n == 0) throw ValidationError("empty_series", "time series is empty");
    std::vector<double> D(n, 0.0);
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double v = 0.0; // subsequence starting at i
        for (std::size_t j = 0; j < i; ++j) v = std::max(v, D[j] + std::pow(d.dist[i * n + j], p));
        D[i] = v;
        best = std::max(best, v + std::pow(d.norms[i], p));
    }
    return std::pow(best, 1.0 / p);
}

double vp_bruteforce_from_data(const VariationData& d, double p) {
    if (!(p > 1.0) || !std::isfinite(p)) throw ValidationError("invalid_exponent", "V^p needs 1 < p < inf");
    const std::size_t n = d.norms.size();
    if (n == 0) throw ValidationError("empty_series", "time series is empty");
    if (n > 14) throw ValidationError("series_too_long", "brute-force V^p is limited to 14 samples");
    double best = 0.0;
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        double s = 0.0;
        long prev = -1;
        for (std::size_t i = 0; i < n; ++i) {
            if (!(mask & (1u << i))) continue;
            if (prev >= 0) s = s + std::pow(d.dist[i * n + prev], p);
            prev = static_cast<long>(i);
        }
        best = std::max(best, s + std::pow(d.norms[prev], p));
    }
    return std::pow(best, 1.0 / p);
}

TimeSeries<Field> flow_conjugate(const DispersionProfile& prof, const TimeSeries<Field>& s) {
    s.validate();
    const std::vector<double> h = h_table(prof, s.snapshots.front().grid);
    TimeSeries<Field> out;
    for (std::size_t k = 0; k < s.size(); ++k) out.push(s.times[k], propagate_with(h, as_frequency(s.snapshots[k]), -s.times[k]));
    return out;
}

TimeSeries<ShellField> flow_conjugate(const DispersionProfile& prof, const TimeSeries<ShellField>& s) {
    s.validate();
    const std::vector<double> h = s.snapshots.front().support->h(prof);
    TimeSeries<ShellField> out;
    for (std::size_t k = 0; k < s.size(); ++k) out.push(s.times[k], propagate_with(h, s.snapshots[k], -s.times[k]));
    return out;
}

double vp_flow_norm(const DispersionProfile& prof, const TimeSeries<Field>& s, double p) {
    return vp_norm(flow_conjugate(prof, s), p);
}

double vp_flow_norm(const DispersionProfile& prof, const TimeSeries<ShellField>& s, double p) {
    return vp_norm(flow_conjugate(prof, s), p);
}

std::vector<SymbolSpec> y0_shells(int k_min) {
    if (k_min > -1) throw ValidationError("invalid_shell", "y0 needs k_min <= -1");
    std::vector<SymbolSpec> out;
    out.push_back(SymbolSpec::chi_leq(k_min));
    for (int k = k_min + 1; k <= -1; ++k) out.push_back(SymbolSpec::p(k));
    out.push_back(SymbolSpec::p(0));
    return out;
}

namespace {

void check_resolvable(const SpectralGrid& g, int k_min) {
    if (!g.resolves(k_min))
        throw ValidationError("unresolvable_shell", "k_min=" + std::to_string(k_min) + " is below grid resolvability");
}

} // namespace

double y0_norm(const DispersionProfile& prof, const TimeSeries<Field>& s, int k_min) {
    s.validate();
    check_resolvable(s.snapshots.front().grid, k_min);
    const TimeSeries<Field> v = flow_conjugate(prof, s);
    double total = 0.0;
    for (const SymbolSpec& sh : y0_shells(k_min)) {
        const std::vector<double> tab = symbol_table(v.snapshots.front().grid, sh);
        TimeSeries<Field> proj;
        for (std::size_t k = 0; k < v.size(); ++k) proj.push(v.times[k], apply_table(tab, v.snapshots[k]));
        const double n2 = vp_norm(proj, 2.0);
        total += n2 * n2;
    }
    return std::sqrt(total);
}

double y0_norm(const DispersionProfile& prof, const TimeSeries<ShellField>& s, int k_min) {
    s.validate();
    check_resolvable(s.snapshots.front().support->grid, k_min);
    const TimeSeries<ShellField> v = flow_conjugate(prof, s);
    double total = 0.0;
    for (const SymbolSpec& sh : y0_shells(k_min)) {
        const std::vector<double> tab = v.snapshots.front().support->table(sh);
        if (std::all_of(tab.begin(), tab.end(), [](double x) { return x == 0.0; })) continue;
        TimeSeries<ShellField> proj;
        for (std::size_t k = 0; k < v.size(); ++k) proj.push(v.times[k], multiply(tab, v.snapshots[k]));
        const double n2 = vp_norm(proj, 2.0);
        total += n2 * n2;
    }
    return std::sqrt(total);
}

double spacetime_norm(const TimeSeries<Field>& traj, double p, double single_duration) {
    traj.validate();
    if (!(p >= 1.0)) throw ValidationError("invalid_exponent", "space-time norm needs p >= 1");
    const std::size_t n = traj.size();
    std::vector<double> w(n, 0.0);
    if (n == 1) {
        if (!(single_duration > 0.0))
            throw ValidationError("invalid_series", "single-snapshot trajectory needs a positive duration");
        w[0] = single_duration;
    } else {
        const double dt = (traj.times.back() - traj.times.front()) / (n - 1);
        for (std::size_t i = 1; i < n; ++i)
            if (std::abs(traj.times[i] - traj.times[i - 1] - dt) > 1e-9 * std::max(1.0, std::abs(dt)))
                throw ValidationError("nonuniform_time_grid", "space-time norm needs a uniform time grid");
        for (std::size_t i = 0; i < n; ++i) w[i] = (i == 0 || i == n - 1) ? 0.5 * dt : dt;
    }
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Field s = as_space(traj.snapshots[i]);
        total += w[i] * kernels::sum_abs_pow(s.values.data(), s.values.size(), p) * s.grid.cell_area_space();
    }
    return std::pow(total, 1.0 / p);
}

} // namespace degenlab
