#pragma once

#include "degenlab/error.hpp"
#include "degenlab/field.hpp"
#include "degenlab/shell.hpp"
#include "degenlab/symbols.hpp"

#include <cmath>
#include <complex>
#include <vector>

namespace degenlab {

// Time-stamped snapshots; times strictly increasing.
template <class T>
struct TimeSeries {
    std::vector<double> times;
    std::vector<T> snapshots;

    std::size_t size() const { return times.size(); }
    void push(double t, T v) {
        times.push_back(t);
        snapshots.push_back(std::move(v));
    }
    void validate() const {
        if (times.empty()) throw ValidationError("empty_series", "time series is empty");
        if (times.size() != snapshots.size()) throw ValidationError("invalid_series", "times and snapshots differ in length");
        for (std::size_t i = 1; i < times.size(); ++i)
            if (!(times[i] > times[i - 1])) throw ValidationError("invalid_series", "times must be strictly increasing");
    }
};

namespace detail {
inline double snap_norm(double a) { return std::abs(a); }
inline double snap_norm(std::complex<double> a) { return std::abs(a); }
inline double snap_norm(const Field& f) {
    const double area = f.rep == Rep::space ? f.grid.cell_area_space() : f.grid.cell_area_freq();
    double s = 0.0;
    for (const auto& v : f.values) s += std::norm(v);
    return std::sqrt(s * area);
}
inline double snap_norm(const ShellField& f) { return f.l2(); }
inline double snap_dist(double a, double b) { return std::abs(a - b); }
inline double snap_dist(std::complex<double> a, std::complex<double> b) { return std::abs(a - b); }
inline double snap_dist(const Field& a, const Field& b) { return l2_distance(a, b); }
inline double snap_dist(const ShellField& a, const ShellField& b) { return l2_distance(a, b); }
} // namespace detail

// Distance data for the V^p optimisation: norms[i] = |v_i|, dist[i*n+j] = |v_i - v_j|.
struct VariationData {
    std::vector<double> norms;
    std::vector<double> dist;
};

template <class T>
VariationData variation_data(const TimeSeries<T>& s) {
    s.validate();
    const long n = static_cast<long>(s.size());
    VariationData d;
    d.norms.resize(n);
    d.dist.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (long i = 0; i < n; ++i) d.norms[i] = detail::snap_norm(s.snapshots[i]);
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < i; ++j) {
            const double v = detail::snap_dist(s.snapshots[i], s.snapshots[j]);
            d.dist[i * n + j] = v;
            d.dist[j * n + i] = v;
        }
    return d;
}

// O(n^2) dynamic program over all subsequences, drop-to-zero term included.
double vp_from_data(const VariationData& d, double p);
// Exhaustive enumeration of the 2^n - 1 subsequences (n <= 14).
double vp_bruteforce_from_data(const VariationData& d, double p);

template <class T>
double vp_norm(const TimeSeries<T>& s, double p) {
    return vp_from_data(variation_data(s), p);
}

template <class T>
double vp_norm_bruteforce(const TimeSeries<T>& s, double p) {
    return vp_bruteforce_from_data(variation_data(s), p);
}

// Snapshot-wise conjugation by the free flow: v(t_k) = exp(-i t_k h(D)) u(t_k).
TimeSeries<Field> flow_conjugate(const DispersionProfile& prof, const TimeSeries<Field>& s);
TimeSeries<ShellField> flow_conjugate(const DispersionProfile& prof, const TimeSeries<ShellField>& s);

double vp_flow_norm(const DispersionProfile& prof, const TimeSeries<Field>& s, double p);
double vp_flow_norm(const DispersionProfile& prof, const TimeSeries<ShellField>& s, double p);

// Partition of unity used by the Y0 square function: P_{<=k_min}, P_k (k_min < k < 0), P_0.
std::vector<SymbolSpec> y0_shells(int k_min);

double y0_norm(const DispersionProfile& prof, const TimeSeries<Field>& s, int k_min);
double y0_norm(const DispersionProfile& prof, const TimeSeries<ShellField>& s, int k_min);

// Trapezoidal-in-time, cell-sum-in-space L^p_{t,x} norm. A single snapshot is weighted
// by `single_duration`.
double spacetime_norm(const TimeSeries<Field>& traj, double p, double single_duration = 0.0);

} // namespace degenlab
