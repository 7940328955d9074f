#include "degenlab/field.hpp"

#include "degenlab/error.hpp"
#include "degenlab/kernels.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace degenlab {

namespace {

constexpr double kPi = std::numbers::pi;

struct PlanPair {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
};

// Plans are made once per size with FFTW_ESTIMATE (no timing-dependent choices) and
// a single thread, so transforms are reproducible regardless of the worker count.
const PlanPair& plans_for(int N) {
    static std::mutex mu;
    static std::map<int, PlanPair> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(N);
    if (it != cache.end()) return it->second;
    CVec tmp(static_cast<std::size_t>(N) * N);
    auto* p = reinterpret_cast<fftw_complex*>(tmp.data());
    PlanPair pp;
    pp.fwd = fftw_plan_dft_2d(N, N, p, p, FFTW_FORWARD, FFTW_ESTIMATE);
    pp.bwd = fftw_plan_dft_2d(N, N, p, p, FFTW_BACKWARD, FFTW_ESTIMATE);
    if (!pp.fwd || !pp.bwd) throw NumericalError("fft_plan", "FFTW could not create a plan");
    return cache.emplace(N, pp).first->second;
}

void execute(fftw_plan plan, CVec& v) {
    auto* p = reinterpret_cast<fftw_complex*>(v.data());
    fftw_execute_dft(plan, p, p);
}

} // namespace

void SpectralGrid::validate() const {
    if (N < 2 || (N & (N - 1)) != 0) throw ValidationError("invalid_grid", "grid N must be a power of two");
    if (!(L > 0.0)) throw ValidationError("invalid_grid", "grid L must be positive");
    if (N / (2.0 * L) < 2.0) throw ValidationError("invalid_grid", "grid must satisfy N/(2L) >= 2");
}

double SpectralGrid::dx() const { return 2.0 * kPi * L / N; }
double SpectralGrid::cell_area_space() const { return dx() * dx(); }
double SpectralGrid::torus_area() const { return 4.0 * kPi * kPi * L * L; }

bool SpectralGrid::resolves(int k) const { return std::ldexp(1.0, k - 2) >= 2.0 / L; }

bool SpectralGrid::resolves_cutoff(int M) const { return 1.5 * std::ldexp(1.0, M) >= 2.0 / L; }

int SpectralGrid::min_resolvable_k() const {
    int k = 0;
    while (resolves(k - 1)) --k;
    return k;
}

Field::Field(const SpectralGrid& g, Rep r) : grid(g), rep(r), values(g.size(), cd(0.0, 0.0)) {}

Field to_frequency(const Field& f) {
    if (f.rep != Rep::space) throw ValidationError("wrong_representation", "to_frequency expects a space field");
    Field out = f;
    execute(plans_for(f.grid.N).fwd, out.values);
    kernels::scale(out.values.data(), out.values.size(), f.grid.cell_area_space() / (2.0 * kPi));
    out.rep = Rep::frequency;
    return out;
}

Field to_space(const Field& f) {
    if (f.rep != Rep::frequency) throw ValidationError("wrong_representation", "to_space expects a frequency field");
    Field out = f;
    execute(plans_for(f.grid.N).bwd, out.values);
    kernels::scale(out.values.data(), out.values.size(), f.grid.cell_area_freq() / (2.0 * kPi));
    out.rep = Rep::space;
    return out;
}

void to_frequency_inplace(Field& f) {
    if (f.rep != Rep::space) throw ValidationError("wrong_representation", "to_frequency expects a space field");
    execute(plans_for(f.grid.N).fwd, f.values);
    kernels::scale(f.values.data(), f.values.size(), f.grid.cell_area_space() / (2.0 * kPi));
    f.rep = Rep::frequency;
}

void to_space_inplace(Field& f) {
    if (f.rep != Rep::frequency) throw ValidationError("wrong_representation", "to_space expects a frequency field");
    execute(plans_for(f.grid.N).bwd, f.values);
    kernels::scale(f.values.data(), f.values.size(), f.grid.cell_area_freq() / (2.0 * kPi));
    f.rep = Rep::space;
}

Field as_frequency(const Field& f) { return f.rep == Rep::frequency ? f : to_frequency(f); }
Field as_space(const Field& f) { return f.rep == Rep::space ? f : to_space(f); }

std::vector<double> symbol_table(const SpectralGrid& g, const std::function<double(const Vec2&)>& s) {
    std::vector<double> out(g.size());
    const long n = static_cast<long>(g.size());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) out[i] = s(g.xi(static_cast<std::size_t>(i)));
    return out;
}

std::vector<double> h_table(const DispersionProfile& p, const SpectralGrid& g) {
    return symbol_table(g, [&p](const Vec2& xi) { return h_symbol(p, xi); });
}

Field propagate_with(const std::vector<double>& h, const Field& f, double t) {
    Field in = as_frequency(f);
    Field out(in.grid, Rep::frequency);
    kernels::apply_phase(out.values.data(), in.values.data(), h.data(), t, in.values.size());
    return f.rep == Rep::space ? to_space(out) : out;
}

Field propagate(const DispersionProfile& p, const Field& f, double t) {
    return propagate_with(h_table(p, f.grid), f, t);
}

double lp_norm(const Field& f, double p) {
    if (!(p >= 1.0)) throw ValidationError("invalid_exponent", "lp_norm needs p >= 1");
    const Field s = as_space(f);
    const double sum = kernels::sum_abs_pow(s.values.data(), s.values.size(), p);
    return std::pow(sum * f.grid.cell_area_space(), 1.0 / p);
}

double l2_norm_frequency(const Field& f) {
    const Field s = as_frequency(f);
    const double sum = kernels::sum_abs_pow(s.values.data(), s.values.size(), 2.0);
    return std::sqrt(sum * f.grid.cell_area_freq());
}

double l2_distance(const Field& a, const Field& b) {
    if (!(a.grid == b.grid)) throw ValidationError("grid_mismatch", "fields live on different grids");
    if (a.rep != b.rep) return l2_distance(as_frequency(a), as_frequency(b));
    const double area = a.rep == Rep::space ? a.grid.cell_area_space() : a.grid.cell_area_freq();
    return std::sqrt(kernels::sum_sq_diff(a.values.data(), b.values.data(), a.values.size()) * area);
}

} // namespace degenlab
