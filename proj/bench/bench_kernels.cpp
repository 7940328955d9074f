#include "degenlab/kernels.hpp"
#include "degenlab/rng.hpp"
#include "degenlab/solver.hpp"

#include <benchmark/benchmark.h>

#include <vector>

using namespace degenlab;
namespace kn = degenlab::kernels;

namespace {

std::vector<kn::cd> data(std::size_t n) {
    Rng rng(1);
    std::vector<kn::cd> v(n);
    for (auto& z : v) z = rng.complex_normal();
    return v;
}

std::vector<double> reals(std::size_t n) {
    Rng rng(2);
    std::vector<double> v(n);
    for (auto& x : v) x = rng.uniform(-1, 1);
    return v;
}

template <bool Serial>
void BM_apply_phase(benchmark::State& st) {
    const std::size_t n = st.range(0);
    const auto in = data(n);
    const auto h = reals(n);
    std::vector<kn::cd> out(n);
    for (auto _ : st) {
        if constexpr (Serial)
            kn::serial::apply_phase(out.data(), in.data(), h.data(), 3.0, n);
        else
            kn::apply_phase(out.data(), in.data(), h.data(), 3.0, n);
        benchmark::DoNotOptimize(out.data());
    }
    st.SetItemsProcessed(st.iterations() * n);
}

template <bool Serial>
void BM_sum_abs_pow(benchmark::State& st) {
    const std::size_t n = st.range(0);
    const auto v = data(n);
    for (auto _ : st) {
        const double s = Serial ? kn::serial::sum_abs_pow(v.data(), n, 4.0) : kn::sum_abs_pow(v.data(), n, 4.0);
        benchmark::DoNotOptimize(s);
    }
    st.SetItemsProcessed(st.iterations() * n);
}

template <bool Serial>
void BM_radial_synthesis(benchmark::State& st) {
    const std::size_t nr = 2048, np = 256;
    std::vector<double> r(nr), c(nr, 1e-3), g(nr), rho(np), times;
    for (std::size_t i = 0; i < nr; ++i) {
        r[i] = 0.9 + 0.2 * i / nr;
        g[i] = (r[i] - 1) * (r[i] - 1);
    }
    for (std::size_t b = 0; b < np; ++b) rho[b] = 0.25 * b;
    for (int a = 0; a < st.range(0); ++a) times.push_back(0.1 * a);
    std::vector<double> B;
    kn::bessel_table(r, c, rho, B);
    std::vector<kn::cd> out;
    for (auto _ : st) {
        if constexpr (Serial)
            kn::serial::radial_synthesis(times, g, B, np, out);
        else
            kn::radial_synthesis(times, g, B, np, out);
        benchmark::DoNotOptimize(out.data());
    }
}

void BM_nonlinearity(benchmark::State& st) {
    SolverConfig c;
    c.profile = DispersionProfile::model(1, 0.6);
    c.grid = {static_cast<int>(st.range(0)), st.range(0) / 8.0};
    c.M = -5;
    const Field u = solver_datum(c, 1.0, 3);
    for (auto _ : st) {
        Field w = nonlinearity(c, u);
        benchmark::DoNotOptimize(w.values.data());
    }
}

} // namespace

BENCHMARK(BM_apply_phase<true>)->Name("apply_phase/serial")->Arg(1 << 18)->Arg(1 << 20);
BENCHMARK(BM_apply_phase<false>)->Name("apply_phase/omp")->Arg(1 << 18)->Arg(1 << 20);
BENCHMARK(BM_sum_abs_pow<true>)->Name("sum_abs_pow/serial")->Arg(1 << 20);
BENCHMARK(BM_sum_abs_pow<false>)->Name("sum_abs_pow/omp")->Arg(1 << 20);
BENCHMARK(BM_radial_synthesis<true>)->Name("radial_synthesis/serial")->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_radial_synthesis<false>)->Name("radial_synthesis/omp")->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_nonlinearity)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
