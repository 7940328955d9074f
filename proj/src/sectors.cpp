#include "degenlab/error.hpp"
#include "degenlab/estimates.hpp"
#include "degenlab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace degenlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

int cyclic(int a, int b, int n) {
    const int d = ((a - b) % n + n) % n;
    return std::min(d, n - d);
}

bool indicator_partition(const SpectralGrid& g, const std::vector<SymbolSpec>& parts) {
    const long n = static_cast<long>(g.size());
    bool ok = true;
#pragma omp parallel for schedule(static) reduction(&& : ok)
    for (long idx = 1; idx < n; ++idx) { // idx 0 is the origin
        const Vec2 xi = g.xi(static_cast<std::size_t>(idx));
        double s = 0.0;
        for (const auto& p : parts) s += p(xi);
        ok = ok && s == 1.0;
    }
    return ok;
}

} // namespace

SectorReport sector_decomposition_check(int k, int m, int n_sectors, const SpectralGrid& grid, std::uint64_t seed) {
    grid.validate();
    if (k > -1) throw ValidationError("invalid_shell", "sector check needs k <= -1");
    if (m > -1 || m < -12) throw ValidationError("invalid_sector", "sector level m must lie in [-12, -1]");
    SectorReport rep;
    rep.k = k;
    rep.m = m;
    const int N = n_sectors > 0 ? n_sectors : static_cast<int>(std::lround(8.0 * std::exp2(-0.5 * k)));
    rep.n_sectors = N;
    rep.N = grid.N;
    rep.lattice_points = static_cast<long>(grid.size()) - 1;

    std::vector<SymbolSpec> qs, ts;
    for (int j = 0; j < (1 << -m); ++j) qs.push_back(SymbolSpec::q(m, j));
    for (int i = 0; i < N; ++i) ts.push_back(SymbolSpec::t(N, i));
    rep.q_partition = indicator_partition(grid, qs);
    rep.t_partition = indicator_partition(grid, ts);

    // R sub-shells at scale 2^(k-2): supports of R_a f and R_b g never share a lattice point
    {
        Rng rng(stream_seed(seed, 0x52));
        std::vector<cd> f(grid.size()), g(grid.size());
        for (auto& v : f) v = rng.complex_normal();
        for (auto& v : g) v = rng.complex_normal();
        const int scale = k - 2;
        std::vector<std::vector<double>> tabs;
        for (int a = -4; a < 4; ++a) tabs.push_back(symbol_table(grid, SymbolSpec::r_sub(scale, a)));
        bool ok = true;
        for (std::size_t a = 0; a < tabs.size(); ++a)
            for (std::size_t b = 0; b < tabs.size(); ++b) {
                if (a == b) continue;
                double s = 0.0;
                for (std::size_t q = 0; q < f.size(); ++q) s += std::abs(tabs[a][q] * f[q]) * std::abs(tabs[b][q] * g[q]);
                ok = ok && s == 0.0;
            }
        rep.r_orthogonal = ok;
    }

    // Pairing scan. Low shells k_j < k - 10 fill 0 < ||xi|-1| < 2^(k-9); sector windows
    // O_i: 2 pi (i - 1/3)/N < arg < 2 pi (i + 4/3)/N. Rotation equivariance fixes i1 = 0.
    const double low = std::ldexp(1.0, k - 9);
    const double s_vals[5] = {-0.9, -0.45, 0.0, 0.45, 0.9};
    constexpr int n_ang = 9;
    struct Polar {
        double r, a;
    };
    std::vector<Polar> tmpl;
    for (double s : s_vals)
        for (int q = 0; q < n_ang; ++q)
            tmpl.push_back({1.0 + s * low, kTwoPi / N * (-1.0 / 3.0 + (5.0 / 3.0) * (q + 0.5) / n_ang)});
    auto points = [&](int i) {
        std::vector<Vec2> out;
        for (const auto& t : tmpl) {
            const double a = t.a + kTwoPi * i / N;
            out.push_back({t.r * std::cos(a), t.r * std::sin(a)});
        }
        return out;
    };
    std::vector<std::vector<Vec2>> pts(N);
    for (int i = 0; i < N; ++i) pts[i] = points(i);

    const double lo = std::ldexp(1.0, k - 2), hi = std::ldexp(1.0, k + 2);
    // hits[(i2 * N + i3) * N + i]
    std::vector<char> hits(static_cast<std::size_t>(N) * N * N, 0);
#pragma omp parallel for schedule(dynamic)
    for (int i2 = 0; i2 < N; ++i2)
        for (int i3 = 0; i3 < N; ++i3) {
            char* row = &hits[(static_cast<std::size_t>(i2) * N + i3) * N];
            for (const Vec2& x1 : pts[0])
                for (const Vec2& x3 : pts[i3])
                    for (const Vec2& x2 : pts[i2]) {
                        const double zx = x1[0] + x3[0] - x2[0], zy = x1[1] + x3[1] - x2[1];
                        const double rr = std::abs(std::hypot(zx, zy) - 1.0);
                        if (!(rr > lo && rr < hi)) continue;
                        const double x = polar_angle({zx, zy}) * N / kTwoPi;
                        // i - 1/3 < x < i + 4/3, taken cyclically
                        for (int i = static_cast<int>(std::floor(x - 4.0 / 3.0)); i <= static_cast<int>(std::ceil(x + 1.0 / 3.0)); ++i)
                            if (x > i - 1.0 / 3.0 && x < i + 4.0 / 3.0) row[((i % N) + N) % N] = 1;
                    }
        }
    for (int i2 = 0; i2 < N; ++i2)
        for (int i3 = 0; i3 < N; ++i3)
            for (int i = 0; i < N; ++i) {
                if (!hits[(static_cast<std::size_t>(i2) * N + i3) * N + i]) continue;
                ++rep.quadruples;
                rep.d_min = std::max(rep.d_min, std::min(cyclic(0, i2, N), cyclic(0, i, N)));
                const int p1 = std::max(cyclic(0, i2, N), cyclic(i3, i, N));
                const int p2 = std::max(cyclic(0, i, N), cyclic(i3, i2, N));
                rep.d_pair = std::max(rep.d_pair, std::min(p1, p2));
            }
    return rep;
}

} // namespace degenlab
