#include "degenlab/error.hpp"
#include "degenlab/estimates.hpp"
#include "degenlab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace degenlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kRadialGrid = 64;

struct Geometry {
    double e1, a, b; // Omega1 half-width; Omega2 radii
    Geometry(int k1, int k2)
        : e1(std::ldexp(1.0, k1 + 2)), a(1.0 + std::ldexp(1.0, k2 - 2)), b(1.0 + std::ldexp(1.0, k2 + 2)) {}
};

// |xi - xi0| differs from |e^{i theta} - xi0| by at most ||xi| - 1| < e1
std::vector<char> prescreen(const Vec2& xi0, const Geometry& g, long n) {
    std::vector<char> ok(n, 0);
    const double dth = kTwoPi / n;
    for (long q = 0; q < n; ++q) {
        const double th = q * dth;
        const double d = std::hypot(std::cos(th) - xi0[0], std::sin(th) - xi0[1]);
        ok[q] = d > g.a - g.e1 && d < g.b + g.e1;
    }
    return ok;
}

void check_pair(int k1, int k2) {
    if (k1 >= k2) throw ValidationError("invalid_shell", "resonance curve needs k1 < k2");
    if (k2 > -1) throw ValidationError("invalid_shell", "resonance curve needs k2 <= -1");
}

} // namespace

double ResonanceCurve::max_len() const {
    double m = 0.0;
    for (const auto& iv : intervals) m = std::max(m, iv.length());
    return m;
}

double default_theta_resolution(int k1, int k2) { return std::exp2(0.5 * (k1 - k2)) / 64.0; }

ResonanceCurve resonance_curve(const DispersionProfile& p, double tau0, const Vec2& xi0, int k1, int k2,
                               double theta_res) {
    check_pair(k1, k2);
    if (!(theta_res > 0) || theta_res > 0.1) throw ValidationError("invalid_resolution", "theta resolution must be in (0, 0.1]");
    const Geometry g(k1, k2);
    const long n = static_cast<long>(std::ceil(kTwoPi / theta_res));
    const double dth = kTwoPi / n;
    const std::vector<char> ok = prescreen(xi0, g, n);
    std::vector<char> hit(n, 0);
    ResonanceCurve out;

    const double r_lo = 1.0 - g.e1, dr = 2.0 * g.e1 / kRadialGrid;
    for (long q = 0; q < n; ++q) {
        if (!ok[q]) continue;
        const double c = std::cos(q * dth), s = std::sin(q * dth);
        auto dist = [&](double r) { return std::hypot(r * c - xi0[0], r * s - xi0[1]); };
        auto f = [&](double r) { return gamma_jet(p, dist(r)).g0 + gamma_jet(p, r).g0 - tau0; };
        double f_prev = f(r_lo);
        for (int j = 1; j <= kRadialGrid && !hit[q]; ++j) {
            const double r1 = r_lo + j * dr, f1 = f(r1);
            if ((f_prev < 0) != (f1 < 0)) {
                double lo = r1 - dr, hi = r1, flo = f_prev;
                while (hi - lo > 1e-12) {
                    const double mid = 0.5 * (lo + hi), fm = f(mid);
                    if ((fm < 0) == (flo < 0)) {
                        lo = mid;
                        flo = fm;
                    } else {
                        hi = mid;
                    }
                }
                const double r = 0.5 * (lo + hi);
                if (std::abs(f(r)) > 1e-8 * std::max(1.0, std::abs(tau0))) {
                    ++out.gaps;
                } else {
                    const double d = dist(r);
                    if (std::abs(r - 1.0) < g.e1 && d > g.a && d < g.b) hit[q] = 1;
                }
            }
            f_prev = f1;
        }
    }

    // maximal cyclic runs
    const long first_gap = std::find(hit.begin(), hit.end(), 0) - hit.begin();
    if (first_gap == n) {
        out.intervals.push_back({0.0, kTwoPi});
        return out;
    }
    long q = first_gap;
    for (long step = 0; step < n;) {
        const long idx = (q + step) % n;
        if (!hit[idx]) {
            ++step;
            continue;
        }
        long len = 0;
        while (step < n && hit[(q + step) % n]) {
            ++len;
            ++step;
        }
        out.intervals.push_back({idx * dth, (idx + len) * dth});
    }
    return out;
}

ResonanceSweep resonance_sweep(const DispersionProfile& p, int k1, int k2, int draws, std::uint64_t seed,
                               double theta_res) {
    p.validate();
    check_pair(k1, k2);
    if (draws < 1) throw ValidationError("invalid_samples", "resonance sweep needs draws >= 1");
    if (theta_res <= 0) theta_res = default_theta_resolution(k1, k2);
    const Geometry g(k1, k2);
    const double norm = std::exp2(0.5 * (k1 - k2));
    ResonanceSweep sw;
    sw.rows.resize(draws);
#pragma omp parallel for schedule(dynamic)
    for (int d = 0; d < draws; ++d) {
        Rng rng(stream_seed(seed, static_cast<std::uint64_t>(d)));
        const double r0 = std::exp2(rng.uniform(k2 - 1, 1.0));
        const double th0 = rng.uniform(0.0, kTwoPi);
        const Vec2 xi0{r0 * std::cos(th0), r0 * std::sin(th0)};
        // feasible xi by rejection inside the prescreened arcs
        const long n = static_cast<long>(std::ceil(kTwoPi / theta_res));
        const std::vector<char> ok = prescreen(xi0, g, n);
        std::vector<long> arcs;
        for (long q = 0; q < n; ++q)
            if (ok[q]) arcs.push_back(q);
        double tau0 = 0.0;
        bool found = false;
        for (int tries = 0; tries < 1000000 && !arcs.empty(); ++tries) {
            const long q = arcs[static_cast<std::size_t>(rng.uniform() * arcs.size())];
            const double th = (q + rng.uniform(-0.5, 0.5)) * kTwoPi / n;
            const double r = rng.uniform(1.0 - g.e1, 1.0 + g.e1);
            const Vec2 xi{r * std::cos(th), r * std::sin(th)};
            const Vec2 eta{xi0[0] - xi[0], xi0[1] - xi[1]};
            const double de = std::hypot(eta[0], eta[1]);
            if (de > g.a && de < g.b) {
                tau0 = h_symbol(p, xi) + h_symbol(p, eta);
                found = true;
                break;
            }
        }
        ResonanceRow& row = sw.rows[d];
        row.beta = p.beta;
        row.k1 = k1;
        row.k2 = k2;
        row.xi0_r = r0;
        row.xi0_theta = th0;
        if (!found) continue;
        row.tau0 = tau0;
        const ResonanceCurve c = resonance_curve(p, tau0, xi0, k1, k2, theta_res);
        row.n_components = c.n_components();
        row.max_len = c.max_len();
        row.normalized_len = row.max_len / norm;
        row.gaps = c.gaps;
    }
    for (const auto& r : sw.rows) {
        sw.max_components = std::max(sw.max_components, r.n_components);
        sw.max_normalized_len = std::max(sw.max_normalized_len, r.normalized_len);
    }
    return sw;
}

} // namespace degenlab
