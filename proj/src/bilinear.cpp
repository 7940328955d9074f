#include "degenlab/error.hpp"
#include "degenlab/estimates.hpp"
#include "degenlab/radial.hpp"
#include "degenlab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

namespace degenlab {

namespace {

double gamma1_max(const DispersionProfile& p, double lo, double hi) {
    double m = 0.0;
    for (int i = 0; i <= 200; ++i) m = std::max(m, std::abs(gamma_jet(p, lo + (hi - lo) * i / 200).g1));
    return m;
}

// Radial bump pair: u = P_{<=k1} bump, v = P_{k2} bump, both unit L2.
double radial_pair(const SweepConfig& cfg, int k1, int k2, bool conj_second) {
    const double w1 = std::ldexp(1.0, k1), w2 = std::ldexp(1.0, k2);
    const double lo1 = 1.0 - 0.75 * w1, hi1 = 1.0 + 0.75 * w1, lo2 = 1.0 - 0.75 * w2, hi2 = 1.0 + 0.75 * w2;
    RadialWindow win;
    win.T = cfg.T;
    win.dt = cfg.dt;
    win.drho = cfg.drho;
    // the product lives where the more localized wave v does
    win.rho_max = cfg.T * gamma1_max(cfg.profile, std::min(lo1, lo2), std::max(hi1, hi2)) + 16.0 / w2 + 10.0;
    const RadialWave u =
        make_radial_wave(cfg.profile, [k1](double r) { return p_leq_radial(k1, r); }, lo1, hi1, cfg.T, win.rho_max);
    const RadialWave v =
        make_radial_wave(cfg.profile, [k2](double r) { return p_shell_radial(k2, r); }, lo2, hi2, cfg.T, win.rho_max);
    return radial_bilinear_norm(u, v, win, conj_second);
}

struct PairNorm {
    double norm = 0;
    std::uint64_t seed = 0;
};

// Worst case over repetitions for random data; single run otherwise.
PairNorm pair_norm(const SweepConfig& cfg, int k1, int k2, bool conj_second, std::vector<BilinearRow>* rows,
                   const std::string& variant) {
    const int beta = cfg.profile.beta;
    auto ratio = [&](double n) { return n * std::exp2(beta * k2 / 4.0) * std::exp2((k2 - k1) / 4.0); };
    PairNorm best;
    if (cfg.backend == Backend::radial) {
        best.norm = radial_pair(cfg, k1, k2, conj_second);
        best.seed = cfg.seed;
        rows->push_back({beta, k1, k2, k2 - k1, best.norm, ratio(best.norm), cfg.seed, variant});
        return best;
    }
    const int reps = cfg.recipe == DataRecipe::random ? cfg.repetitions : 1;
    for (int r = 0; r < reps; ++r) {
        const std::uint64_t base = static_cast<std::uint64_t>(((k1 + 1024) * 4096 + (k2 + 1024)) * 64 + r);
        const std::uint64_t su = stream_seed(cfg.seed, 2 * base), sv = stream_seed(cfg.seed, 2 * base + 1);
        const Field u0 = shell_datum(cfg.grid, SymbolSpec::chi_leq(k1), cfg.recipe, su);
        const Field v0 = shell_datum(cfg.grid, SymbolSpec::p(k2), cfg.recipe, sv);
        const double n = grid_bilinear_norm(cfg.profile, u0, v0, cfg.T, cfg.dt, conj_second);
        rows->push_back({beta, k1, k2, k2 - k1, n, ratio(n), su, variant});
        if (n > best.norm) best = {n, su};
    }
    return best;
}

std::optional<FitResult> grouped_fit(const std::map<int, std::vector<std::pair<double, double>>>& groups) {
    const std::vector<std::pair<double, double>>* pick = nullptr;
    for (const auto& [key, pts] : groups)
        if (pts.size() >= 3 && (!pick || pts.size() > pick->size())) pick = &pts;
    if (!pick) return std::nullopt;
    std::vector<double> x, y;
    for (const auto& [a, b] : *pick) {
        x.push_back(a);
        y.push_back(b);
    }
    return least_squares(x, y);
}

} // namespace

double grid_bilinear_norm(const DispersionProfile& p, const Field& u0, const Field& v0, double T, double dt,
                          bool conj_second) {
    if (!(u0.grid == v0.grid)) throw ValidationError("grid_mismatch", "bilinear data live on different grids");
    if (!(T > 0) || !(dt > 0)) throw ValidationError("invalid_window", "bilinear window needs T, dt > 0");
    const Field fu = as_frequency(u0), fv = as_frequency(v0);
    const std::vector<double> h = h_table(p, fu.grid);
    const long n = std::lround(2.0 * T / dt);
    const double area = fu.grid.cell_area_space();
    double total = 0.0;
    for (long i = 0; i <= n; ++i) {
        const double t = -T + i * dt, w = (i == 0 || i == n) ? 0.5 * dt : dt;
        const Field su = to_space(propagate_with(h, fu, t));
        const Field sv = to_space(propagate_with(h, fv, t));
        double s = 0.0;
        for (std::size_t q = 0; q < su.values.size(); ++q) {
            const cd b = conj_second ? std::conj(sv.values[q]) : sv.values[q];
            s += std::norm(su.values[q] * b);
        }
        total += w * s * area;
    }
    if (!std::isfinite(total)) throw NumericalError("norm_overflow", "bilinear norm is not finite");
    return std::sqrt(total);
}

BilinearResult bilinear_l2(const SweepConfig& cfg, const BilinearOptions& opt) {
    cfg.validate();
    if (cfg.k_pairs.empty()) throw ValidationError("invalid_sweep", "bilinear sweep needs at least one (k1, k2) pair");
    BilinearResult res;
    std::vector<double> sep;
    std::map<int, std::vector<std::pair<double, double>>> by_k1, by_k2;
    for (const auto& [k1, k2] : cfg.k_pairs) {
        if (k2 - k1 < 10) {
            std::ostringstream os;
            os << "gap k2-k1=" << (k2 - k1) << " below 10 at (" << k1 << "," << k2 << ")";
            res.warnings.push_back(os.str());
        }
        const PairNorm s = pair_norm(cfg, k1, k2, false, &res.rows, "separated");
        const double r_sep = s.norm * std::exp2(cfg.profile.beta * k2 / 4.0) * std::exp2((k2 - k1) / 4.0);
        sep.push_back(r_sep);
        by_k1[k1].push_back({double(k2), std::log2(s.norm)});
        by_k2[k2].push_back({double(k1), std::log2(s.norm)});
        if (opt.degenerate_control && k1 != k2) {
            const PairNorm d = pair_norm(cfg, k2, k2, false, &res.rows, "degenerate");
            res.degenerate_factor.push_back(d.norm * std::exp2(cfg.profile.beta * k2 / 4.0) / r_sep);
        }
        if (opt.conjugate_variant) {
            const PairNorm c = pair_norm(cfg, k1, k2, true, &res.rows, "conjugate");
            const double r_c = c.norm * std::exp2(cfg.profile.beta * k2 / 4.0) * std::exp2((k2 - k1) / 4.0);
            res.conjugate_change = std::max(res.conjugate_change, std::max(r_c / r_sep, r_sep / r_c));
        }
    }
    res.band = *std::max_element(sep.begin(), sep.end()) / *std::min_element(sep.begin(), sep.end());
    res.fit_k2 = grouped_fit(by_k1);
    res.fit_k1 = grouped_fit(by_k2);
    return res;
}

// ---------------------------------------------------------------------------
// generic bound

namespace {

struct Sample {
    std::vector<Vec2> pts;
    PolarBox box;
};

PolarBox finite_box(const SymbolSpec& s) {
    const std::optional<PolarBox> b = s.support_box();
    if (!b) throw ValidationError("unbounded_sector", "no polar support box for " + s.describe());
    if (!std::isfinite(b->r_hi) || !(b->r_hi > b->r_lo))
        throw ValidationError("unbounded_sector", "sector " + s.describe() + " is radially unbounded");
    return *b;
}

// Midpoint polar lattice of about n points inside the support; depends on the box only.
Sample sample_sector(const SymbolSpec& s, long n) {
    Sample out;
    out.box = finite_box(s);
    const PolarBox& b = out.box;
    const double span_th = b.th_hi - b.th_lo, span_r = b.r_hi - b.r_lo;
    const double mid_r = 0.5 * (b.r_lo + b.r_hi);
    // aspect ratio of the box in arc length
    const double aspect = std::max(1e-3, span_th * mid_r / span_r);
    long nr = std::max(2L, std::lround(std::sqrt(n / aspect)));
    long nth = std::max(2L, (n + nr - 1) / nr);
    for (long a = 0; a < nr; ++a)
        for (long q = 0; q < nth; ++q) {
            const double r = b.r_lo + span_r * (a + 0.5) / nr, th = b.th_lo + span_th * (q + 0.5) / nth;
            const Vec2 x{r * std::cos(th), r * std::sin(th)};
            if (s(x) != 0.0) out.pts.push_back(x);
        }
    if (out.pts.empty()) throw ValidationError("empty_sector", "no sample points inside " + s.describe());
    return out;
}

std::string fmt(const Vec2& v) {
    std::ostringstream os;
    os.precision(10);
    os << "(" << v[0] << "," << v[1] << ")";
    return os.str();
}

// Length of {xi in box: F(xi) = 0, accept(xi)} by marching squares in polar coordinates.
template <class F, class A>
double curve_length(const PolarBox& b, int n, F&& f, A&& accept) {
    std::vector<double> val(static_cast<std::size_t>(n + 1) * (n + 1));
    std::vector<Vec2> pos(val.size());
    for (int a = 0; a <= n; ++a)
        for (int q = 0; q <= n; ++q) {
            const double r = b.r_lo + (b.r_hi - b.r_lo) * a / n, th = b.th_lo + (b.th_hi - b.th_lo) * q / n;
            const Vec2 x{r * std::cos(th), r * std::sin(th)};
            pos[a * (n + 1) + q] = x;
            val[a * (n + 1) + q] = f(x);
        }
    double total = 0.0;
    for (int a = 0; a < n; ++a)
        for (int q = 0; q < n; ++q) {
            const std::size_t c[4] = {static_cast<std::size_t>(a * (n + 1) + q), static_cast<std::size_t>(a * (n + 1) + q + 1),
                                      static_cast<std::size_t>((a + 1) * (n + 1) + q + 1),
                                      static_cast<std::size_t>((a + 1) * (n + 1) + q)};
            Vec2 hit[4];
            int nh = 0;
            for (int e = 0; e < 4; ++e) {
                const double f0 = val[c[e]], f1 = val[c[(e + 1) % 4]];
                if ((f0 < 0) == (f1 < 0)) continue;
                const double s = f0 / (f0 - f1);
                const Vec2& p0 = pos[c[e]];
                const Vec2& p1 = pos[c[(e + 1) % 4]];
                hit[nh++] = {p0[0] + s * (p1[0] - p0[0]), p0[1] + s * (p1[1] - p0[1])};
            }
            for (int s = 0; s + 1 < nh; s += 2) {
                const Vec2 m{0.5 * (hit[s][0] + hit[s + 1][0]), 0.5 * (hit[s][1] + hit[s + 1][1])};
                if (accept(m)) total += std::hypot(hit[s][0] - hit[s + 1][0], hit[s][1] - hit[s + 1][1]);
            }
        }
    return total;
}

} // namespace

GenericBound generic_bilinear_bound(const DispersionProfile& p, const SymbolSpec& sector1, const SymbolSpec& sector2,
                                    long samples, std::uint64_t seed, int draws, int march) {
    p.validate();
    if (samples < 10000) throw ValidationError("invalid_samples", "generic bound needs at least 1e4 sample pairs");
    if (draws < 1 || march < 8) throw ValidationError("invalid_samples", "generic bound needs draws >= 1, march >= 8");
    const long per = static_cast<long>(std::ceil(std::sqrt(static_cast<double>(samples))));
    const Sample s1 = sample_sector(sector1, per), s2 = sample_sector(sector2, per);

    // overlapping supports give the trivial witness xi = eta
    for (const Vec2& x : s1.pts)
        if (sector2(x) != 0.0)
            throw NumericalError("transversality_failure",
                                 "theta = 0: sectors overlap, witness xi = eta = " + fmt(x));

    GenericBound out;
    std::vector<Vec2> g1(s1.pts.size()), g2(s2.pts.size());
    for (std::size_t i = 0; i < g1.size(); ++i) g1[i] = grad_h(p, s1.pts[i]);
    for (std::size_t i = 0; i < g2.size(); ++i) g2[i] = grad_h(p, s2.pts[i]);
    double theta = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < g1.size(); ++i)
        for (std::size_t j = 0; j < g2.size(); ++j) {
            const double d = std::hypot(g1[i][0] - g2[j][0], g1[i][1] - g2[j][1]);
            if (d < theta) {
                theta = d;
                out.theta_xi = s1.pts[i];
                out.theta_eta = s2.pts[j];
            }
        }
    out.pairs = static_cast<long>(g1.size() * g2.size());
    if (!(theta > 0.0))
        throw NumericalError("transversality_failure",
                             "theta = 0 at xi = " + fmt(out.theta_xi) + ", eta = " + fmt(out.theta_eta));
    out.theta = theta;

    Rng rng(stream_seed(seed, 0x6c));
    double lmax = 0.0;
    for (int d = 0; d < draws; ++d) {
        const Vec2& x = s1.pts[static_cast<std::size_t>(rng.uniform() * s1.pts.size())];
        const Vec2& y = s2.pts[static_cast<std::size_t>(rng.uniform() * s2.pts.size())];
        const Vec2 xi0{x[0] + y[0], x[1] + y[1]};
        const double tau0 = h_symbol(p, x) + h_symbol(p, y);
        const double len = curve_length(
            s1.box, march,
            [&](const Vec2& z) { return h_symbol(p, z) + h_symbol(p, Vec2{xi0[0] - z[0], xi0[1] - z[1]}) - tau0; },
            [&](const Vec2& z) { return sector1(z) != 0.0 && sector2(Vec2{xi0[0] - z[0], xi0[1] - z[1]}) != 0.0; });
        lmax = std::max(lmax, len);
    }
    out.draws = draws;
    out.l = lmax;
    out.bound = std::sqrt(lmax / theta);
    out.normalized = out.bound / std::sqrt(2.0 * std::numbers::pi);
    return out;
}

} // namespace degenlab
