#include "degenlab/solver.hpp"

#include "degenlab/error.hpp"
#include "degenlab/estimates.hpp"
#include "degenlab/kernels.hpp"
#include "degenlab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace degenlab {

std::string to_string(Scheme s) { return s == Scheme::interaction_rk4 ? "interaction_rk4" : "picard"; }

Scheme scheme_from_string(const std::string& s) {
    if (s == "interaction_rk4") return Scheme::interaction_rk4;
    if (s == "picard") return Scheme::picard;
    throw ValidationError("invalid_scheme", "unknown scheme '" + s + "'");
}

namespace {

using Vec = std::vector<cd>;

double sup_abs_a(const DispersionProfile& p, int M) {
    const double w = 0.75 * std::ldexp(1.0, M - 1);
    double m = 0.0;
    for (int i = 0; i <= 400; ++i) m = std::max(m, null_symbol_radial(p, M, 1.0 - w + 2.0 * w * i / 400));
    return m;
}

// Tables and scratch space shared by every right-hand-side evaluation.
struct Ctx {
    SolverConfig cfg;
    std::shared_ptr<const ShellSupport> sp; // supp P_{<=M}
    std::vector<double> P, A, h;
    Field scratch;

    explicit Ctx(const SolverConfig& c) : cfg(c), scratch(c.grid, Rep::frequency) {
        sp = ShellSupport::where_nonzero(c.grid, SymbolSpec::chi_leq(c.M));
        if (sp->size() == 0) throw ValidationError("empty_support", "supp P_{<=M} has no lattice points");
        P = sp->table(SymbolSpec::chi_leq(c.M));
        A = sp->table([&](const Vec2& xi) { return null_symbol(c.profile, c.M, xi); });
        h = sp->h(c.profile);
    }

    // out = A FFT(|w|^2 w), w = IFFT(P u); u, out on the support, u-frame
    void nonlin(const Vec& u, Vec& out) {
        std::fill(scratch.values.begin(), scratch.values.end(), cd(0.0, 0.0));
        scratch.rep = Rep::frequency;
        for (std::size_t i = 0; i < u.size(); ++i) scratch.values[sp->index[i]] = P[i] * u[i];
        to_space_inplace(scratch);
        kernels::cubic(scratch.values.data(), scratch.values.size());
        to_frequency_inplace(scratch);
        out.resize(u.size());
        for (std::size_t i = 0; i < u.size(); ++i) out[i] = A[i] * scratch.values[sp->index[i]];
    }

    // interaction picture: c e^{-ith} N(e^{ith} v)
    void rhs(double t, const Vec& v, Vec& out) {
        Vec u(v.size());
        kernels::apply_phase(u.data(), v.data(), h.data(), t, v.size());
        nonlin(u, out);
        kernels::apply_phase(out.data(), out.data(), h.data(), -t, out.size());
        const cd c = cfg.coupling;
        for (auto& x : out) x *= c;
    }

    double norm(const Vec& v) const {
        return std::sqrt(kernels::sum_abs_pow(v.data(), v.size(), 2.0) * cfg.grid.cell_area_freq());
    }
    double dist(const Vec& a, const Vec& b) const {
        return std::sqrt(kernels::sum_sq_diff(a.data(), b.data(), a.size()) * cfg.grid.cell_area_freq());
    }

    ShellField to_shell(const Vec& v, double t) const {
        ShellField f(sp);
        kernels::apply_phase(f.c.data(), v.data(), h.data(), t, v.size());
        return f;
    }
};

Vec restrict_to(const Ctx& ctx, const Field& u0f) {
    Vec v(ctx.sp->size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = u0f.values[ctx.sp->index[i]];
    return v;
}

void check_data_size(const SolverConfig& cfg, const Field& u0) {
    if (!(u0.grid == cfg.grid)) throw ValidationError("grid_mismatch", "datum and solver grids differ");
    const double n = l2_norm_frequency(u0);
    if (n > cfg.epsilon * (1.0 + 1e-12))
        throw ValidationError("data_too_large", "||u0||_2 = " + std::to_string(n) + " exceeds epsilon");
}

} // namespace

void SolverConfig::validate() const {
    profile.validate();
    grid.validate();
    check_cutoff_level(profile, M);
    if (!grid.resolves_cutoff(M))
        throw ValidationError("unresolvable_shell", "cutoff M=" + std::to_string(M) + " is not resolvable on grid N=" +
                                                        std::to_string(grid.N) + ", L=" + std::to_string(grid.L));
    if (!(dt > 0)) throw ValidationError("invalid_step", "dt must be positive");
    if (!(T_final > 0)) throw ValidationError("invalid_step", "T_final must be positive");
    if (stride < 1) throw ValidationError("invalid_step", "stride must be >= 1");
    if (!(epsilon > 0)) throw ValidationError("invalid_epsilon", "epsilon must be positive");
    if (epsilon0 > 0 && epsilon > epsilon0) throw ValidationError("invalid_epsilon", "epsilon exceeds the configured eps0");
    if (!(dt * lipschitz_bound(*this) < 1.0))
        throw ValidationError("step_too_large", "dt times the nonlinear Lipschitz bound must be < 1");
}

double lipschitz_bound(const SolverConfig& cfg) {
    long count = 0;
    for (std::size_t i = 0; i < cfg.grid.size(); ++i)
        if (std::abs(std::hypot(cfg.grid.xi(i)[0], cfg.grid.xi(i)[1]) - 1.0) < 0.75 * std::ldexp(1.0, cfg.M)) ++count;
    const double B = std::sqrt(static_cast<double>(count)) / cfg.grid.L / (2.0 * std::numbers::pi);
    return 3.0 * std::abs(cfg.coupling) * sup_abs_a(cfg.profile, cfg.M) * B * B * cfg.epsilon * cfg.epsilon;
}

Field nonlinearity(const SolverConfig& cfg, const Field& u) {
    cfg.profile.validate();
    check_cutoff_level(cfg.profile, cfg.M);
    if (!(u.grid == cfg.grid)) throw ValidationError("grid_mismatch", "field and solver grids differ");
    Field w = as_frequency(u);
    const std::vector<double> P = symbol_table(cfg.grid, SymbolSpec::chi_leq(cfg.M));
    const std::vector<double> A =
        symbol_table(cfg.grid, std::function<double(const Vec2&)>([&](const Vec2& xi) { return null_symbol(cfg.profile, cfg.M, xi); }));
    kernels::multiply_real(w.values.data(), P.data(), w.values.size());
    to_space_inplace(w);
    kernels::cubic(w.values.data(), w.values.size());
    to_frequency_inplace(w);
    kernels::multiply_real(w.values.data(), A.data(), w.values.size());
    return w;
}

Field Trajectory::at(std::size_t k) const {
    Field f = propagate_with(*h_full, outer, core.times[k]);
    const ShellField& s = core.snapshots[k];
    for (std::size_t i = 0; i < s.c.size(); ++i) f.values[s.support->index[i]] = s.c[i];
    return f;
}

Field solver_datum(const SolverConfig& cfg, double eps, std::uint64_t seed) {
    // Wave packet centred at the origin: P_{<=M} times a smooth random angular profile
    // 1 + 0.3 sum_{m=1..3} c_m e^{i m theta}. Angular smoothness keeps the packet localized,
    // so it disperses on the torus until its front wraps around (t ~ pi L).
    Rng rng(seed);
    cd c[3];
    for (auto& z : c) z = rng.complex_normal();
    const std::vector<double> P = symbol_table(cfg.grid, SymbolSpec::chi_leq(cfg.M));
    Field f(cfg.grid, Rep::frequency);
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        if (P[i] == 0.0) continue;
        const Vec2 xi = cfg.grid.xi(i);
        const double th = std::atan2(xi[1], xi[0]);
        cd a = 1.0;
        for (int m = 0; m < 3; ++m) a += 0.3 * c[m] * std::polar(1.0, (m + 1) * th);
        f.values[i] = a * P[i];
    }
    const double n = l2_norm_frequency(f);
    if (!(n > 0)) throw ValidationError("empty_datum", "supp P_{<=M} has no lattice points on this grid");
    kernels::scale(f.values.data(), f.values.size(), eps / n);
    return f;
}

Trajectory solve(const SolverConfig& cfg, const Field& u0) {
    cfg.validate();
    check_data_size(cfg, u0);
    Ctx ctx(cfg);
    const Field u0f = as_frequency(u0);
    Trajectory tr;
    tr.h_full = std::make_shared<const std::vector<double>>(h_table(cfg.profile, cfg.grid));
    tr.outer = u0f;
    for (std::size_t i : ctx.sp->index) tr.outer.values[i] = 0.0;
    const double outer_n2 = std::pow(l2_norm_frequency(tr.outer), 2);

    Vec v = restrict_to(ctx, u0f);
    const long steps = std::lround(cfg.T_final / cfg.dt);
    const double hs = cfg.backward ? -cfg.dt : cfg.dt;
    std::vector<double> times;
    std::vector<ShellField> snaps;
    times.push_back(0.0);
    snaps.push_back(ctx.to_shell(v, 0.0));
    Vec k1, k2, k3, k4, tmp(v.size());
    for (long n = 0; n < steps; ++n) {
        const double t = n * hs;
        const double before = std::sqrt(outer_n2 + std::pow(ctx.norm(v), 2));
        ctx.rhs(t, v, k1);
        for (std::size_t i = 0; i < v.size(); ++i) tmp[i] = v[i] + 0.5 * hs * k1[i];
        ctx.rhs(t + 0.5 * hs, tmp, k2);
        for (std::size_t i = 0; i < v.size(); ++i) tmp[i] = v[i] + 0.5 * hs * k2[i];
        ctx.rhs(t + 0.5 * hs, tmp, k3);
        for (std::size_t i = 0; i < v.size(); ++i) tmp[i] = v[i] + hs * k3[i];
        ctx.rhs(t + hs, tmp, k4);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] += hs / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        const double after = std::sqrt(outer_n2 + std::pow(ctx.norm(v), 2));
        if (!std::isfinite(after) || after > 1.5 * before)
            throw NumericalError("step_rejected", "||u|| grew by more than 50% in one step at t=" + std::to_string(t));
        if ((n + 1) % cfg.stride == 0 || n + 1 == steps) {
            times.push_back((n + 1) * hs);
            snaps.push_back(ctx.to_shell(v, (n + 1) * hs));
        }
    }
    if (cfg.backward) {
        std::reverse(times.begin(), times.end());
        std::reverse(snaps.begin(), snaps.end());
    }
    for (std::size_t i = 0; i < times.size(); ++i) tr.core.push(times[i], std::move(snaps[i]));
    return tr;
}

PicardResult picard_iterate(const SolverConfig& cfg, const Field& u0, int n_iters, bool allow_divergence) {
    cfg.validate();
    check_data_size(cfg, u0);
    if (n_iters < 2) throw ValidationError("invalid_iterations", "Picard needs at least 2 iterations");
    Ctx ctx(cfg);
    const Vec v0 = restrict_to(ctx, as_frequency(u0));
    const double step = cfg.stride * cfg.dt;
    const long nt = std::lround(cfg.T_final / step);
    std::vector<double> times(nt + 1);
    for (long n = 0; n <= nt; ++n) times[n] = n * step;

    std::vector<Vec> prev(nt + 1, v0), next(nt + 1);
    PicardResult res;
    auto store = [&](const std::vector<Vec>& vs) {
        TimeSeries<ShellField> s;
        for (long n = 0; n <= nt; ++n) s.push(times[n], ctx.to_shell(vs[n], times[n]));
        res.iterates.push_back(std::move(s));
    };
    store(prev);
    const int k_min = std::min(-1, cfg.grid.min_resolvable_k());
    Vec F_prev, F;
    for (int j = 1; j <= n_iters; ++j) {
        // v^(j)(t_n) = v0 + trapezoid of c e^{-ish} N(u^(j-1)(s)) over s_0..s_n
        Vec acc(v0.size(), cd(0.0, 0.0));
        next[0] = v0;
        ctx.rhs(times[0], prev[0], F_prev);
        for (long n = 1; n <= nt; ++n) {
            ctx.rhs(times[n], prev[n], F);
            for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += 0.5 * step * (F_prev[i] + F[i]);
            next[n].resize(v0.size());
            for (std::size_t i = 0; i < acc.size(); ++i) next[n][i] = v0[i] + acc[i];
            std::swap(F_prev, F);
        }
        double dl = 0.0;
        TimeSeries<ShellField> diff;
        for (long n = 0; n <= nt; ++n) {
            dl = std::max(dl, ctx.dist(next[n], prev[n]));
            Vec d(v0.size());
            for (std::size_t i = 0; i < d.size(); ++i) d[i] = next[n][i] - prev[n][i];
            diff.push(times[n], ctx.to_shell(d, times[n]));
        }
        res.diff_linf.push_back(dl);
        res.diff_y0.push_back(y0_norm(cfg.profile, diff, k_min));
        store(next);
        std::swap(prev, next);
    }
    // differences below the round-off level of the iterates are converged; their ratio is noise, report 0
    const double floor_l = 64 * std::numeric_limits<double>::epsilon() * ctx.dist(v0, Vec(v0.size(), cd(0.0, 0.0)));
    const double floor_y = 64 * std::numeric_limits<double>::epsilon() * y0_norm(cfg.profile, res.iterates[0], k_min);
    auto ratio = [](double num, double den, double fl) { return (den > 0 && num > fl) ? num / den : 0.0; };
    res.contracting_half = true;
    for (std::size_t j = 0; j + 1 < res.diff_linf.size(); ++j) {
        const double rl = ratio(res.diff_linf[j + 1], res.diff_linf[j], floor_l);
        const double ry = ratio(res.diff_y0[j + 1], res.diff_y0[j], floor_y);
        res.ratio_linf.push_back(rl);
        res.ratio_y0.push_back(ry);
        if (rl > 0.5 || ry > 0.5) res.contracting_half = false;
        if (rl > 1.0 || ry > 1.0) res.diverged = true;
    }
    if (res.diverged && !allow_divergence)
        throw NumericalError("divergence", "Picard ratio exceeds 1; data too large for contraction");
    return res;
}

Eps0Result bisect_eps0(const SolverConfig& cfg, const Field& unit_datum, int n_iters, double eps_lo, double eps_hi,
                       int steps) {
    if (!(eps_lo > 0) || !(eps_hi > eps_lo)) throw ValidationError("invalid_epsilon", "bisection needs 0 < eps_lo < eps_hi");
    Eps0Result out;
    auto pass = [&](double eps) {
        SolverConfig c = cfg;
        c.epsilon = eps;
        c.epsilon0 = 0.0;
        Field u = unit_datum;
        const double n = l2_norm_frequency(u);
        kernels::scale(u.values.data(), u.values.size(), eps / n * (1.0 - 1e-14));
        bool ok = false;
        try {
            const PicardResult r = picard_iterate(c, u, n_iters, true);
            ok = r.contracting_half && !r.diverged;
        } catch (const NumericalError&) {
            ok = false;
        } catch (const ValidationError& e) {
            if (e.kind() != "step_too_large") throw;
            ok = false;
        }
        out.history.push_back({eps, ok});
        return ok;
    };
    for (int i = 0; i < 10 && !pass(eps_lo); ++i) eps_lo /= 4.0;
    for (int i = 0; i < 10 && pass(eps_hi); ++i) {
        eps_lo = eps_hi;
        eps_hi *= 4.0;
    }
    for (int s = 0; s < steps; ++s) {
        const double mid = std::sqrt(eps_lo * eps_hi);
        if (pass(mid))
            eps_lo = mid;
        else
            eps_hi = mid;
    }
    out.eps0 = eps_lo;
    return out;
}

ScatterResult scattering_state(const SolverConfig& cfg, const Trajectory& traj, int n_windows) {
    traj.core.validate();
    const double T = traj.core.times.back();
    if (!(T >= 100.0)) throw ValidationError("short_trajectory", "scattering needs a trajectory reaching t >= 100");
    if (n_windows < 2) throw ValidationError("invalid_windows", "scattering needs at least 2 windows");
    ScatterResult res;
    const std::vector<double> h = traj.core.snapshots.front().support->h(cfg.profile);
    std::vector<ShellField> v;
    for (std::size_t k = 0; k < traj.size(); ++k) v.push_back(propagate_with(h, traj.core.snapshots[k], -traj.core.times[k]));
    res.u_plus = traj.outer;
    for (std::size_t i = 0; i < v.back().c.size(); ++i) res.u_plus.values[v.back().support->index[i]] = v.back().c[i];

    for (int m = 0; m < n_windows; ++m) {
        CauchyWindow w{T / std::exp2(m + 1), T / std::exp2(m), 0.0};
        std::vector<std::size_t> in;
        for (std::size_t k = 0; k < traj.size(); ++k)
            if (traj.core.times[k] >= w.t_lo - 1e-12 && traj.core.times[k] <= w.t_hi + 1e-12) in.push_back(k);
        for (std::size_t a = 0; a < in.size(); ++a)
            for (std::size_t b = a + 1; b < in.size(); ++b) w.sup = std::max(w.sup, l2_distance(v[in[a]], v[in[b]]));
        if (in.size() < 2) res.warnings.push_back("window [" + std::to_string(w.t_lo) + "," + std::to_string(w.t_hi) + "] has fewer than 2 snapshots");
        res.windows.push_back(w);
    }
    res.late_sup = res.windows[0].sup;
    res.early_sup = res.windows[1].sup;
    res.cauchy = res.late_sup <= res.early_sup;
    res.monotone = true;
    for (std::size_t m = 0; m + 1 < res.windows.size(); ++m)
        if (res.windows[m].sup > res.windows[m + 1].sup) res.monotone = false;
    if (!res.cauchy) res.warnings.push_back("non-Cauchy: late-window sup exceeds early-window sup");
    return res;
}

MassDrift mass_drift(const SolverConfig& cfg, const Trajectory& traj) {
    traj.core.validate();
    Ctx ctx(cfg);
    const double outer_n2 = std::pow(l2_norm_frequency(traj.outer), 2);
    const std::size_t n = traj.size();
    MassDrift md;
    std::vector<double> n2(n);
    for (std::size_t k = 0; k < n; ++k) {
        const ShellField& s = traj.core.snapshots[k];
        if (s.support->size() != ctx.sp->size()) throw ValidationError("support_mismatch", "trajectory and solver supports differ");
        Vec Nu;
        ctx.nonlin(s.c, Nu);
        double re = 0.0;
        for (std::size_t i = 0; i < Nu.size(); ++i) re += (cfg.coupling * Nu[i] * std::conj(s.c[i])).real();
        MassRow row;
        row.t = traj.core.times[k];
        n2[k] = outer_n2 + std::pow(s.l2(), 2);
        row.norm = std::sqrt(n2[k]);
        row.dnorm2_exact = 2.0 * re * cfg.grid.cell_area_freq();
        row.dnorm2_fd = std::numeric_limits<double>::quiet_NaN();
        md.rows.push_back(row);
    }
    for (std::size_t k = 2; k + 2 < n; ++k) {
        const double hstep = traj.core.times[k + 1] - traj.core.times[k];
        md.rows[k].dnorm2_fd = (-n2[k + 2] + 8.0 * n2[k + 1] - 8.0 * n2[k - 1] + n2[k - 2]) / (12.0 * hstep);
        md.max_mismatch = std::max(md.max_mismatch, std::abs(md.rows[k].dnorm2_fd - md.rows[k].dnorm2_exact));
    }
    md.total_drift = std::abs(md.rows.back().norm - md.rows.front().norm);
    return md;
}

} // namespace degenlab
