#include "degenlab/runner.hpp"

#include "degenlab/error.hpp"
#include "degenlab/estimates.hpp"
#include "degenlab/io.hpp"
#include "degenlab/oscillatory_kernel.hpp"
#include "degenlab/rng.hpp"
#include "degenlab/solver.hpp"
#include "degenlab/variation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <limits>
#include <tuple>
#include <iomanip>
#include <map>
#include <numbers>
#include <sstream>

namespace degenlab {

namespace fs = std::filesystem;

bool RunReport::pass() const {
    return std::all_of(criteria.begin(), criteria.end(), [](const Criterion& c) { return c.pass; });
}

std::string error_json(const std::string& kind, const std::string& message) {
    Json j;
    j["kind"] = kind;
    j["message"] = message;
    return j.dump();
}

fs::path resolve_output(const ExperimentConfig& cfg, const RunOptions& opt) {
    if (opt.out) return *opt.out;
    if (const char* env = std::getenv("DEGENLAB_OUT"); env && *env) return fs::path(env);
    return fs::path(cfg.output);
}

namespace {

[[noreturn]] void invalid(const std::string& kind, const std::string& msg) { throw ValidationError(kind, msg); }

const SpectralGrid& need_grid(const ExperimentConfig& cfg) {
    if (!cfg.grid) invalid("schema_violation", "command '" + cfg.command + "' needs a grid block");
    return *cfg.grid;
}

void check_resolvable(const ExperimentConfig& cfg, int k, const std::string& where) {
    if (!cfg.grid || cfg.grid->resolves(k)) return;
    std::ostringstream os;
    os << where << ": shell k=" << k << " is not resolvable on grid N=" << cfg.grid->N << ", L=" << cfg.grid->L
       << " (min k " << cfg.grid->min_resolvable_k() << ")";
    invalid("unresolvable_shell", os.str());
}

Criterion at_most(const std::string& name, double v, double lim) {
    std::ostringstream os;
    os << "<= " << lim;
    return {name, v, os.str(), v <= lim};
}

Criterion at_least(const std::string& name, double v, double lim) {
    std::ostringstream os;
    os << ">= " << lim;
    return {name, v, os.str(), v >= lim};
}

Criterion within(const std::string& name, double v, double lo, double hi) {
    std::ostringstream os;
    os << "in [" << lo << ", " << hi << "]";
    return {name, v, os.str(), v >= lo && v <= hi};
}

Criterion holds(const std::string& name, bool ok) { return {name, ok ? 1.0 : 0.0, "== 1", ok}; }

double band_of(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *hi / *lo;
}

std::complex<double> parse_coupling(const std::string& s) {
    if (s == "i") return {0.0, 1.0};
    if (s == "-i") return {0.0, -1.0};
    if (s == "1") return {1.0, 0.0};
    if (s == "0") return {0.0, 0.0};
    invalid("schema_violation", "config.sweep.coupling must be one of \"i\", \"-i\", \"1\", \"0\"");
}

// Tolerances have defaults; physical parameters never do.
struct Tol {
    Block b;
    Tol(const ExperimentConfig& cfg, std::initializer_list<const char*> keys) : b(cfg.tolerances, "config.tolerances") {
        b.allow(keys);
    }
    double operator()(const char* key, double def) const { return b.num_or(key, def); }
};

struct Ctx {
    const ExperimentConfig& cfg;
    fs::path dir;
    RunReport& rep;
    Json summary = Json::object();

    fs::path file(const std::string& name) {
        rep.outputs.push_back(name);
        return dir / name;
    }
};

SweepConfig sweep_base(const ExperimentConfig& cfg, const Block& s) {
    SweepConfig sc;
    sc.profile = cfg.profile;
    if (cfg.grid) sc.grid = *cfg.grid;
    sc.backend = backend_from_string(s.str_or("backend", "radial"));
    sc.recipe = recipe_from_string(s.str_or("recipe", "bump"));
    sc.T = s.num_or("T", 200.0);
    sc.dt = s.num_or("dt", 0.1);
    sc.drho = s.num_or("drho", 0.25);
    sc.repetitions = static_cast<int>(s.integer_or("repetitions", 3));
    sc.seed = cfg.seed;
    if (sc.backend == Backend::grid) need_grid(cfg);
    return sc;
}

// ---------------------------------------------------------------------------

void cmd_check_profile(Ctx& c) {
    Block s(c.cfg.sweep, "config.sweep");
    s.allow({"samples", "M", "k_min", "gap"});
    const Tol no_tolerances(c.cfg, {});
    s.require({"M", "gap"});
    const int samples = static_cast<int>(s.integer_or("samples", 2000));
    const int M = static_cast<int>(s.integer("M"));
    const int k_min = static_cast<int>(s.integer_or("k_min", -12));
    const int gap = static_cast<int>(s.integer("gap"));
    check_cutoff_level(c.cfg.profile, M);
    const AssumptionReport r = check_assumptions(c.cfg.profile, samples, M, k_min, gap);
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["beta"] = c.cfg.profile.beta;
    j["delta"] = c.cfg.profile.delta;
    j["M"] = M;
    j["pass"] = r.pass;
    j["transversality_ok"] = r.transversality_ok;
    j["degeneracy_ok"] = r.degeneracy_ok;
    j["comparison_ok"] = r.comparison_ok;
    j["gamma1_min"] = r.gamma1_min;
    j["gamma1_max"] = r.gamma1_max;
    j["degeneracy_min"] = r.degeneracy_min;
    j["degeneracy_max"] = r.degeneracy_max;
    j["k_min"] = r.k_min;
    j["k_max"] = r.k_max;
    j["gap"] = r.gap;
    j["min_admissible_gap"] = r.min_admissible_gap;
    if (!r.pass) {
        j["failure"] = r.failure;
        j["offending"] = {{"r1", r.offending_r1}, {"r2", r.offending_r2}, {"k1", r.offending_k1}, {"k2", r.offending_k2}};
    }
    write_text(c.file("profile_report.json"), j.dump(2) + "\n");
    c.rep.criteria.push_back(holds("transversality", r.transversality_ok));
    c.rep.criteria.push_back(holds("degeneracy", r.degeneracy_ok));
    c.rep.criteria.push_back(holds("comparison", r.comparison_ok));
    c.summary["min_admissible_gap"] = r.min_admissible_gap;
}

void cmd_kernel_decay(Ctx& c) {
    Block s(c.cfg.sweep, "config.sweep");
    s.allow({"k_values", "t_values", "k_fixed", "t_fixed"});
    s.require({"k_values", "t_values", "k_fixed", "t_fixed"});
    const Tol tol(c.cfg, {"band_max", "t_slope_lo", "t_slope_hi", "k_slope_halfwidth"});
    const std::vector<int> ks = s.ints("k_values");
    const std::vector<double> ts = s.nums("t_values");
    const int k_fixed = static_cast<int>(s.integer("k_fixed"));
    const double t_fixed = s.num("t_fixed");
    if (ks.size() < 3 || ts.size() < 3) invalid("schema_violation", "kernel-decay needs >= 3 k values and >= 3 t values");
    if (std::find(ks.begin(), ks.end(), k_fixed) == ks.end()) invalid("schema_violation", "k_fixed must be one of k_values");
    if (std::find(ts.begin(), ts.end(), t_fixed) == ts.end()) invalid("schema_violation", "t_fixed must be one of t_values");
    for (int k : ks) {
        if (k > -1) invalid("invalid_shell", "kernel-decay needs k <= -1, got " + std::to_string(k));
        check_resolvable(c.cfg, k, "config.sweep.k_values");
    }
    for (double t : ts)
        if (!(t > 0)) invalid("schema_violation", "t_values must be positive");
    const auto& p = c.cfg.profile;
    p.validate();

    std::vector<std::pair<int, double>> jobs;
    for (int k : ks)
        for (double t : ts) jobs.push_back({k, t});
    std::sort(jobs.begin(), jobs.end());
    jobs.erase(std::unique(jobs.begin(), jobs.end()), jobs.end());
    std::vector<KernelSup> sups(jobs.size());
    for (std::size_t i = 0; i < jobs.size(); ++i) sups[i] = kernel_sup_default(p, jobs[i].first, jobs[i].second);

    CsvWriter csv(c.file("kernel.csv"), {"beta", "k", "t", "sup_abs_K", "normalized_C", "nodes"});
    std::vector<double> C, tx, ty, kx, ky;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        const auto [k, t] = jobs[i];
        const double nc = normalized_c(p, k, t, sups[i].sup);
        C.push_back(nc);
        csv.row({std::to_string(p.beta), std::to_string(k), fmt_num(t), fmt_num(sups[i].sup), fmt_num(nc),
                 std::to_string(sups[i].nodes)});
        if (k == k_fixed) {
            tx.push_back(std::log2(std::abs(t)));
            ty.push_back(std::log2(sups[i].sup));
        }
        if (t == t_fixed) {
            kx.push_back(k);
            ky.push_back(std::log2(sups[i].sup));
        }
    }
    const FitResult ft = least_squares(tx, ty), fk = least_squares(kx, ky);
    write_fit(c.file("fit_t.json"), ft);
    write_fit(c.file("fit_k.json"), fk);
    const double band = band_of(C), b = p.beta;
    const double hw = tol("k_slope_halfwidth", 0.15) * b;
    c.rep.criteria.push_back(at_most("normalized_C_band", band, tol("band_max", 10.0)));
    c.rep.criteria.push_back(within("t_slope", ft.slope, tol("t_slope_lo", -1.15), tol("t_slope_hi", -0.85)));
    c.rep.criteria.push_back(within("k_slope", fk.slope, -b / 2 - hw, -b / 2 + hw));
    c.summary["band"] = band;
    c.summary["t_slope"] = ft.slope;
    c.summary["k_slope"] = fk.slope;
}

void cmd_strichartz(Ctx& c) {
    Block s(c.cfg.sweep, "config.sweep");
    s.allow({"backend", "recipe", "k_values", "T", "dt", "drho", "repetitions"});
    s.require({"k_values"});
    const Tol tol(c.cfg, {"band_max"});
    SweepConfig sc = sweep_base(c.cfg, s);
    sc.k_values = s.ints("k_values");
    for (int k : sc.k_values) check_resolvable(c.cfg, k, "config.sweep.k_values");
    sc.validate();
    const StrichartzResult r = strichartz_l4(sc);
    std::vector<StrichartzRow> rows = r.rows;
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.k < b.k; });
    CsvWriter csv(c.file("strichartz.csv"), {"beta", "k", "T", "norm", "ratio", "seed"});
    for (const auto& w : rows)
        csv.row({std::to_string(w.beta), std::to_string(w.k), fmt_num(w.T), fmt_num(w.norm), fmt_num(w.ratio),
                 std::to_string(w.seed)});
    write_fit(c.file("strichartz_fit.json"), r.fit);
    c.rep.criteria.push_back(at_most("ratio_band", r.band, tol("band_max", 4.0)));
    c.summary["band"] = r.band;
    c.summary["slope"] = r.fit.slope;
    c.summary["reference_slope"] = -c.cfg.profile.beta / 8.0;
}

void cmd_bilinear(Ctx& c) {
    Block s(c.cfg.sweep, "config.sweep");
    s.allow({"backend", "recipe", "pairs", "T", "dt", "drho", "repetitions", "degenerate_control", "conjugate_variant"});
    s.require({"pairs"});
    const Tol tol(c.cfg, {"band_max", "degenerate_min", "conjugate_max"});
    SweepConfig sc = sweep_base(c.cfg, s);
    sc.k_pairs = s.int_pairs("pairs");
    for (const auto& [k1, k2] : sc.k_pairs) {
        check_resolvable(c.cfg, k1, "config.sweep.pairs");
        check_resolvable(c.cfg, k2, "config.sweep.pairs");
        if (k1 > k2) invalid("schema_violation", "bilinear pairs need k1 <= k2");
    }
    BilinearOptions bo;
    bo.degenerate_control = s.flag_or("degenerate_control", true);
    bo.conjugate_variant = s.flag_or("conjugate_variant", true);
    sc.validate();
    const BilinearResult r = bilinear_l2(sc, bo);
    std::vector<BilinearRow> rows = r.rows;
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        return std::tie(a.variant, a.k1, a.k2) < std::tie(b.variant, b.k1, b.k2);
    });
    CsvWriter main(c.file("bilinear.csv"), {"beta", "k1", "k2", "gap", "norm", "ratio", "seed"});
    CsvWriter ctl(c.file("bilinear_controls.csv"), {"beta", "k1", "k2", "gap", "norm", "ratio", "seed", "variant"});
    for (const auto& w : rows) {
        std::vector<std::string> cells{std::to_string(w.beta), std::to_string(w.k1), std::to_string(w.k2),
                                       std::to_string(w.gap), fmt_num(w.norm), fmt_num(w.ratio), std::to_string(w.seed)};
        if (w.variant == "separated") main.row(cells);
        cells.push_back(w.variant);
        ctl.row(cells);
    }
    if (r.fit_k2) write_fit(c.file("bilinear_fit_k2.json"), *r.fit_k2);
    if (r.fit_k1) write_fit(c.file("bilinear_fit_k1.json"), *r.fit_k1);
    c.rep.criteria.push_back(at_most("ratio_band", r.band, tol("band_max", 6.0)));
    if (bo.degenerate_control && !r.degenerate_factor.empty()) {
        const double f = *std::min_element(r.degenerate_factor.begin(), r.degenerate_factor.end());
        c.rep.criteria.push_back(at_least("degenerate_factor", f, tol("degenerate_min", 5.0)));
        c.summary["degenerate_factor"] = r.degenerate_factor;
    }
    if (bo.conjugate_variant) {
        c.rep.criteria.push_back(at_most("conjugate_change", r.conjugate_change, tol("conjugate_max", 2.0)));
    }
    c.summary["band"] = r.band;
    for (const auto& w : r.warnings) c.rep.warnings.push_back(w);
}

PolarBox parse_box(const Block& b) {
    b.allow({"r_lo", "r_hi", "th_lo", "th_hi"});
    b.require({"r_lo", "r_hi", "th_lo", "th_hi"});
    PolarBox p{b.num("r_lo"), b.num("r_hi"), b.num("th_lo"), b.num("th_hi")};
    if (!(p.r_lo >= 0 && p.r_hi > p.r_lo && p.th_hi > p.th_lo))
        invalid("schema_violation", "sector box needs 0 <= r_lo < r_hi and th_lo < th_hi");
    return p;
}

void cmd_generic_bound(Ctx& c) {
    Block s(c.cfg.sweep, "config.sweep");
    s.allow({"sector1", "sector2", "samples", "draws", "march", "measure"});
    s.require({"sector1", "sector2"});
    const Tol tol(c.cfg, {"slack"});
    const PolarBox b1 = parse_box(s.sub("sector1")), b2 = parse_box(s.sub("sector2"));
    const long samples = s.integer_or("samples", 4096);
    const int draws = static_cast<int>(s.integer_or("draws", 48));
    const int march = static_cast<int>(s.integer_or("march", 256));
    double T = 0, dt = 0;
    int seeds = 0;
    if (s.has("measure")) {
        const Block m = s.sub("measure");
        m.allow({"T", "dt", "seeds"});
        m.require({"T", "dt"});
        T = m.num("T");
        dt = m.num("dt");
        seeds = static_cast<int>(m.integer_or("seeds", 5));
        if (!(T > 0) || !(dt > 0) || seeds < 1) invalid("schema_violation", "measure needs T, dt > 0 and seeds >= 1");
        need_grid(c.cfg);
    }
    const SymbolSpec s1 = SymbolSpec::sector(b1), s2 = SymbolSpec::sector(b2);
    const GenericBound g = generic_bilinear_bound(c.cfg.profile, s1, s2, samples, c.cfg.seed, draws, march);
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["theta"] = g.theta;
    j["l"] = g.l;
    j["bound"] = g.bound;
    j["normalized"] = g.normalized;
    j["theta_xi"] = g.theta_xi;
    j["theta_eta"] = g.theta_eta;
    j["pairs"] = g.pairs;
    j["draws"] = g.draws;
    write_text(c.file("generic_bound.json"), j.dump(2) + "\n");
    c.summary["bound"] = g.bound;
    c.summary["normalized"] = g.normalized;
    if (seeds > 0) {
        const SpectralGrid& grid = *c.cfg.grid;
        CsvWriter csv(c.file("generic_measured.csv"), {"seed", "norm", "normalized_bound", "ratio"});
        double worst = 0;
        for (int i = 0; i < seeds; ++i) {
            const std::uint64_t su = stream_seed(c.cfg.seed, 2 * i), sv = stream_seed(c.cfg.seed, 2 * i + 1);
            const Field u = shell_datum(grid, s1, DataRecipe::random, su);
            const Field v = shell_datum(grid, s2, DataRecipe::random, sv);
            const double n = grid_bilinear_norm(c.cfg.profile, u, v, T, dt);
            worst = std::max(worst, n / g.normalized);
            csv.row({std::to_string(su), fmt_num(n), fmt_num(g.normalized), fmt_num(n / g.normalized)});
        }
        c.rep.criteria.push_back(at_most("measured_over_bound", worst, 1.0 + tol("slack", 0.2)));
        c.summary["measured_over_bound"] = worst;
    }
}

void cmd_resonance(Ctx& c) {
    Block s(c.cfg.sweep, "config.sweep");
    s.allow({"pairs", "draws", "theta_resolution"});
    s.require({"pairs", "draws"});
    const Tol tol(c.cfg, {"components_max", "band_max"});
    const auto pairs = s.int_pairs("pairs");
    const int draws = static_cast<int>(s.integer("draws"));
    const double res = s.num_or("theta_resolution", 0.0);
    if (pairs.empty() || draws < 1) invalid("schema_violation", "resonance needs pairs and draws >= 1");
    for (const auto& [k1, k2] : pairs) {
        if (!(k1 <= k2 - 10)) invalid("schema_violation", "resonance pairs need k1 <= k2 - 10");
        check_resolvable(c.cfg, k1, "config.sweep.pairs");
        check_resolvable(c.cfg, k2, "config.sweep.pairs");
    }
    CsvWriter csv(c.file("resonance.csv"),
                  {"beta", "k1", "k2", "tau0", "xi0_r", "n_components", "max_len", "normalized_len"});
    int comps = 0;
    std::vector<double> per_pair;
    long gaps = 0;
    for (std::size_t q = 0; q < pairs.size(); ++q) {
        const auto [k1, k2] = pairs[q];
        const ResonanceSweep r = resonance_sweep(c.cfg.profile, k1, k2, draws, stream_seed(c.cfg.seed, q), res);
        for (const auto& w : r.rows) {
            csv.row({std::to_string(w.beta), std::to_string(w.k1), std::to_string(w.k2), fmt_num(w.tau0),
                     fmt_num(w.xi0_r), std::to_string(w.n_components), fmt_num(w.max_len), fmt_num(w.normalized_len)});
            gaps += w.gaps;
        }
        comps = std::max(comps, r.max_components);
        per_pair.push_back(r.max_normalized_len);
    }
    if (gaps > 0) c.rep.warnings.push_back(std::to_string(gaps) + " bisections ended on a jump");
    c.rep.criteria.push_back(at_most("max_components", comps, tol("components_max", 8.0)));
    const double band = band_of(per_pair);
    c.rep.criteria.push_back(at_most("normalized_length_band", band, tol("band_max", 10.0)));
    c.summary["max_components"] = comps;
    c.summary["per_pair_max_normalized_len"] = per_pair;
}

void cmd_sectors(Ctx& c) {
    Block s(c.cfg.sweep, "config.sweep");
    s.allow({"k", "m", "n_sectors"});
    s.require({"k", "m"});
    const Tol tol(c.cfg, {"d_max"});
    const SpectralGrid& g = need_grid(c.cfg);
    const int k = static_cast<int>(s.integer("k"));
    check_resolvable(c.cfg, k, "config.sweep.k");
    const SectorReport r =
        sector_decomposition_check(k, static_cast<int>(s.integer("m")), static_cast<int>(s.integer_or("n_sectors", 0)), g, c.cfg.seed);
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["k"] = r.k;
    j["m"] = r.m;
    j["n_sectors"] = r.n_sectors;
    j["N"] = r.N;
    j["lattice_points"] = r.lattice_points;
    j["q_partition"] = r.q_partition;
    j["t_partition"] = r.t_partition;
    j["r_orthogonal"] = r.r_orthogonal;
    j["quadruples"] = r.quadruples;
    j["d_min"] = r.d_min;
    j["d_pair"] = r.d_pair;
    write_text(c.file("sectors.json"), j.dump(2) + "\n");
    c.rep.criteria.push_back(holds("q_partition", r.q_partition));
    c.rep.criteria.push_back(holds("t_partition", r.t_partition));
    c.rep.criteria.push_back(holds("r_orthogonal", r.r_orthogonal));
    c.rep.criteria.push_back(at_most("d_min", r.d_min, tol("d_max", 8.0)));
}

void cmd_vpnorm(Ctx& c) {
    Block s(c.cfg.sweep, "config.sweep");
    s.allow({"series", "max_len", "p_values"});
    const Tol no_tolerances(c.cfg, {});
    s.require({"series", "max_len", "p_values"});
    const int n = static_cast<int>(s.integer("series"));
    const int max_len = static_cast<int>(s.integer("max_len"));
    const std::vector<double> ps = s.nums("p_values");
    if (n < 1 || max_len < 1 || max_len > 12) invalid("schema_violation", "vpnorm needs series >= 1 and 1 <= max_len <= 12");
    for (double p : ps)
        if (!(p >= 1)) invalid("schema_violation", "p_values must be >= 1");
    std::vector<double> sorted_p = ps;
    std::sort(sorted_p.begin(), sorted_p.end());

    CsvWriter csv(c.file("vpnorm.csv"), {"series_id", "p", "k", "norm", "method"});
    bool exact = true, monotone = true;
    long mismatches = 0;
    for (int id = 0; id < n; ++id) {
        Rng rng(stream_seed(c.cfg.seed, id));
        const int len = 1 + static_cast<int>(rng.uniform() * max_len) % max_len;
        TimeSeries<std::complex<double>> ts;
        double t = 0;
        for (int i = 0; i < len; ++i) {
            t += 0.1 + rng.uniform();
            ts.push(t, rng.complex_normal());
        }
        const VariationData d = variation_data(ts);
        double prev = std::numeric_limits<double>::infinity();
        for (double p : sorted_p) {
            const double dp = vp_from_data(d, p), bf = vp_bruteforce_from_data(d, p);
            if (dp != bf) {
                exact = false;
                ++mismatches;
            }
            if (dp > prev * (1 + 1e-14)) monotone = false; // ties differ by rounding only
            prev = dp;
            csv.row({std::to_string(id), fmt_num(p), "", fmt_num(dp), "dp"});
            csv.row({std::to_string(id), fmt_num(p), "", fmt_num(bf), "bruteforce"});
        }
    }
    c.rep.criteria.push_back(holds("dp_equals_bruteforce", exact));
    c.rep.criteria.push_back(holds("monotone_in_p", monotone));
    c.summary["mismatches"] = mismatches;
}

SolverConfig solver_base(const ExperimentConfig& cfg, const Block& s) {
    SolverConfig sc;
    sc.profile = cfg.profile;
    sc.grid = need_grid(cfg);
    sc.M = static_cast<int>(s.integer("M"));
    sc.dt = s.num_or("dt", 0.1);
    sc.T_final = s.num("T_final");
    sc.stride = static_cast<int>(s.integer_or("stride", 1));
    sc.epsilon = s.num("epsilon");
    sc.coupling = parse_coupling(s.str_or("coupling", "i"));
    sc.backward = s.flag_or("backward", false);
    if (!sc.grid.resolves_cutoff(sc.M))
        invalid("unresolvable_shell", "config.sweep.M: cutoff M=" + std::to_string(sc.M) + " is not resolvable on grid N=" +
                                          std::to_string(sc.grid.N) + ", L=" + fmt_num(sc.grid.L));
    return sc;
}

void write_mass(Ctx& c, const MassDrift& md) {
    CsvWriter csv(c.file("mass.csv"), {"t", "norm", "dnorm2_fd", "dnorm2_exact"});
    for (const auto& r : md.rows)
        csv.row({fmt_num(r.t), fmt_num(r.norm), std::isnan(r.dnorm2_fd) ? "" : fmt_num(r.dnorm2_fd), fmt_num(r.dnorm2_exact)});
}

void cmd_solve(Ctx& c) {
    Block s(c.cfg.sweep, "config.sweep");
    s.allow({"M", "dt", "T_final", "stride", "epsilon", "coupling", "backward", "snapshots"});
    const Tol no_tolerances(c.cfg, {});
    s.require({"M", "T_final", "epsilon"});
    SolverConfig sc = solver_base(c.cfg, s);
    const bool snaps = s.flag_or("snapshots", false);
    sc.validate();
    const Field u0 = solver_datum(sc, sc.epsilon, c.cfg.seed);
    const Trajectory tr = solve(sc, u0);
    const MassDrift md = mass_drift(sc, tr);
    write_mass(c, md);
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["scheme"] = to_string(sc.scheme);
    j["times"] = tr.core.times;
    j["lipschitz_bound"] = lipschitz_bound(sc);
    j["mass_max_mismatch"] = md.max_mismatch;
    j["mass_total_drift"] = md.total_drift;
    if (snaps) {
        Json files = Json::array();
        for (std::size_t k = 0; k < tr.size(); ++k) {
            std::ostringstream name;
            name << "snapshots/u_" << std::setw(5) << std::setfill('0') << k;
            write_snapshot(c.dir / name.str(), tr.at(k), tr.core.times[k]);
            c.rep.outputs.push_back(name.str() + ".bin");
            c.rep.outputs.push_back(name.str() + ".json");
            files.push_back(name.str());
        }
        j["snapshots"] = files;
    }
    write_text(c.file("trajectory.json"), j.dump(2) + "\n");
    c.summary["mass_max_mismatch"] = md.max_mismatch;
    c.summary["mass_total_drift"] = md.total_drift;
}

void cmd_picard(Ctx& c) {
    Block s(c.cfg.sweep, "config.sweep");
    s.allow({"M", "dt", "T_final", "stride", "epsilon", "coupling", "iterations", "eps_sweep", "bisect"});
    s.require({"M", "T_final", "epsilon"});
    const Tol tol(c.cfg, {"ratio_max", "slope_target", "slope_halfwidth"});
    SolverConfig sc = solver_base(c.cfg, s);
    const int iters = static_cast<int>(s.integer_or("iterations", 4));
    const std::vector<double> eps_sweep = s.has("eps_sweep") ? s.nums("eps_sweep") : std::vector<double>{};
    double b_lo = 0, b_hi = 0;
    int b_steps = 0;
    if (s.has("bisect")) {
        const Block b = s.sub("bisect");
        b.allow({"lo", "hi", "steps"});
        b.require({"lo", "hi"});
        b_lo = b.num("lo");
        b_hi = b.num("hi");
        b_steps = static_cast<int>(b.integer_or("steps", 8));
    }
    if (!eps_sweep.empty() && eps_sweep.size() < 3) invalid("schema_violation", "eps_sweep needs >= 3 values");
    sc.validate();
    const Field unit = solver_datum(sc, 1.0, c.cfg.seed);
    auto scaled = [&](double eps) {
        Field u = unit;
        for (auto& v : u.values) v *= eps * (1.0 - 1e-14);
        return u;
    };

    double eps = sc.epsilon;
    if (b_steps > 0) {
        const Eps0Result e0 = bisect_eps0(sc, unit, iters, b_lo, b_hi, b_steps);
        Json j;
        j["schema_version"] = kSchemaVersion;
        j["eps0"] = e0.eps0;
        Json h = Json::array();
        for (const auto& [e, ok] : e0.history) h.push_back({{"eps", e}, {"contracting", ok}});
        j["history"] = h;
        write_text(c.file("eps0.json"), j.dump(2) + "\n");
        eps = e0.eps0;
        c.summary["eps0"] = eps;
    }
    SolverConfig at = sc;
    at.epsilon = eps;
    const PicardResult pr = picard_iterate(at, scaled(eps), iters, true);
    CsvWriter csv(c.file("picard.csv"), {"eps", "j", "diff_linf", "diff_y0", "ratio_linf", "ratio_y0"});
    double worst = 0;
    for (std::size_t j = 0; j < pr.diff_linf.size(); ++j) {
        const bool has_ratio = j < pr.ratio_linf.size();
        csv.row({fmt_num(eps), std::to_string(j + 1), fmt_num(pr.diff_linf[j]), fmt_num(pr.diff_y0[j]),
                 has_ratio ? fmt_num(pr.ratio_linf[j]) : "", has_ratio ? fmt_num(pr.ratio_y0[j]) : ""});
        if (has_ratio) worst = std::max({worst, pr.ratio_linf[j], pr.ratio_y0[j]});
    }
    c.rep.criteria.push_back(at_most("picard_ratio_max", worst, tol("ratio_max", 0.5)));
    c.summary["ratio_max"] = worst;

    if (!eps_sweep.empty()) {
        std::vector<double> es = eps_sweep;
        std::sort(es.begin(), es.end());
        CsvWriter ec(c.file("eps_scaling.csv"), {"eps", "rho1_linf", "rho1_y0"});
        std::vector<double> x, y;
        for (double e : es) {
            SolverConfig ce = sc;
            ce.epsilon = e;
            const PicardResult r = picard_iterate(ce, scaled(e), 2, true);
            ec.row({fmt_num(e), fmt_num(r.ratio_linf[0]), fmt_num(r.ratio_y0[0])});
            x.push_back(std::log2(e));
            y.push_back(std::log2(r.ratio_linf[0]));
        }
        const FitResult f = least_squares(x, y);
        write_fit(c.file("eps_fit.json"), f);
        const double target = tol("slope_target", 2.0), hw = tol("slope_halfwidth", 0.3);
        c.rep.criteria.push_back(within("rho1_eps_exponent", f.slope, target - hw, target + hw));
        c.summary["rho1_eps_exponent"] = f.slope;
    }
}

void cmd_scatter(Ctx& c) {
    Block s(c.cfg.sweep, "config.sweep");
    s.allow({"M", "dt", "T_final", "stride", "epsilon", "coupling", "perturbation", "windows"});
    s.require({"M", "T_final", "epsilon"});
    const Tol tol(c.cfg, {"lipschitz_max"});
    SolverConfig sc = solver_base(c.cfg, s);
    const double pert = s.num_or("perturbation", 1e-3);
    const int windows = static_cast<int>(s.integer_or("windows", 4));
    if (!(sc.T_final >= 100)) invalid("schema_violation", "scatter needs T_final >= 100");
    if (!(pert > 0 && pert < 1)) invalid("schema_violation", "perturbation must lie in (0, 1)");
    sc.validate();
    // u0 and a nearby datum, both inside the eps ball
    Field u0 = solver_datum(sc, sc.epsilon * (1.0 - pert), c.cfg.seed);
    const Field w = solver_datum(sc, sc.epsilon * pert, stream_seed(c.cfg.seed, 1));
    Field u1 = u0;
    for (std::size_t i = 0; i < u1.values.size(); ++i) u1.values[i] += w.values[i];
    if (l2_norm_frequency(u1) > sc.epsilon) {
        const double f = sc.epsilon / l2_norm_frequency(u1) * (1.0 - 1e-12);
        for (auto& v : u1.values) v *= f;
    }
    const Trajectory t0 = solve(sc, u0), t1 = solve(sc, u1);
    const ScatterResult r0 = scattering_state(sc, t0, windows), r1 = scattering_state(sc, t1, windows);
    const double lip = l2_distance(r0.u_plus, r1.u_plus) / l2_distance(as_frequency(u0), as_frequency(u1));

    CsvWriter csv(c.file("scatter_windows.csv"), {"t_lo", "t_hi", "sup"});
    for (const auto& win : r0.windows) csv.row({fmt_num(win.t_lo), fmt_num(win.t_hi), fmt_num(win.sup)});
    write_snapshot(c.dir / "u_plus", r0.u_plus, t0.core.times.back());
    c.rep.outputs.push_back("u_plus.bin");
    c.rep.outputs.push_back("u_plus.json");
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["early_sup"] = r0.early_sup;
    j["late_sup"] = r0.late_sup;
    j["cauchy"] = r0.cauchy;
    j["monotone"] = r0.monotone;
    j["lipschitz"] = lip;
    j["warnings"] = r0.warnings;
    write_text(c.file("scatter.json"), j.dump(2) + "\n");
    for (const auto& wmsg : r0.warnings) c.rep.warnings.push_back(wmsg);
    c.rep.criteria.push_back(holds("cauchy", r0.cauchy));
    c.rep.criteria.push_back(holds("monotone_windows", r0.monotone));
    c.rep.criteria.push_back(at_most("lipschitz", lip, tol("lipschitz_max", 3.0)));
    c.summary["lipschitz"] = lip;
}

std::string now_iso() {
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

Json criteria_json(const RunReport& r) {
    Json a = Json::array();
    for (const auto& c : r.criteria) a.push_back({{"name", c.name}, {"value", c.value}, {"limit", c.limit}, {"pass", c.pass}});
    return a;
}

} // namespace

RunReport execute(const ExperimentConfig& cfg, const fs::path& out_dir) {
    RunReport rep;
    rep.command = cfg.command;
    if (cfg.tolerances.is_null() || !cfg.tolerances.is_object()) invalid("schema_violation", "config.tolerances must be an object");
    fs::create_directories(out_dir);
    Ctx c{cfg, out_dir, rep};
    const std::string& cmd = cfg.command;
    const auto t0 = std::chrono::steady_clock::now();
    const std::string started = now_iso();
    if (cmd == "check-profile") cmd_check_profile(c);
    else if (cmd == "kernel-decay") cmd_kernel_decay(c);
    else if (cmd == "strichartz") cmd_strichartz(c);
    else if (cmd == "bilinear") cmd_bilinear(c);
    else if (cmd == "generic-bound") cmd_generic_bound(c);
    else if (cmd == "resonance") cmd_resonance(c);
    else if (cmd == "sectors") cmd_sectors(c);
    else if (cmd == "vpnorm") cmd_vpnorm(c);
    else if (cmd == "solve") cmd_solve(c);
    else if (cmd == "picard") cmd_picard(c);
    else if (cmd == "scatter") cmd_scatter(c);
    else invalid("schema_violation", "unknown command '" + cmd + "'");
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    Json m;
    m["schema_version"] = kSchemaVersion;
    m["command"] = cmd;
    m["seed"] = cfg.seed;
    m["git_describe"] = git_describe();
    m["config"] = cfg.raw;
    m["outputs"] = rep.outputs;
    c.summary["criteria"] = criteria_json(rep);
    c.summary["warnings"] = rep.warnings;
    c.summary["pass"] = rep.pass();
    m["summary"] = c.summary;
    write_text(out_dir / "manifest.json", m.dump(2) + "\n");
    Json ts;
    ts["started"] = started;
    ts["finished"] = now_iso();
    ts["seconds"] = secs;
    write_text(out_dir / "timestamps.json", ts.dump(2) + "\n");
    return rep;
}

namespace {

void print_report(const RunReport& r, std::ostream& out) {
    for (const auto& c : r.criteria)
        out << (c.pass ? "PASS " : "FAIL ") << r.command << " " << c.name << " = " << fmt_num(c.value) << " (" << c.limit
            << ")\n";
    for (const auto& w : r.warnings) out << "warning: " << w << "\n";
}

} // namespace

int run(const fs::path& config, const RunOptions& opt, std::ostream& out, std::ostream& err) {
    try {
        ExperimentConfig cfg = load_config(config);
        if (!opt.expected_command.empty() && opt.expected_command != cfg.command)
            invalid("command_mismatch", "subcommand '" + opt.expected_command + "' does not match config command '" +
                                            cfg.command + "'");
        if (opt.seed) {
            cfg.seed = *opt.seed;
            cfg.raw["seed"] = *opt.seed;
        }
        const RunReport r = execute(cfg, resolve_output(cfg, opt));
        print_report(r, out);
        return r.pass() ? kExitOk : kExitAcceptance;
    } catch (const ValidationError& e) {
        err << error_json(e.kind(), e.what()) << "\n";
        return kExitValidation;
    } catch (const NumericalError& e) {
        err << error_json(e.kind(), e.what()) << "\n";
        return kExitAcceptance;
    } catch (const Error& e) {
        err << error_json(e.kind(), e.what()) << "\n";
        return kExitInternal;
    } catch (const std::exception& e) {
        err << error_json("internal_error", e.what()) << "\n";
        return kExitInternal;
    }
}

int verify_all(const fs::path& suite, const RunOptions& opt, std::ostream& out, std::ostream& err) {
    Json doc;
    try {
        std::ifstream in(suite);
        if (!in) invalid("config_not_found", "suite file not found: " + suite.string());
        try {
            doc = Json::parse(in);
        } catch (const nlohmann::json::exception& e) {
            invalid("invalid_json", std::string("suite is not valid JSON: ") + e.what());
        }
        Block top(doc, "suite");
        top.allow({"schema_version", "name", "entries", "comment"});
        top.require({"schema_version", "entries"});
        if (top.integer("schema_version") != kSchemaVersion) invalid("schema_violation", "unsupported suite schema_version");
        if (!doc.at("entries").is_array()) invalid("schema_violation", "suite.entries must be an array");
    } catch (const ValidationError& e) {
        err << error_json(e.kind(), e.what()) << "\n";
        return kExitValidation;
    }

    const fs::path base = suite.parent_path();
    const fs::path root = opt.out ? *opt.out : fs::path(std::getenv("DEGENLAB_OUT") ? std::getenv("DEGENLAB_OUT") : "out/verify");
    Json rows = Json::array();
    std::map<std::string, bool> by_criterion;
    int worst = kExitOk;
    auto rank = [](int code) { return code == kExitInternal ? 3 : code == kExitValidation ? 2 : code == kExitAcceptance ? 1 : 0; };
    std::ostringstream table;
    table << std::left << std::setw(28) << "entry" << std::setw(12) << "criterion" << std::setw(9) << "primary"
          << "status\n";
    for (const auto& e : doc.at("entries")) {
        std::string id = "?", crit = "", status;
        bool primary = true;
        int code = kExitOk;
        Json detail = Json::array();
        try {
            Block b(e, "suite.entries[]");
            b.allow({"id", "criterion", "primary", "config"});
            b.require({"id", "config"});
            id = b.str("id");
            crit = b.has("criterion") ? std::to_string(b.integer("criterion")) : "";
            primary = b.flag_or("primary", true);
            const fs::path cpath = base / b.str("config");
            RunOptions o = opt;
            o.out = root / id;
            o.expected_command.clear();
            std::ostringstream eout, eerr;
            code = run(cpath, o, eout, eerr);
            out << eout.str();
            err << eerr.str();
            if (code == kExitOk || code == kExitAcceptance) {
                std::ifstream mi(root / id / "manifest.json");
                if (mi) detail = Json::parse(mi)["summary"]["criteria"];
            } else {
                detail = eerr.str();
            }
        } catch (const std::exception& ex) {
            err << error_json("schema_violation", ex.what()) << "\n";
            code = kExitValidation;
        }
        status = code == kExitOk ? "pass" : code == kExitAcceptance ? "fail" : code == kExitValidation ? "invalid" : "error";
        rows.push_back({{"id", id}, {"criterion", crit}, {"primary", primary}, {"status", status}, {"exit", code}, {"detail", detail}});
        if (!crit.empty()) {
            auto it = by_criterion.find(crit);
            const bool ok = code == kExitOk;
            by_criterion[crit] = it == by_criterion.end() ? ok : (it->second && ok);
        }
        if (primary && rank(code) > rank(worst)) worst = code;
        table << std::left << std::setw(28) << id << std::setw(12) << crit << std::setw(9) << (primary ? "yes" : "no")
              << status << "\n";
    }
    Json summary;
    summary["schema_version"] = kSchemaVersion;
    summary["suite"] = doc.value("name", suite.stem().string());
    summary["entries"] = rows;
    Json crit = Json::object();
    for (const auto& [k, v] : by_criterion) crit[k] = v ? "pass" : "fail";
    summary["criteria"] = crit;
    summary["exit"] = worst;
    try {
        write_text(root / "verify_summary.json", summary.dump(2) + "\n");
    } catch (const std::exception& ex) {
        err << error_json("io_error", ex.what()) << "\n";
        return kExitInternal;
    }
    out << table.str();
    return worst;
}

} // namespace degenlab
