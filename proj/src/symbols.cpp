#include "degenlab/symbols.hpp"

#include "degenlab/error.hpp"
#include "degenlab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace degenlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Index of the equal-width bin containing x in [0, n * width); always in [0, n-1].
long bin_index(double x, double width, long n) {
    long b = static_cast<long>(std::floor(x / width));
    return std::clamp(b, 0L, n - 1);
}

bool in_arc(double theta, double lo, double hi) {
    double d = std::fmod(theta - lo, kTwoPi);
    if (d < 0) d += kTwoPi;
    return d < hi - lo;
}

} // namespace

double polar_angle(const Vec2& xi) {
    double th = std::atan2(xi[1], xi[0]);
    if (th < 0.0) th += kTwoPi;
    if (th >= kTwoPi) th = 0.0;
    return th;
}

double p_leq_radial(int k, double r) { return chi(std::ldexp(r - 1.0, -k)); }

double p_shell_radial(int k, double r) {
    if (k > 0) throw ValidationError("invalid_symbol", "shell index k must be <= 0");
    if (k == 0) return 1.0 - p_leq_radial(-1, r);
    return p_leq_radial(k, r) - p_leq_radial(k - 1, r);
}

SymbolSpec SymbolSpec::chi_leq(int k) {
    SymbolSpec s;
    s.tag = Tag::chi_leq_k;
    s.k = k;
    return s;
}

SymbolSpec SymbolSpec::p(int k) {
    if (k > 0) throw ValidationError("invalid_symbol", "shell index k must be <= 0");
    SymbolSpec s;
    s.tag = Tag::p_k;
    s.k = k;
    return s;
}

SymbolSpec SymbolSpec::p_plus(int k) {
    SymbolSpec s = p(k);
    s.tag = Tag::p_k_plus;
    return s;
}

SymbolSpec SymbolSpec::p_minus(int k) {
    SymbolSpec s = p(k);
    s.tag = Tag::p_k_minus;
    return s;
}

SymbolSpec SymbolSpec::p_range(int k_lo, int k_hi) {
    if (k_lo >= k_hi) throw ValidationError("invalid_symbol", "p_range needs k_lo < k_hi");
    SymbolSpec s;
    s.tag = Tag::p_range;
    s.k = k_lo;
    s.k_hi = k_hi;
    return s;
}

SymbolSpec SymbolSpec::q(int m, int j) {
    if (m > 0) throw ValidationError("invalid_symbol", "angular scale m must be <= 0");
    if (j < 0 || j >= (1L << -m)) throw ValidationError("invalid_symbol", "sector index j out of range");
    SymbolSpec s;
    s.tag = Tag::q_sector;
    s.m = m;
    s.j = j;
    return s;
}

SymbolSpec SymbolSpec::r_sub(int scale, int index) {
    SymbolSpec s;
    s.tag = Tag::r_subshell;
    s.scale = scale;
    s.index = index;
    return s;
}

SymbolSpec SymbolSpec::t(int n_sectors, int i) {
    if (n_sectors < 1 || i < 0 || i >= n_sectors) throw ValidationError("invalid_symbol", "t_sector index out of range");
    SymbolSpec s;
    s.tag = Tag::t_sector;
    s.n_sectors = n_sectors;
    s.i = i;
    return s;
}

SymbolSpec SymbolSpec::null_a(const DispersionProfile& prof, int M) {
    check_cutoff_level(prof, M);
    SymbolSpec s;
    s.tag = Tag::null_A;
    s.profile = prof;
    s.M = M;
    return s;
}

SymbolSpec SymbolSpec::sector(const PolarBox& b) {
    if (!(b.r_lo < b.r_hi) || !(b.th_lo < b.th_hi) || b.th_hi - b.th_lo > kTwoPi)
        throw ValidationError("invalid_symbol", "annular sector needs r_lo < r_hi and 0 < th_hi - th_lo <= 2 pi");
    SymbolSpec s;
    s.tag = Tag::annular_sector;
    s.box = b;
    return s;
}

SymbolSpec SymbolSpec::product(std::vector<SymbolSpec> fs) {
    SymbolSpec s;
    s.tag = Tag::product;
    s.factors = std::move(fs);
    return s;
}

SymbolSpec SymbolSpec::custom(std::function<double(const Vec2&)> f, std::string label) {
    SymbolSpec s;
    s.tag = Tag::custom;
    s.fn = std::move(f);
    s.label = std::move(label);
    return s;
}

double SymbolSpec::operator()(const Vec2& xi) const {
    const double r = std::hypot(xi[0], xi[1]);
    switch (tag) {
    case Tag::chi_leq_k:
        return p_leq_radial(k, r);
    case Tag::p_k:
        return p_shell_radial(k, r);
    case Tag::p_k_plus:
        return r > 1.0 ? p_shell_radial(k, r) : 0.0;
    case Tag::p_k_minus:
        return r < 1.0 ? p_shell_radial(k, r) : 0.0;
    case Tag::p_range:
        return p_leq_radial(k_hi, r) - p_leq_radial(k, r);
    case Tag::q_sector: {
        const long n = 1L << -m;
        return bin_index(polar_angle(xi), std::ldexp(kTwoPi, m), n) == j ? 1.0 : 0.0;
    }
    case Tag::r_subshell:
        return std::floor((r - 1.0) / std::ldexp(1.0, scale)) == index ? 1.0 : 0.0;
    case Tag::t_sector:
        return bin_index(polar_angle(xi) * n_sectors / kTwoPi, 1.0, n_sectors) == i ? 1.0 : 0.0;
    case Tag::null_A:
        return null_symbol_radial(profile, M, r);
    case Tag::annular_sector:
        return (r >= box.r_lo && r < box.r_hi && in_arc(polar_angle(xi), box.th_lo, box.th_hi)) ? 1.0 : 0.0;
    case Tag::product: {
        double v = 1.0;
        for (const auto& f : factors) {
            v *= f(xi);
            if (v == 0.0) break;
        }
        return v;
    }
    case Tag::custom:
        return fn(xi);
    }
    return 0.0;
}

bool SymbolSpec::is_indicator() const {
    switch (tag) {
    case Tag::q_sector:
    case Tag::r_subshell:
    case Tag::t_sector:
    case Tag::annular_sector:
        return true;
    case Tag::product:
        return std::all_of(factors.begin(), factors.end(), [](const SymbolSpec& f) { return f.is_indicator(); });
    default:
        return false;
    }
}

std::optional<PolarBox> SymbolSpec::support_box() const {
    const PolarBox all{0.0, kInf, 0.0, kTwoPi};
    switch (tag) {
    case Tag::chi_leq_k:
    case Tag::p_k:
    case Tag::p_range: {
        if (tag == Tag::p_k && k == 0) return std::nullopt;
        const double w = 0.75 * std::ldexp(1.0, tag == Tag::p_range ? k_hi : k);
        return PolarBox{std::max(0.0, 1.0 - w), 1.0 + w, 0.0, kTwoPi};
    }
    case Tag::p_k_plus:
        if (k == 0) return std::nullopt;
        return PolarBox{1.0 + std::ldexp(1.0, k - 2), 1.0 + 0.75 * std::ldexp(1.0, k), 0.0, kTwoPi};
    case Tag::p_k_minus:
        return PolarBox{std::max(0.0, 1.0 - 0.75 * std::ldexp(1.0, k)), 1.0 - std::ldexp(1.0, k - 2), 0.0, kTwoPi};
    case Tag::q_sector: {
        const double w = std::ldexp(kTwoPi, m);
        return PolarBox{0.0, kInf, j * w, (j + 1) * w};
    }
    case Tag::r_subshell: {
        const double w = std::ldexp(1.0, scale);
        return PolarBox{std::max(0.0, 1.0 + index * w), 1.0 + (index + 1) * w, 0.0, kTwoPi};
    }
    case Tag::t_sector:
        return PolarBox{0.0, kInf, kTwoPi * i / n_sectors, kTwoPi * (i + 1) / n_sectors};
    case Tag::null_A: {
        const double w = 0.75 * std::ldexp(1.0, M - 1);
        return PolarBox{1.0 - w, 1.0 + w, 0.0, kTwoPi};
    }
    case Tag::annular_sector:
        return box;
    case Tag::product: {
        PolarBox b = all;
        bool any = false;
        for (const auto& f : factors) {
            auto fb = f.support_box();
            if (!fb) continue;
            any = true;
            b.r_lo = std::max(b.r_lo, fb->r_lo);
            b.r_hi = std::min(b.r_hi, fb->r_hi);
            if (fb->th_hi - fb->th_lo < b.th_hi - b.th_lo) {
                b.th_lo = fb->th_lo;
                b.th_hi = fb->th_hi;
            }
        }
        if (!any) return std::nullopt;
        return b;
    }
    case Tag::custom:
        return std::nullopt;
    }
    return std::nullopt;
}

std::string SymbolSpec::describe() const {
    std::ostringstream os;
    switch (tag) {
    case Tag::chi_leq_k: os << "P_{<=" << k << "}"; break;
    case Tag::p_k: os << "P_" << k; break;
    case Tag::p_k_plus: os << "P_" << k << "^+"; break;
    case Tag::p_k_minus: os << "P_" << k << "^-"; break;
    case Tag::p_range: os << "P_{" << k << "<.<=" << k_hi << "}"; break;
    case Tag::q_sector: os << "Q_{" << m << "," << j << "}"; break;
    case Tag::r_subshell: os << "R_" << index << "[2^" << scale << "]"; break;
    case Tag::t_sector: os << "T_" << i << "/" << n_sectors; break;
    case Tag::null_A: os << "A[M=" << M << "]"; break;
    case Tag::annular_sector:
        os << "sector[r " << box.r_lo << ".." << box.r_hi << ", th " << box.th_lo << ".." << box.th_hi << "]";
        break;
    case Tag::product:
        for (std::size_t q = 0; q < factors.size(); ++q) os << (q ? "*" : "") << factors[q].describe();
        break;
    case Tag::custom: os << label; break;
    }
    return os.str();
}

std::vector<double> symbol_table(const SpectralGrid& g, const SymbolSpec& s) {
    return symbol_table(g, [&s](const Vec2& xi) { return s(xi); });
}

Field apply_table(const std::vector<double>& table, const Field& f) {
    Field out = as_frequency(f);
    kernels::multiply_real(out.values.data(), table.data(), out.values.size());
    return f.rep == Rep::space ? to_space(out) : out;
}

Field apply_symbol(const SymbolSpec& s, const Field& f) { return apply_table(symbol_table(f.grid, s), f); }

} // namespace degenlab
