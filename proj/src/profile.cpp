#include "degenlab/profile.hpp"

#include "degenlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace degenlab {

namespace {

double ipow(double x, int n) {
    double r = 1.0;
    while (n > 0) {
        if (n & 1) r *= x;
        x *= x;
        n >>= 1;
    }
    return r;
}

double sigma_fn(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

double smooth_step(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double a = sigma_fn(x), b = sigma_fn(1.0 - x);
    return a / (a + b);
}

struct Lambda {
    double g, s;
    double q(double r) const { return g * r + s * r * r * r; }
    double d0(double r) const { return std::sqrt(q(r)); }
    double d1(double r) const { return (g + 3.0 * s * r * r) / (2.0 * std::sqrt(q(r))); }
    double d2(double r) const {
        const double num = 3.0 * s * s * ipow(r, 4) + 6.0 * g * s * r * r - g * g;
        const double qq = q(r);
        return num / (4.0 * qq * std::sqrt(qq));
    }
};

Lambda lambda_of(const DispersionProfile& p) { return Lambda{p.params.at(0), p.params.at(1)}; }

} // namespace

DispersionProfile DispersionProfile::model(int beta, double delta) {
    DispersionProfile p;
    p.beta = beta;
    p.delta = delta;
    p.kind = ProfileKind::model;
    p.validate();
    return p;
}

DispersionProfile DispersionProfile::gravity_capillary(double delta, double g, double sigma) {
    DispersionProfile p;
    p.beta = 1;
    p.delta = delta;
    p.kind = ProfileKind::gravity_capillary;
    p.params = {g, sigma};
    p.validate();
    return p;
}

void DispersionProfile::validate() const {
    if (beta < 1) throw ValidationError("invalid_profile", "beta must be a positive integer");
    if (!(delta > 0.0 && delta < 1.0)) throw ValidationError("invalid_profile", "delta must lie in (0,1)");
    if (kind == ProfileKind::model) {
        if (!params.empty()) throw ValidationError("invalid_profile", "model profile takes no params");
    } else {
        if (params.size() != 2 || !(params[0] > 0.0) || !(params[1] > 0.0))
            throw ValidationError("invalid_profile", "gravity_capillary needs params [g, sigma] > 0");
        if (beta != 1) throw ValidationError("invalid_profile", "gravity_capillary degenerates with beta = 1");
    }
}

double DispersionProfile::inflection_radius() const {
    if (kind != ProfileKind::gravity_capillary) return 1.0;
    const double g = params.at(0), s = params.at(1);
    // 3 s^2 r^4 + 6 g s r^2 - g^2 = 0
    return std::sqrt((g / s) * (2.0 / std::sqrt(3.0) - 1.0));
}

std::string to_string(ProfileKind k) { return k == ProfileKind::model ? "model" : "gravity_capillary"; }

ProfileKind profile_kind_from_string(const std::string& s) {
    if (s == "model") return ProfileKind::model;
    if (s == "gravity_capillary") return ProfileKind::gravity_capillary;
    throw ValidationError("invalid_profile", "unknown profile kind '" + s + "'");
}

double chi(double r) { return smooth_step(4.0 * (0.75 - std::abs(r))); }

GammaJet gamma_jet(const DispersionProfile& p, double r) {
    if (p.kind == ProfileKind::model) {
        if (r < 0.0) throw ValidationError("domain_error", "gamma evaluated at negative radius");
        const int b = p.beta;
        const double s = r - 1.0, a = std::abs(s);
        const double ab = ipow(a, b);
        const double g2 = ab;
        const double g1 = 1.0 + (s < 0 ? -1.0 : 1.0) * ab * a / (b + 1);
        const double g0 = r + ab * a * a / ((b + 1.0) * (b + 2.0));
        return {g0, g1, g2};
    }
    if (!(r > 0.0)) throw ValidationError("domain_error", "gravity_capillary profile requires r > 0");
    const Lambda lam = lambda_of(p);
    const double rs = p.inflection_radius();
    const double norm = lam.d0(rs);
    const double x = rs * r;
    return {lam.d0(x) / norm, rs * lam.d1(x) / norm, rs * rs * lam.d2(x) / norm};
}

double gamma_eval(const DispersionProfile& p, double r, int order) {
    if (order < 0 || order > 2) throw ValidationError("unsupported_order", "gamma order must be 0, 1 or 2");
    const GammaJet j = gamma_jet(p, r);
    return order == 0 ? j.g0 : (order == 1 ? j.g1 : j.g2);
}

double h_symbol(const DispersionProfile& p, const Vec2& xi) {
    return gamma_jet(p, std::hypot(xi[0], xi[1])).g0;
}

Vec2 grad_h(const DispersionProfile& p, const Vec2& xi) {
    const double r = std::hypot(xi[0], xi[1]);
    if (r == 0.0) return {0.0, 0.0};
    const double g1 = gamma_jet(p, r).g1;
    return {g1 * xi[0] / r, g1 * xi[1] / r};
}

void check_cutoff_level(const DispersionProfile& p, int M) {
    if (M > -3) throw ValidationError("precondition_violation", "cutoff level M must satisfy M <= -3");
    if (!(std::ldexp(1.0, M + 4) < p.delta))
        throw ValidationError("precondition_violation", "cutoff level M must satisfy 2^(M+4) < delta");
}

double null_symbol_radial(const DispersionProfile& p, int M, double r) {
    const double s = std::abs(r - 1.0);
    const double c = chi(std::ldexp(r - 1.0, 1 - M));
    if (c == 0.0) return 0.0;
    const double amp = (p.beta % 2 == 0) ? ipow(s, p.beta / 2) : std::sqrt(ipow(s, p.beta));
    return amp * c;
}

double null_symbol(const DispersionProfile& p, int M, const Vec2& xi) {
    check_cutoff_level(p, M);
    return null_symbol_radial(p, M, std::hypot(xi[0], xi[1]));
}

double curvature_weight(const DispersionProfile& p, const Vec2& xi) {
    const double r = std::hypot(xi[0], xi[1]);
    const GammaJet j = gamma_jet(p, r);
    const double d = 1.0 + j.g1 * j.g1;
    return j.g1 * j.g2 / (r * d * d);
}

ProfileView make_view(const DispersionProfile& p) {
    ProfileView v;
    v.beta = p.beta;
    v.delta = p.delta;
    v.d1 = [p](double r) { return gamma_jet(p, r).g1; };
    v.d2 = [p](double r) { return gamma_jet(p, r).g2; };
    return v;
}

namespace {

struct Extremum {
    double value;
    double at;
};

// sup of |gamma''| on 0 <= |r-1| <= a, both sides of the circle
Extremum sup_inner(const ProfileView& v, double a, int samples) {
    Extremum e{0.0, 1.0};
    for (int i = 0; i <= samples; ++i) {
        const double s = a * i / samples;
        for (double r : {1.0 - s, 1.0 + s}) {
            const double g = std::abs(v.d2(r));
            if (g > e.value) e = {g, r};
        }
    }
    return e;
}

// inf of |gamma''| on lo <= |r-1| <= hi
Extremum inf_outer(const ProfileView& v, double lo, double hi, int samples) {
    Extremum e{std::numeric_limits<double>::infinity(), 1.0 + lo};
    for (int i = 0; i <= samples; ++i) {
        const double s = lo + (hi - lo) * i / samples;
        for (double r : {1.0 - s, 1.0 + s}) {
            const double g = std::abs(v.d2(r));
            if (g < e.value) e = {g, r};
        }
    }
    return e;
}

} // namespace

AssumptionReport check_assumptions(const ProfileView& v, int samples, int M, int k_min, int gap) {
    if (samples < 100) throw ValidationError("precondition_violation", "check_assumptions needs samples >= 100");
    if (k_min > M + 1) throw ValidationError("precondition_violation", "k_min must not exceed M+1");
    AssumptionReport rep;
    rep.k_min = k_min;
    rep.k_max = M + 1;
    rep.gap = gap;

    rep.gamma1_min = std::numeric_limits<double>::infinity();
    rep.gamma1_max = 0.0;
    rep.degeneracy_min = std::numeric_limits<double>::infinity();
    rep.degeneracy_max = 0.0;
    std::ostringstream why;
    for (int i = 1; i < samples; ++i) {
        const double r = 1.0 - v.delta + 2.0 * v.delta * i / samples;
        const double g1 = std::abs(v.d1(r));
        rep.gamma1_min = std::min(rep.gamma1_min, g1);
        rep.gamma1_max = std::max(rep.gamma1_max, g1);
        if (r == 1.0) continue;
        const double ratio = std::abs(v.d2(r)) / std::pow(std::abs(r - 1.0), v.beta);
        rep.degeneracy_min = std::min(rep.degeneracy_min, ratio);
        rep.degeneracy_max = std::max(rep.degeneracy_max, ratio);
    }
    if (rep.gamma1_min < 0.5 || rep.gamma1_max > 1.5) {
        rep.transversality_ok = false;
        why << "transversality: |gamma'| range [" << rep.gamma1_min << ", " << rep.gamma1_max << "]; ";
    }
    if (rep.degeneracy_min < 1.0 / 3.0 || rep.degeneracy_max > 3.0) {
        rep.degeneracy_ok = false;
        why << "degeneracy ratio range [" << rep.degeneracy_min << ", " << rep.degeneracy_max << "]; ";
    }

    const double outer_hi = std::min(std::ldexp(1.0, M + 3), v.delta);
    const int kmax = M + 1;
    const int nk = kmax - k_min + 1;
    std::vector<Extremum> inner(nk), outer(nk);
    std::vector<bool> has_outer(nk, false);
    for (int i = 0; i < nk; ++i) {
        const int k = k_min + i;
        inner[i] = sup_inner(v, std::min(std::ldexp(1.0, k + 2), v.delta), samples);
        const double lo = std::ldexp(1.0, k - 2);
        if (lo <= outer_hi) {
            outer[i] = inf_outer(v, lo, outer_hi, samples);
            has_outer[i] = true;
        }
    }
    auto holds = [&](int g, int* k1o, int* k2o) {
        for (int k2 = k_min + g; k2 <= kmax; ++k2) {
            const int i2 = k2 - k_min;
            if (!has_outer[i2]) continue;
            for (int k1 = k_min; k1 <= k2 - g; ++k1) {
                if (inner[k1 - k_min].value > outer[i2].value / 3.0) {
                    if (k1o) *k1o = k1;
                    if (k2o) *k2o = k2;
                    return false;
                }
            }
        }
        return true;
    };
    int k1 = 0, k2 = 0;
    if (!holds(gap, &k1, &k2)) {
        rep.comparison_ok = false;
        rep.offending_k1 = k1;
        rep.offending_k2 = k2;
        rep.offending_r1 = inner[k1 - k_min].at;
        rep.offending_r2 = outer[k2 - k_min].at;
        why << "comparison fails at k1=" << k1 << ", k2=" << k2 << " (r1=" << rep.offending_r1
            << ", r2=" << rep.offending_r2 << "); ";
    }
    for (int g = 1; g <= 24; ++g) {
        if (holds(g, nullptr, nullptr)) {
            rep.min_admissible_gap = g;
            break;
        }
    }
    rep.pass = rep.transversality_ok && rep.degeneracy_ok && rep.comparison_ok;
    rep.failure = why.str();
    return rep;
}

AssumptionReport check_assumptions(const DispersionProfile& p, int samples, int M, int k_min, int gap) {
    p.validate();
    return check_assumptions(make_view(p), samples, M, k_min, gap);
}

} // namespace degenlab
