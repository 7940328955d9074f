#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace degenlab {

using Vec2 = std::array<double, 2>;

enum class ProfileKind { model, gravity_capillary };

/**
 * Radial dispersion relation gamma with degeneracy order beta on the unit circle.
 *
 * model:             gamma(r) = r + |r-1|^(beta+2) / ((beta+1)(beta+2))
 * gravity_capillary: Lambda(r) = sqrt(g r + s r^3) rescaled so that the inflection
 *                    radius of Lambda sits at r = 1 and gamma(1) = 1.
 */
struct DispersionProfile {
    int beta = 1;
    double delta = 0.5;
    ProfileKind kind = ProfileKind::model;
    std::vector<double> params; // (g, sigma) for gravity_capillary

    static DispersionProfile model(int beta, double delta);
    static DispersionProfile gravity_capillary(double delta, double g = 1.0, double sigma = 1.0);

    // Throws ValidationError when the fields are inconsistent.
    void validate() const;
    // Radius where the unscaled gravity-capillary Lambda'' vanishes.
    double inflection_radius() const;
};

std::string to_string(ProfileKind k);
ProfileKind profile_kind_from_string(const std::string& s);

// Smooth even cutoff: 1 on |r| <= 1/2, 0 on |r| >= 3/4.
double chi(double r);

double gamma_eval(const DispersionProfile& p, double r, int order);

// gamma, gamma', gamma'' at once (model profile avoids repeated pow calls).
struct GammaJet {
    double g0, g1, g2;
};
GammaJet gamma_jet(const DispersionProfile& p, double r);

double h_symbol(const DispersionProfile& p, const Vec2& xi);
Vec2 grad_h(const DispersionProfile& p, const Vec2& xi);

// A(xi) = ||xi|-1|^(beta/2) chi(2^(1-M)(|xi|-1)); requires M <= -3 and 2^(M+4) < delta.
double null_symbol(const DispersionProfile& p, int M, const Vec2& xi);
double null_symbol_radial(const DispersionProfile& p, int M, double r);
void check_cutoff_level(const DispersionProfile& p, int M);

// kappa = gamma' gamma'' / (|xi| (1 + gamma'^2)^2)
double curvature_weight(const DispersionProfile& p, const Vec2& xi);

// Derivative access used by check_assumptions; tests may build one by hand.
struct ProfileView {
    int beta = 1;
    double delta = 0.5;
    std::function<double(double)> d1;
    std::function<double(double)> d2;
};
ProfileView make_view(const DispersionProfile& p);

struct AssumptionReport {
    bool pass = true;
    bool transversality_ok = true;
    bool degeneracy_ok = true;
    bool comparison_ok = true;
    double gamma1_min = 0, gamma1_max = 0;
    double degeneracy_min = 0, degeneracy_max = 0;
    int k_min = 0, k_max = 0, gap = 0;
    // smallest gap for which the comparison holds on the k-range (-1 if none up to 24)
    int min_admissible_gap = -1;
    // first offending sample, when a check fails
    std::string failure;
    double offending_r1 = 0, offending_r2 = 0;
    int offending_k1 = 0, offending_k2 = 0;
};

/**
 * Samples the annulus (1-delta, 1+delta) and checks transversality, the degeneracy
 * ratio, and the dyadic comparison |gamma''(r1)| <= |gamma''(r2)|/3 for
 * |r1-1| <= 2^(k1+2), 2^(k2-2) <= |r2-1| <= 2^(M+3), k1 <= k2 - gap.
 */
AssumptionReport check_assumptions(const ProfileView& v, int samples, int M, int k_min, int gap);
AssumptionReport check_assumptions(const DispersionProfile& p, int samples, int M, int k_min, int gap);

} // namespace degenlab
