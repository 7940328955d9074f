#pragma once

#include "degenlab/field.hpp"
#include "degenlab/profile.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace degenlab {

// Polar angle in [0, 2 pi); the origin maps to 0.
double polar_angle(const Vec2& xi);

// Region {r_lo <= |xi| <= r_hi, theta in [th_lo, th_hi)} used for sampling supports.
struct PolarBox {
    double r_lo = 0, r_hi = 0, th_lo = 0, th_hi = 0;
};

/**
 * Fourier multiplier description. Dyadic symbols follow
 *   P_{<=k}(xi) = chi(2^-k (|xi|-1)),  P_k = P_{<=k} - P_{<=k-1} (k < 0),  P_0 = 1 - P_{<=-1}.
 */
struct SymbolSpec {
    enum class Tag {
        chi_leq_k,
        p_k,
        p_k_plus,
        p_k_minus,
        p_range,
        q_sector,
        r_subshell,
        t_sector,
        null_A,
        annular_sector,
        product,
        custom
    };

    Tag tag = Tag::custom;
    int k = 0, k_hi = 0;      // shells; p_range is P_{k < . <= k_hi}
    int m = 0, j = 0;         // q_sector
    int scale = 0, index = 0; // r_subshell
    int n_sectors = 0, i = 0; // t_sector
    int M = 0;                // null_A
    DispersionProfile profile;
    PolarBox box;             // annular_sector
    std::vector<SymbolSpec> factors;
    std::function<double(const Vec2&)> fn;
    std::string label;

    static SymbolSpec chi_leq(int k);
    static SymbolSpec p(int k);
    static SymbolSpec p_plus(int k);
    static SymbolSpec p_minus(int k);
    static SymbolSpec p_range(int k_lo, int k_hi);
    static SymbolSpec q(int m, int j);
    static SymbolSpec r_sub(int scale, int index);
    static SymbolSpec t(int n_sectors, int i);
    static SymbolSpec null_a(const DispersionProfile& prof, int M);
    static SymbolSpec sector(const PolarBox& b);
    static SymbolSpec product(std::vector<SymbolSpec> fs);
    static SymbolSpec custom(std::function<double(const Vec2&)> f, std::string label = "custom");

    double operator()(const Vec2& xi) const;
    bool is_indicator() const;
    // Polar box containing the support, when it is known in closed form.
    std::optional<PolarBox> support_box() const;
    std::string describe() const;
};

double p_leq_radial(int k, double r);
double p_shell_radial(int k, double r);

Field apply_symbol(const SymbolSpec& s, const Field& f);
// With a precomputed table of symbol values.
Field apply_table(const std::vector<double>& table, const Field& f);
std::vector<double> symbol_table(const SpectralGrid& g, const SymbolSpec& s);

} // namespace degenlab
