#pragma once

#include "degenlab/field.hpp"
#include "degenlab/symbols.hpp"

#include <memory>
#include <vector>

namespace degenlab {

/**
 * Fixed set of frequency lattice points (typically an annulus around |xi| = 1).
 * Fields whose spectrum lives on the set are stored compressed as ShellField.
 */
struct ShellSupport {
    SpectralGrid grid;
    std::vector<std::size_t> index; // FFT-ordered lattice index
    std::vector<Vec2> xi;

    // Lattice points where the symbol is nonzero.
    static std::shared_ptr<const ShellSupport> where_nonzero(const SpectralGrid& g, const SymbolSpec& s);
    std::size_t size() const { return index.size(); }
    std::vector<double> table(const std::function<double(const Vec2&)>& f) const;
    std::vector<double> table(const SymbolSpec& s) const;
    std::vector<double> h(const DispersionProfile& p) const;
};

struct ShellField {
    std::shared_ptr<const ShellSupport> support;
    std::vector<cd> c; // frequency coefficients on the support

    ShellField() = default;
    explicit ShellField(std::shared_ptr<const ShellSupport> s) : support(std::move(s)), c(support->size()) {}

    // Restriction of a field to the support (values off the support are dropped).
    static ShellField restrict(std::shared_ptr<const ShellSupport> s, const Field& f);
    Field to_field(Rep rep = Rep::frequency) const;
    double l2() const;
};

double l2_distance(const ShellField& a, const ShellField& b);
ShellField propagate_with(const std::vector<double>& h_on_support, const ShellField& f, double t);
ShellField multiply(const std::vector<double>& table_on_support, const ShellField& f);

} // namespace degenlab
