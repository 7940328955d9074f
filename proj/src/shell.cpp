#include "degenlab/shell.hpp"

#include "degenlab/error.hpp"
#include "degenlab/kernels.hpp"

#include <cmath>

namespace degenlab {

std::shared_ptr<const ShellSupport> ShellSupport::where_nonzero(const SpectralGrid& g, const SymbolSpec& s) {
    auto sup = std::make_shared<ShellSupport>();
    sup->grid = g;
    const std::vector<double> tab = symbol_table(g, s);
    for (std::size_t i = 0; i < tab.size(); ++i) {
        if (tab[i] != 0.0) {
            sup->index.push_back(i);
            sup->xi.push_back(g.xi(i));
        }
    }
    return sup;
}

std::vector<double> ShellSupport::table(const std::function<double(const Vec2&)>& f) const {
    std::vector<double> out(xi.size());
    for (std::size_t i = 0; i < xi.size(); ++i) out[i] = f(xi[i]);
    return out;
}

std::vector<double> ShellSupport::table(const SymbolSpec& s) const {
    return table([&s](const Vec2& x) { return s(x); });
}

std::vector<double> ShellSupport::h(const DispersionProfile& p) const {
    return table([&p](const Vec2& x) { return h_symbol(p, x); });
}

ShellField ShellField::restrict(std::shared_ptr<const ShellSupport> s, const Field& f) {
    if (!(f.grid == s->grid)) throw ValidationError("grid_mismatch", "support and field grids differ");
    const Field fr = as_frequency(f);
    ShellField out(std::move(s));
    for (std::size_t i = 0; i < out.c.size(); ++i) out.c[i] = fr.values[out.support->index[i]];
    return out;
}

Field ShellField::to_field(Rep rep) const {
    Field f(support->grid, Rep::frequency);
    for (std::size_t i = 0; i < c.size(); ++i) f.values[support->index[i]] = c[i];
    return rep == Rep::space ? to_space(f) : f;
}

double ShellField::l2() const {
    return std::sqrt(kernels::sum_abs_pow(c.data(), c.size(), 2.0) * support->grid.cell_area_freq());
}

double l2_distance(const ShellField& a, const ShellField& b) {
    const bool same = a.support == b.support ||
                      (a.support->grid == b.support->grid && a.support->index == b.support->index);
    if (!same) throw ValidationError("support_mismatch", "shell fields use different supports");
    return std::sqrt(kernels::sum_sq_diff(a.c.data(), b.c.data(), a.c.size()) * a.support->grid.cell_area_freq());
}

ShellField propagate_with(const std::vector<double>& h, const ShellField& f, double t) {
    ShellField out(f.support);
    kernels::apply_phase(out.c.data(), f.c.data(), h.data(), t, f.c.size());
    return out;
}

ShellField multiply(const std::vector<double>& tab, const ShellField& f) {
    ShellField out = f;
    kernels::multiply_real(out.c.data(), tab.data(), out.c.size());
    return out;
}

} // namespace degenlab
