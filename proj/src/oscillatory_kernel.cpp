#include "degenlab/oscillatory_kernel.hpp"

#include "degenlab/bessel.hpp"
#include "degenlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace degenlab {

namespace {

constexpr int kOrder = 10;
using cplx = std::complex<double>;

struct RadialRule {
    std::vector<double> r, f_re, f_im; // f = w chi_k^2 r e^{i t gamma} / 2pi
};

RadialRule build_rule(const DispersionProfile& p, int k, double t, double rho_max, long min_nodes, int refine) {
    const double w = std::ldexp(1.0, k);
    double g1max = 0.0;
    for (int i = 0; i <= 200; ++i) g1max = std::max(g1max, std::abs(gamma_jet(p, 1.0 - 3 * w + 6 * w * i / 200).g1));
    const double per_unit = std::max({8.0, 4.0 * std::abs(t) * g1max, 4.0 * rho_max});

    struct Seg {
        double a, b;
        int floor_panels;
    };
    // transition bands of chi_k get a fixed minimum resolution; plateau only the phase rule
    const std::vector<Seg> segs = {
        {-3 * w, -2 * w, 32},          {-2 * w, -3 * w / 32, 4}, {-3 * w / 32, -w / 16, 32},
        {w / 16, 3 * w / 32, 32},      {3 * w / 32, 2 * w, 4},   {2 * w, 3 * w, 32},
    };
    std::vector<long> panels(segs.size());
    long total = 0;
    for (std::size_t s = 0; s < segs.size(); ++s) {
        panels[s] = std::max<long>(segs[s].floor_panels, std::ceil((segs[s].b - segs[s].a) * per_unit)) * refine;
        total += panels[s] * kOrder;
    }
    if (total < min_nodes) {
        const long f = (min_nodes + total - 1) / total;
        for (auto& n : panels) n *= f;
    }

    const GaussRule& g = gauss_legendre(kOrder);
    RadialRule rule;
    for (std::size_t s = 0; s < segs.size(); ++s) {
        const double h = (segs[s].b - segs[s].a) / panels[s];
        for (long q = 0; q < panels[s]; ++q) {
            const double a = segs[s].a + q * h;
            for (int i = 0; i < kOrder; ++i) {
                const double r = 1.0 + a + 0.5 * h * (g.x[i] + 1.0);
                const double c = chi_k(k, r);
                const double amp = 0.5 * h * g.w[i] * c * c * r / (2.0 * std::numbers::pi);
                const double ph = t * gamma_jet(p, r).g0;
                rule.r.push_back(r);
                rule.f_re.push_back(amp * std::cos(ph));
                rule.f_im.push_back(amp * std::sin(ph));
            }
        }
    }
    return rule;
}

cplx eval_at(const RadialRule& rule, double rho) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < rule.r.size(); ++i) {
        const double j = bessel_j0(rule.r[i] * rho);
        re += rule.f_re[i] * j;
        im += rule.f_im[i] * j;
    }
    return {re, im};
}

} // namespace

double chi_k(int k, double r) {
    const double s = r - 1.0;
    return chi(std::ldexp(s, -k - 2)) - chi(std::ldexp(s, -k + 3));
}

long min_kernel_nodes(int k, double t) {
    return static_cast<long>(std::ceil(64.0 * std::max(1.0, std::abs(t) * std::ldexp(1.0, k))));
}

KernelResult kernel_eval(const KernelRequest& req, int refine) {
    req.profile.validate();
    if (req.nodes < min_kernel_nodes(req.k, req.t))
        throw ValidationError("node_budget", "quadrature nodes below 64 max(1, |t| 2^k)");
    if (refine < 1) throw ValidationError("node_budget", "refinement factor must be >= 1");
    double rho_max = 0.0;
    for (double rho : req.radii) {
        if (!(rho >= 0.0)) throw ValidationError("domain_error", "radii must be nonnegative");
        rho_max = std::max(rho_max, rho);
    }
    const RadialRule rule = build_rule(req.profile, req.k, req.t, rho_max, req.nodes, refine);
    KernelResult out;
    out.nodes_used = static_cast<long>(rule.r.size());
    out.values.resize(req.radii.size());
    const long n = static_cast<long>(req.radii.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (long i = 0; i < n; ++i) out.values[i] = eval_at(rule, req.radii[i]);
    return out;
}

KernelSup kernel_sup(const DispersionProfile& p, int k, double t, double rho_max, int rho_samples) {
    if (rho_samples < 512) throw ValidationError("precondition_violation", "kernel_sup needs rho_samples >= 512");
    if (rho_max < 4.0 * std::max(1.0, std::abs(t)))
        throw ValidationError("precondition_violation", "kernel_sup needs rho_max >= 4 max(1,|t|)");
    const RadialRule rule = build_rule(p, k, t, rho_max, min_kernel_nodes(k, t), 1);
    std::vector<double> mag(rho_samples);
    const double step = rho_max / (rho_samples - 1);
#pragma omp parallel for schedule(dynamic, 16)
    for (int i = 0; i < rho_samples; ++i) mag[i] = std::abs(eval_at(rule, i * step));
    const int b = static_cast<int>(std::max_element(mag.begin(), mag.end()) - mag.begin());

    KernelSup res{mag[b], b * step, static_cast<long>(rule.r.size())};
    double lo = std::max(0.0, (b - 1) * step), hi = std::min(rho_max, (b + 1) * step);
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    double f1 = std::abs(eval_at(rule, x1)), f2 = std::abs(eval_at(rule, x2));
    for (int it = 0; it < 60 && hi - lo > 1e-10 * (1.0 + hi); ++it) {
        if (f1 > f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = std::abs(eval_at(rule, x1));
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = std::abs(eval_at(rule, x2));
        }
    }
    if (f1 > res.sup) res = {f1, x1, res.nodes};
    if (f2 > res.sup) res = {f2, x2, res.nodes};
    return res;
}

KernelSup kernel_sup_default(const DispersionProfile& p, int k, double t) {
    const double rho_max = 4.0 * std::max(1.0, std::abs(t));
    const int samples = std::max(512, static_cast<int>(std::ceil(2.0 * rho_max)) + 1);
    return kernel_sup(p, k, t, rho_max, samples);
}

double normalized_c(const DispersionProfile& p, int k, double t, double sup) {
    return sup * std::abs(t) * std::pow(2.0, p.beta * k / 2.0);
}

DecayFits decay_fit(const DispersionProfile& p, int k_fixed, const std::vector<double>& t_values, double t_fixed,
                    const std::vector<int>& k_values) {
    if (t_values.size() < 4 || k_values.size() < 4)
        throw ValidationError("precondition_violation", "decay_fit needs >= 4 values in each range");
    auto checked_log = [](double s) {
        if (!(s > 1e-300) || !std::isfinite(s)) throw NumericalError("degenerate_fit", "kernel sup underflowed");
        return std::log2(s);
    };
    std::vector<double> x, y;
    for (double t : t_values) {
        x.push_back(std::log2(std::abs(t)));
        y.push_back(checked_log(kernel_sup_default(p, k_fixed, t).sup));
    }
    DecayFits out;
    out.t_fit = least_squares(x, y);
    x.clear();
    y.clear();
    for (int k : k_values) {
        x.push_back(k);
        y.push_back(checked_log(kernel_sup_default(p, k, t_fixed).sup));
    }
    out.k_fit = least_squares(x, y);
    return out;
}

} // namespace degenlab
