#pragma once

#include "degenlab/profile.hpp"

#include <complex>
#include <cstddef>
#include <new>
#include <vector>

namespace degenlab {

using cd = std::complex<double>;

template <class T, std::size_t Align = 64>
struct AlignedAllocator {
    using value_type = T;
    AlignedAllocator() = default;
    template <class U>
    AlignedAllocator(const AlignedAllocator<U, Align>&) {}
    template <class U>
    struct rebind {
        using other = AlignedAllocator<U, Align>;
    };
    T* allocate(std::size_t n) {
        return static_cast<T*>(::operator new(n * sizeof(T), std::align_val_t(Align)));
    }
    void deallocate(T* p, std::size_t) { ::operator delete(p, std::align_val_t(Align)); }
    bool operator==(const AlignedAllocator&) const { return true; }
    bool operator!=(const AlignedAllocator&) const { return false; }
};

using CVec = std::vector<cd, AlignedAllocator<cd>>;

/**
 * Doubly periodic grid: N points per dimension on the torus of side 2 pi L,
 * frequency lattice Z^2 / L restricted to [-N/(2L), N/(2L))^2.
 */
struct SpectralGrid {
    int N = 0;
    double L = 0.0;

    void validate() const;
    double dx() const;
    double cell_area_space() const;
    double cell_area_freq() const { return 1.0 / (L * L); }
    double torus_area() const;
    // frequency of FFT-ordered index i
    double freq(int i) const { return (i < N / 2 ? i : i - N) / L; }
    double coord(int i) const { return i * dx(); }
    std::size_t size() const { return static_cast<std::size_t>(N) * N; }
    Vec2 xi(std::size_t idx) const { return {freq(static_cast<int>(idx / N)), freq(static_cast<int>(idx % N))}; }
    // Shell resolvability: 2^(k-2) >= 2/L
    bool resolves(int k) const;
    int min_resolvable_k() const;
    // supp P_{<=M} (||xi|-1| < 0.75 2^M) spans at least 2 lattice cells radially
    bool resolves_cutoff(int M) const;
    bool operator==(const SpectralGrid& o) const { return N == o.N && L == o.L; }
};

enum class Rep { space, frequency };

struct Field {
    SpectralGrid grid;
    Rep rep = Rep::space;
    CVec values;

    Field() = default;
    Field(const SpectralGrid& g, Rep r);
    static Field zeros(const SpectralGrid& g, Rep r) { return Field(g, r); }
};

// Unitary (continuum-normalized) transforms: hat f(xi) = (1/2pi) sum f(x) e^{-i x.xi} dx^2.
Field to_frequency(const Field& f);
Field to_space(const Field& f);
void to_frequency_inplace(Field& f);
void to_space_inplace(Field& f);
Field as_frequency(const Field& f); // converts only if needed
Field as_space(const Field& f);

// Values of a real function of xi on every lattice point (FFT order).
std::vector<double> symbol_table(const SpectralGrid& g, const std::function<double(const Vec2&)>& s);
std::vector<double> h_table(const DispersionProfile& p, const SpectralGrid& g);

Field propagate(const DispersionProfile& p, const Field& f, double t);
// Same, with a precomputed h table (repeated propagation on one grid).
Field propagate_with(const std::vector<double>& h, const Field& f, double t);

double lp_norm(const Field& f, double p);
// L2 norm from the frequency side: (sum |hat f|^2 / L^2)^(1/2)
double l2_norm_frequency(const Field& f);
double l2_distance(const Field& a, const Field& b);

} // namespace degenlab
