#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <numbers>
#include <span>
#include <vector>

namespace fraclps {

using cplx = std::complex<double>;

/**
 * Uniform periodic grid on the torus [0, L)^dim.
 *
 * Points are x_j = j L / N componentwise, j in {0, ..., N-1}^dim, stored in
 * row-major order (last axis fastest).
 */
struct GridSpec {
    int dim = 1;
    int n = 64;
    double period = 2.0 * std::numbers::pi;

    /// Validating factory: dim in {1, 2}, n a power of two >= 8, period > 0.
    static GridSpec make(int dim, int n, double period = 2.0 * std::numbers::pi);

    std::size_t points() const;
    double spacing() const { return period / n; }
    /// Lebesgue measure of one grid cell, (L/N)^dim.
    double cell_measure() const;
    /// Total measure L^dim.
    double volume() const;

    /// Signed wavenumber of FFT index j: j for j < N/2, j - N otherwise.
    int wavenumber(int j) const { return j < n / 2 ? j : j - n; }
    /// Euclidean norm |xi_k| of the frequency at flat spectral index.
    double frequency_norm(std::size_t index) const;
    /// Coordinates of the flat point index (size dim).
    void coordinates(std::size_t index, std::span<double> out) const;

    double min_frequency() const { return 2.0 * std::numbers::pi / period; }
    double max_frequency() const;

    bool operator==(const GridSpec&) const = default;
};

/// Finite-dimensional stand-in for the value space: scalars or l^r_m.
struct BanachSpec {
    enum class Kind { Scalar, Sequence };

    Kind kind = Kind::Scalar;
    int m = 1;
    double r = 2.0;  // +infinity allowed

    static BanachSpec scalar() { return {}; }
    static BanachSpec sequence(int m, double r);

    int dimension() const { return kind == Kind::Scalar ? 1 : m; }
    double norm(std::span<const cplx> v) const;

    bool operator==(const BanachSpec&) const = default;
};

/**
 * Sampled B-valued function on a periodic grid.  Values are laid out as
 * [point][coordinate]; a Field is never mutated after construction.
 */
class Field {
public:
    Field(GridSpec grid, BanachSpec banach);
    Field(GridSpec grid, BanachSpec banach, std::vector<cplx> values);

    using Sampler = std::function<void(std::span<const double> x, std::span<cplx> out)>;
    static Field sample(GridSpec grid, BanachSpec banach, const Sampler& fn);

    const GridSpec& grid() const { return grid_; }
    const BanachSpec& banach() const { return banach_; }
    std::size_t points() const { return grid_.points(); }
    int components() const { return banach_.dimension(); }

    std::span<const cplx> values() const { return values_; }
    std::span<const cplx> at(std::size_t point) const {
        return {values_.data() + point * components(), static_cast<std::size_t>(components())};
    }
    cplx operator()(std::size_t point, int coord = 0) const {
        return values_[point * components() + coord];
    }
    /// Pointwise value-space norm ||f(x_j)||_B.
    double norm_at(std::size_t point) const { return banach_.norm(at(point)); }

    friend Field operator+(const Field& a, const Field& b);
    friend Field operator-(const Field& a, const Field& b);
    friend Field operator*(cplx c, const Field& a);

private:
    GridSpec grid_;
    BanachSpec banach_;
    std::vector<cplx> values_;
};

/// Fourier coefficients in FFT index order, same layout as Field.
class Spectrum {
public:
    Spectrum(GridSpec grid, BanachSpec banach, std::vector<cplx> coefficients);

    const GridSpec& grid() const { return grid_; }
    const BanachSpec& banach() const { return banach_; }
    int components() const { return banach_.dimension(); }
    std::span<const cplx> coefficients() const { return coeffs_; }

    /// Coefficient at signed wavenumber vector k (size dim), coordinate c.
    cplx coefficient(std::span<const int> k, int coord = 0) const;

    /// L^dim * sum_k |f^(k)|^2 (Euclidean over coordinates).
    double parseval_energy() const;

private:
    GridSpec grid_;
    BanachSpec banach_;
    std::vector<cplx> coeffs_;
};

Spectrum forward_transform(const Field& f);
Field inverse_transform(const Spectrum& s);

/// Multiply every Fourier mode by mult(|xi_k|) (same factor for all coordinates).
Field apply_multiplier(const Field& f, const std::function<cplx(double)>& mult);
Field apply_multiplier(const Spectrum& s, const std::function<cplx(double)>& mult);

/// Bochner-Lebesgue norm with the Lebesgue weight (L/N)^dim; p may be +inf.
double lp_norm(const Field& f, double p);

/// Discrete L^2 energy (L/N)^dim sum_j |f(x_j)|^2, Euclidean over coordinates.
double l2_energy(const Field& f);

/// ||a - b||_2 / ||b||_2, or ||a||_2 when b vanishes.
double relative_l2_distance(const Field& a, const Field& b);

/// Projection onto the fixed points of the Poisson semigroup: the mean.
Field e0_project(const Field& f);

/// Spectral interpolation onto a grid with twice as many points per axis.
Field refine_grid(const Field& f);

/// Smallest and largest nonzero |xi_k| carried by the spectrum; falls back to the
/// grid band when the field has no nonconstant content.
struct Band {
    double min;
    double max;
};
Band spectral_band(const Field& f, double rel_threshold = 1e-13);

/**
 * Random trigonometric polynomial: every coordinate gets coefficients with
 * real and imaginary parts uniform in [-1, 1] on 0 < max_i |k_i| <= k_max, and
 * `mean` on k = 0. With `real` the spectrum is Hermitian, so values are real.
 * Deterministic in `seed`.
 */
Field random_band_limited(const GridSpec& grid, const BanachSpec& banach, int k_max, std::uint64_t seed,
                          bool real = false, double mean = 0.0);

// CSV: header `x[,y],re_0,im_0,...`, row-major grid order, 17 significant digits.
void write_field_csv(std::ostream& os, const Field& f);
/// Reads a field CSV; grid and component count are inferred, r is the l^r exponent.
Field read_field_csv(std::istream& is, double r = 2.0);

}  // namespace fraclps
