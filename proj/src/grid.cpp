#include "fraclps/grid.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <random>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "fraclps/errors.hpp"
#include "csv.hpp"
#include "fft.hpp"

namespace fraclps {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

void require_same_layout(const Field& a, const Field& b) {
    if (!(a.grid() == b.grid()) || a.components() != b.components()) {
        throw std::invalid_argument("field layouts differ");
    }
}

}  // namespace

// ---------------------------------------------------------------- GridSpec

GridSpec GridSpec::make(int dim, int n, double period) {
    if (dim != 1 && dim != 2) throw std::invalid_argument("grid dim must be 1 or 2");
    if (!is_power_of_two(n) || n < 8) {
        throw std::invalid_argument("grid points per axis must be a power of two >= 8");
    }
    if (!(period > 0.0) || !std::isfinite(period)) {
        throw std::invalid_argument("grid period must be positive");
    }
    return GridSpec{dim, n, period};
}

std::size_t GridSpec::points() const {
    return dim == 1 ? static_cast<std::size_t>(n) : static_cast<std::size_t>(n) * n;
}

double GridSpec::cell_measure() const { return std::pow(spacing(), dim); }

double GridSpec::volume() const { return std::pow(period, dim); }

double GridSpec::frequency_norm(std::size_t index) const {
    const double unit = 2.0 * std::numbers::pi / period;
    if (dim == 1) return unit * std::abs(wavenumber(static_cast<int>(index)));
    const int k0 = wavenumber(static_cast<int>(index / n));
    const int k1 = wavenumber(static_cast<int>(index % n));
    return unit * std::sqrt(static_cast<double>(k0) * k0 + static_cast<double>(k1) * k1);
}

void GridSpec::coordinates(std::size_t index, std::span<double> out) const {
    const double h = spacing();
    if (dim == 1) {
        out[0] = static_cast<double>(index) * h;
    } else {
        out[0] = static_cast<double>(index / n) * h;
        out[1] = static_cast<double>(index % n) * h;
    }
}

double GridSpec::max_frequency() const {
    return std::sqrt(static_cast<double>(dim)) * std::numbers::pi * n / period;
}

// ---------------------------------------------------------------- BanachSpec

BanachSpec BanachSpec::sequence(int m, double r) {
    if (m < 1) throw std::invalid_argument("sequence space dimension must be >= 1");
    if (!(r >= 1.0)) throw std::invalid_argument("sequence space exponent r must be in [1, inf]");
    return BanachSpec{Kind::Sequence, m, r};
}

double BanachSpec::norm(std::span<const cplx> v) const {
    if (v.size() == 1) return std::abs(v[0]);
    // Integer exponents 2 and 4 go through |z|^2 directly unless the sum leaves
    // the safe range.
    if (r == 2.0 || r == 4.0) {
        double acc = 0.0;
        if (r == 2.0) {
            for (const auto& z : v) acc += std::norm(z);
        } else {
            for (const auto& z : v) {
                const double n2 = std::norm(z);
                acc += n2 * n2;
            }
        }
        if (acc > 1e-250 && acc < 1e250) return r == 2.0 ? std::sqrt(acc) : std::sqrt(std::sqrt(acc));
        if (acc == 0.0) return 0.0;
    }
    double peak = 0.0;
    for (const auto& z : v) peak = std::max(peak, std::abs(z));
    if (std::isinf(r) || peak == 0.0) return peak;
    // Scaled by the peak so large exponents do not overflow.
    double acc = 0.0;
    for (const auto& z : v) acc += std::pow(std::abs(z) / peak, r);
    return peak * std::pow(acc, 1.0 / r);
}

// ---------------------------------------------------------------- Field

Field::Field(GridSpec grid, BanachSpec banach)
    : grid_(grid), banach_(banach), values_(grid.points() * banach.dimension()) {}

Field::Field(GridSpec grid, BanachSpec banach, std::vector<cplx> values)
    : grid_(grid), banach_(banach), values_(std::move(values)) {
    if (values_.size() != grid_.points() * banach_.dimension()) {
        throw std::invalid_argument("field value count does not match grid and value space");
    }
    for (const auto& z : values_) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            throw std::invalid_argument("field values must be finite");
        }
    }
}

Field Field::sample(GridSpec grid, BanachSpec banach, const Sampler& fn) {
    const int m = banach.dimension();
    std::vector<cplx> values(grid.points() * m);
    double x[2] = {0.0, 0.0};
    for (std::size_t j = 0; j < grid.points(); ++j) {
        grid.coordinates(j, {x, static_cast<std::size_t>(grid.dim)});
        fn({x, static_cast<std::size_t>(grid.dim)}, {values.data() + j * m, static_cast<std::size_t>(m)});
    }
    return Field(grid, banach, std::move(values));
}

Field operator+(const Field& a, const Field& b) {
    require_same_layout(a, b);
    std::vector<cplx> out(a.values_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.values_[i] + b.values_[i];
    return Field(a.grid_, a.banach_, std::move(out));
}

Field operator-(const Field& a, const Field& b) {
    require_same_layout(a, b);
    std::vector<cplx> out(a.values_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.values_[i] - b.values_[i];
    return Field(a.grid_, a.banach_, std::move(out));
}

Field operator*(cplx c, const Field& a) {
    std::vector<cplx> out(a.values_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = c * a.values_[i];
    return Field(a.grid_, a.banach_, std::move(out));
}

// ---------------------------------------------------------------- Spectrum

Spectrum::Spectrum(GridSpec grid, BanachSpec banach, std::vector<cplx> coefficients)
    : grid_(grid), banach_(banach), coeffs_(std::move(coefficients)) {
    if (coeffs_.size() != grid_.points() * banach_.dimension()) {
        throw std::invalid_argument("spectrum coefficient count does not match grid");
    }
}

cplx Spectrum::coefficient(std::span<const int> k, int coord) const {
    const int n = grid_.n;
    auto wrap = [n](int kk) {
        if (kk < -n / 2 || kk >= n / 2) throw std::out_of_range("wavenumber outside the grid band");
        return kk < 0 ? kk + n : kk;
    };
    std::size_t idx = wrap(k[0]);
    if (grid_.dim == 2) idx = idx * n + wrap(k[1]);
    return coeffs_[idx * components() + coord];
}

double Spectrum::parseval_energy() const {
    double acc = 0.0;
    for (const auto& c : coeffs_) acc += std::norm(c);
    return grid_.volume() * acc;
}

Spectrum forward_transform(const Field& f) {
    std::vector<cplx> data(f.values().begin(), f.values().end());
    const auto& g = f.grid();
    detail::dft(data, g.dim, g.n, f.components(), detail::Direction::Forward);
    const double scale = 1.0 / static_cast<double>(g.points());
    for (auto& c : data) c *= scale;
    return Spectrum(g, f.banach(), std::move(data));
}

Field inverse_transform(const Spectrum& s) {
    std::vector<cplx> data(s.coefficients().begin(), s.coefficients().end());
    const auto& g = s.grid();
    detail::dft(data, g.dim, g.n, s.components(), detail::Direction::Backward);
    return Field(g, s.banach(), std::move(data));
}

Field apply_multiplier(const Spectrum& s, const std::function<cplx(double)>& mult) {
    const auto& g = s.grid();
    const int m = s.components();
    std::vector<cplx> data(s.coefficients().begin(), s.coefficients().end());
    for (std::size_t k = 0; k < g.points(); ++k) {
        const cplx factor = mult(g.frequency_norm(k));
        for (int c = 0; c < m; ++c) data[k * m + c] *= factor;
    }
    return inverse_transform(Spectrum(g, s.banach(), std::move(data)));
}

Field apply_multiplier(const Field& f, const std::function<cplx(double)>& mult) {
    return apply_multiplier(forward_transform(f), mult);
}

// ---------------------------------------------------------------- norms

double lp_norm(const Field& f, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm requires p >= 1");
    const std::size_t n = f.points();
    if (std::isinf(p)) {
        double peak = 0.0;
        for (std::size_t j = 0; j < n; ++j) peak = std::max(peak, f.norm_at(j));
        return peak;
    }
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += std::pow(f.norm_at(j), p);
    return std::pow(f.grid().cell_measure() * acc, 1.0 / p);
}

double l2_energy(const Field& f) {
    double acc = 0.0;
    for (const auto& z : f.values()) acc += std::norm(z);
    return f.grid().cell_measure() * acc;
}

double relative_l2_distance(const Field& a, const Field& b) {
    const double diff = std::sqrt(l2_energy(a - b));
    const double ref = std::sqrt(l2_energy(b));
    return ref > 0.0 ? diff / ref : diff;
}

Field e0_project(const Field& f) {
    const int m = f.components();
    std::vector<cplx> mean(m);
    for (std::size_t j = 0; j < f.points(); ++j) {
        for (int c = 0; c < m; ++c) mean[c] += f(j, c);
    }
    for (auto& z : mean) z /= static_cast<double>(f.points());
    std::vector<cplx> out(f.values().size());
    for (std::size_t j = 0; j < f.points(); ++j) {
        for (int c = 0; c < m; ++c) out[j * m + c] = mean[c];
    }
    return Field(f.grid(), f.banach(), std::move(out));
}

Field refine_grid(const Field& f) {
    const auto& g = f.grid();
    const GridSpec fine{g.dim, 2 * g.n, g.period};
    const int m = f.components();
    const Spectrum s = forward_transform(f);
    const auto coarse = s.coefficients();
    std::vector<cplx> data(fine.points() * m);

    // The Nyquist mode is split evenly between +N/2 and -N/2 so that real
    // fields stay real.
    auto targets = [&](int j) {
        const int k = g.wavenumber(j);
        std::vector<std::pair<int, double>> out;
        if (k == -g.n / 2) {
            out.push_back({fine.n - g.n / 2, 0.5});
            out.push_back({g.n / 2, 0.5});
        } else {
            out.push_back({k < 0 ? k + fine.n : k, 1.0});
        }
        return out;
    };
    if (g.dim == 1) {
        for (int j = 0; j < g.n; ++j) {
            for (auto [fj, w] : targets(j)) {
                for (int c = 0; c < m; ++c) data[fj * m + c] += w * coarse[j * m + c];
            }
        }
    } else {
        for (int j0 = 0; j0 < g.n; ++j0) {
            for (int j1 = 0; j1 < g.n; ++j1) {
                for (auto [f0, w0] : targets(j0)) {
                    for (auto [f1, w1] : targets(j1)) {
                        const std::size_t src = (static_cast<std::size_t>(j0) * g.n + j1) * m;
                        const std::size_t dst = (static_cast<std::size_t>(f0) * fine.n + f1) * m;
                        for (int c = 0; c < m; ++c) data[dst + c] += w0 * w1 * coarse[src + c];
                    }
                }
            }
        }
    }
    return inverse_transform(Spectrum(fine, f.banach(), std::move(data)));
}

Band spectral_band(const Field& f, double rel_threshold) {
    const Spectrum s = forward_transform(f);
    const auto& g = f.grid();
    const int m = f.components();
    double peak = 0.0;
    for (const auto& c : s.coefficients()) peak = std::max(peak, std::abs(c));
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (std::size_t k = 1; k < g.points(); ++k) {
        double mag = 0.0;
        for (int c = 0; c < m; ++c) mag = std::max(mag, std::abs(s.coefficients()[k * m + c]));
        if (mag > rel_threshold * peak && mag > 0.0) {
            const double xi = g.frequency_norm(k);
            lo = std::min(lo, xi);
            hi = std::max(hi, xi);
        }
    }
    if (hi == 0.0) return {g.min_frequency(), g.max_frequency()};
    return {lo, hi};
}

// ---------------------------------------------------------------- random fields

Field random_band_limited(const GridSpec& grid, const BanachSpec& banach, int k_max, std::uint64_t seed, bool real,
                          double mean) {
    if (k_max < 1 || k_max >= grid.n / 2) throw std::invalid_argument("random field needs 1 <= k_max < N/2");
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    std::mt19937_64 rng(z ^ (z >> 31));
    auto unit = [&] { return 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0; };

    const int n = grid.n;
    const int m = banach.dimension();
    auto negated = [&](std::size_t j) {
        if (grid.dim == 1) return (n - j) % n;
        const std::size_t a = j / n, b = j % n;
        return ((n - a) % n) * n + (n - b) % n;
    };
    std::vector<cplx> coeffs(grid.points() * m);
    for (std::size_t j = 0; j < grid.points(); ++j) {
        int kmax_here = std::abs(grid.wavenumber(static_cast<int>(grid.dim == 1 ? j : j / n)));
        if (grid.dim == 2) kmax_here = std::max(kmax_here, std::abs(grid.wavenumber(static_cast<int>(j % n))));
        if (kmax_here > k_max) continue;
        for (int c = 0; c < m; ++c) {
            if (j == 0) {
                coeffs[c] = mean;
                continue;
            }
            const std::size_t jn = negated(j);
            if (real && jn < j) {
                coeffs[j * m + c] = std::conj(coeffs[jn * m + c]);
            } else {
                coeffs[j * m + c] = cplx(unit(), unit());
            }
        }
    }
    const Field f = inverse_transform(Spectrum(grid, banach, std::move(coeffs)));
    if (!real) return f;
    std::vector<cplx> vals(f.values().size());
    for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = f.values()[i].real();
    return Field(grid, banach, std::move(vals));
}

// ---------------------------------------------------------------- CSV

using detail::fmt17;
using detail::parse_double;
using detail::split_csv;

void write_field_csv(std::ostream& os, const Field& f) {
    const auto& g = f.grid();
    const int m = f.components();
    os << (g.dim == 1 ? "x" : "x,y");
    for (int c = 0; c < m; ++c) os << ",re_" << c << ",im_" << c;
    os << '\n';
    double x[2] = {0.0, 0.0};
    for (std::size_t j = 0; j < g.points(); ++j) {
        g.coordinates(j, {x, static_cast<std::size_t>(g.dim)});
        os << fmt17(x[0]);
        if (g.dim == 2) os << ',' << fmt17(x[1]);
        for (int c = 0; c < m; ++c) {
            os << ',' << fmt17(f(j, c).real()) << ',' << fmt17(f(j, c).imag());
        }
        os << '\n';
    }
}

Field read_field_csv(std::istream& is, double r) {
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(is, line)) throw InputError("line 1: missing header");
    const auto header = split_csv(line);
    int dim = 0;
    if (!header.empty() && header[0] == "x") dim = 1;
    if (header.size() > 1 && header[1] == "y") dim = 2;
    if (dim == 0) throw InputError("line 1: header must start with x");
    const std::size_t value_cols = header.size() - dim;
    if (value_cols == 0 || value_cols % 2 != 0) {
        throw InputError("line 1: expected re_c,im_c column pairs");
    }
    const int m = static_cast<int>(value_cols / 2);
    for (int c = 0; c < m; ++c) {
        if (header[dim + 2 * c] != "re_" + std::to_string(c) ||
            header[dim + 2 * c + 1] != "im_" + std::to_string(c)) {
            throw InputError("line 1: unexpected column name '" + header[dim + 2 * c] + "'");
        }
    }

    std::vector<double> coords;
    std::vector<cplx> values;
    std::vector<std::size_t> row_line;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto tok = split_csv(line);
        if (tok.size() != header.size()) {
            throw InputError("line " + std::to_string(line_no) + ": expected " +
                             std::to_string(header.size()) + " columns, got " +
                             std::to_string(tok.size()));
        }
        row_line.push_back(line_no);
        for (int d = 0; d < dim; ++d) coords.push_back(parse_double(tok[d], line_no));
        for (int c = 0; c < m; ++c) {
            values.emplace_back(parse_double(tok[dim + 2 * c], line_no),
                                parse_double(tok[dim + 2 * c + 1], line_no));
        }
    }
    const std::size_t rows = values.size() / m;
    if (rows < 2) throw InputError("line " + std::to_string(line_no) + ": too few rows");
    int n = dim == 1 ? static_cast<int>(rows) : static_cast<int>(std::lround(std::sqrt(rows)));
    if (dim == 2 && static_cast<std::size_t>(n) * n != rows) {
        throw InputError("2-d field must have N*N rows");
    }
    if (n < 8 || (n & (n - 1)) != 0) {
        throw InputError("row count must give a power-of-two grid with N >= 8");
    }
    // Period from the first-axis spacing: x_j = j L / N.
    const std::size_t stride = dim == 1 ? 1 : static_cast<std::size_t>(n);
    const double h = coords[stride * dim] - coords[0];
    if (!(h > 0.0)) throw InputError("grid coordinates must increase along x");
    const GridSpec grid = GridSpec::make(dim, n, h * n);
    for (std::size_t j = 0; j < rows; ++j) {
        double expected[2];
        grid.coordinates(j, {expected, static_cast<std::size_t>(dim)});
        for (int d = 0; d < dim; ++d) {
            if (std::abs(coords[j * dim + d] - expected[d]) > 1e-9 * grid.period) {
                throw InputError("line " + std::to_string(row_line[j]) + ": coordinate off the uniform grid");
            }
        }
    }
    const BanachSpec banach = m == 1 ? BanachSpec::scalar() : BanachSpec::sequence(m, r);
    return Field(grid, banach, std::move(values));
}

}  // namespace fraclps
