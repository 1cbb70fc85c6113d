#include "fraclps/squarefuncs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "fraclps/errors.hpp"
#include "fraclps/hilbert.hpp"
#include "fraclps/parallel.hpp"
#include "fraclps/quadrature.hpp"
#include "fraclps/semigroup.hpp"

namespace fraclps {

namespace {

constexpr double pi = std::numbers::pi;

void require_q(double q) {
    if (!(q > 1.0) || !std::isfinite(q)) throw std::invalid_argument("square function exponent q must be in (1, inf)");
}

void require_lambda(double lambda) {
    if (!(lambda > 1.0) || !std::isfinite(lambda)) throw std::invalid_argument("g* needs lambda > 1");
}

using Profiles = std::vector<std::vector<double>>;  // [time node][point]

// ||t^alpha D^alpha P_t f(x)||^q at every node and point.
Profiles integrand_profiles(const Field& f, double alpha, double q, const TimeGrid& tg) {
    Profiles h(tg.count());
    const Spectrum spec = forward_transform(f);
    parallel_for(h.size(), [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            const Field d = scaled_frac_derivative(spec, tg.nodes()[i], alpha);
            std::vector<double> row(d.points());
            for (std::size_t p = 0; p < row.size(); ++p) {
                const double v = d.norm_at(p);
                row[p] = q == 2.0 ? v * v : std::pow(v, q);
            }
            h[i] = std::move(row);
        }
    });
    return h;
}

// Splits a flat index into per-axis indices.
void unflatten(const GridSpec& g, std::size_t k, int* out) {
    for (int a = g.dim - 1; a >= 0; --a) {
        out[a] = static_cast<int>(k % g.n);
        k /= g.n;
    }
}

// Flat index of x - d (mod N componentwise).
inline std::size_t shifted(const GridSpec& g, std::size_t x, std::size_t d) {
    if (g.dim == 1) return (x + g.n - d) % g.n;
    const std::size_t n = g.n;
    return ((x / n + n - d / n) % n) * n + (x % n + n - d % n) % n;
}

struct Pointwise {
    std::vector<double> total;
    std::vector<double> ends;  // endpoint (t_min, t_max) contributions
};

// sum_i w_i t_i^{-n} sum_d W_i(d) H_i(x - d), with the t endpoints tracked separately.
Pointwise spatial_integral(const GridSpec& g, const Profiles& h, const TimeGrid& tg,
                           const std::vector<OffsetWeights>& weights) {
    const std::size_t np = g.points();
    Pointwise out{std::vector<double>(np, 0.0), std::vector<double>(np, 0.0)};
    const std::size_t last = h.size() - 1;
    parallel_for(np, [&](std::size_t b, std::size_t e) {
        for (std::size_t p = b; p < e; ++p) {
            double acc = 0.0, ends = 0.0;
            for (std::size_t i = 0; i < h.size(); ++i) {
                const OffsetWeights& w = weights[i];
                const std::vector<double>& hi = h[i];
                double s = 0.0;
                for (std::size_t k = 0; k < w.offset.size(); ++k) s += w.weight[k] * hi[shifted(g, p, w.offset[k])];
                const double c = tg.weights()[i] * s / std::pow(tg.nodes()[i], g.dim);
                acc += c;
                if (i == 0 || i == last) ends += c;
            }
            out.total[p] = acc;
            out.ends[p] = ends;
        }
    });
    return out;
}

bool truncated(const Pointwise& pw) {
    for (std::size_t p = 0; p < pw.total.size(); ++p) {
        if (pw.total[p] > 0.0 && pw.ends[p] > 1e-8 * pw.total[p]) return true;
    }
    return false;
}

SquareFunctionReport make_report(SquareFunctionReport::Kind kind, const Field& f, FracOrder ord, double q,
                                 const TimeGrid& tg) {
    SquareFunctionReport rep;
    rep.kind = kind;
    rep.grid = f.grid();
    rep.alpha = ord.alpha;
    rep.q = q;
    rep.t_min = tg.t_min();
    rep.t_max = tg.t_max();
    rep.count = tg.count();
    rep.wide_cone_flag = kind != SquareFunctionReport::Kind::G && tg.t_max() > 0.5 * f.grid().period;
    return rep;
}

std::vector<double> root(const std::vector<double>& v, double q) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::pow(std::max(v[i], 0.0), 1.0 / q);
    return out;
}

// ---------------------------------------------------------------- cell weights

// Integral of (t / (t + |u|))^lambda over [a, b], 0 <= a <= b.
double gstar_1d_positive(double a, double b, double t, double lambda) {
    if (b <= a) return 0.0;
    const double e = lambda - 1.0;
    const double head = std::exp(-e * std::log1p(a / t));
    return t / e * head * -std::expm1(-e * std::log((b + t) / (a + t)));
}

double gstar_1d(double a, double b, double t, double lambda) {
    if (a >= 0.0) return gstar_1d_positive(a, b, t, lambda);
    if (b <= 0.0) return gstar_1d_positive(-b, -a, t, lambda);
    return gstar_1d_positive(0.0, -a, t, lambda) + gstar_1d_positive(0.0, b, t, lambda);
}

// Area of the disk of radius r intersected with [0, a] x [0, b], a, b >= 0.
double disk_corner(double a, double b, double r) {
    a = std::min(a, r);
    b = std::min(b, r);
    if (a * a + b * b <= r * r) return a * b;
    auto G = [r](double u) {
        const double s = std::sqrt(std::max(0.0, r * r - u * u));
        return 0.5 * (u * s + r * r * std::asin(std::min(1.0, u / r)));
    };
    const double us = std::sqrt(std::max(0.0, r * r - b * b));
    return b * us + G(a) - G(us);
}

double signed_corner(double x, double y, double r) {
    const double s = (x < 0.0 ? -1.0 : 1.0) * (y < 0.0 ? -1.0 : 1.0);
    return s * disk_corner(std::abs(x), std::abs(y), r);
}

double disk_rect(double x0, double x1, double y0, double y1, double r) {
    return signed_corner(x1, y1, r) - signed_corner(x0, y1, r) - signed_corner(x1, y0, r) +
           signed_corner(x0, y0, r);
}

const QuadratureRule& gl4() {
    static const QuadratureRule rule = gauss_legendre(4);
    return rule;
}

// Integral of (t / (t + |u|))^{2 lambda} over a rectangle, subdividing near the origin.
// Integral of (1 + |u|/t)^{-power} over [0, a] x [0, b] in polar coordinates;
// the radial part is closed form, the angle integral smooth on each side of
// the corner direction.
double gstar_2d_corner(double a, double b, double t, double power) {
    if (a <= 0.0 || b <= 0.0) return 0.0;
    static const QuadratureRule rule = gauss_legendre(24);
    auto radial = [&](double R) {
        const double v = 1.0 + R / t;
        return t * t * ((std::pow(v, 2.0 - power) - 1.0) / (2.0 - power) - (std::pow(v, 1.0 - power) - 1.0) / (1.0 - power));
    };
    const double split = std::atan2(b, a);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double th1 = 0.5 * split * (1.0 + rule.nodes[i]);
        acc += 0.5 * split * rule.weights[i] * radial(a / std::cos(th1));
        const double th2 = split + 0.5 * (0.5 * pi - split) * (1.0 + rule.nodes[i]);
        acc += 0.5 * (0.5 * pi - split) * rule.weights[i] * radial(b / std::sin(th2));
    }
    return acc;
}

double gstar_2d_rect(double x0, double x1, double y0, double y1, double t, double power, int depth) {
    if (x0 <= 0.0 && x1 >= 0.0 && y0 <= 0.0 && y1 >= 0.0) {
        return gstar_2d_corner(x1, y1, t, power) + gstar_2d_corner(-x0, y1, t, power) +
               gstar_2d_corner(x1, -y0, t, power) + gstar_2d_corner(-x0, -y0, t, power);
    }
    const double size = std::max(x1 - x0, y1 - y0);
    const double dx = std::max({0.0, x0, -x1});
    const double dy = std::max({0.0, y0, -y1});
    const double dist = std::hypot(dx, dy);
    if (size > 0.25 * (dist + t) && depth < 48) {
        const double xm = 0.5 * (x0 + x1), ym = 0.5 * (y0 + y1);
        return gstar_2d_rect(x0, xm, y0, ym, t, power, depth + 1) +
               gstar_2d_rect(xm, x1, y0, ym, t, power, depth + 1) +
               gstar_2d_rect(x0, xm, ym, y1, t, power, depth + 1) +
               gstar_2d_rect(xm, x1, ym, y1, t, power, depth + 1);
    }
    const QuadratureRule& r = gl4();
    const double hx = 0.5 * (x1 - x0), hy = 0.5 * (y1 - y0);
    const double cx = 0.5 * (x0 + x1), cy = 0.5 * (y0 + y1);
    double acc = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
        for (std::size_t j = 0; j < r.nodes.size(); ++j) {
            const double u = std::hypot(cx + hx * r.nodes[i], cy + hy * r.nodes[j]);
            acc += r.weights[i] * r.weights[j] * std::exp(-power * std::log1p(u / t));
        }
    }
    return acc * hx * hy;
}

// Image range k with [lo + kL, hi + kL] meeting [-reach, reach].
void image_range(double lo, double hi, double period, double reach, int& k0, int& k1) {
    k0 = static_cast<int>(std::ceil((-reach - hi) / period));
    k1 = static_cast<int>(std::floor((reach - lo) / period));
}

}  // namespace

// ---------------------------------------------------------------- public API

double SquareFunctionReport::max() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, v);
    return m;
}

const char* kind_name(SquareFunctionReport::Kind kind) {
    switch (kind) {
        case SquareFunctionReport::Kind::G: return "g";
        case SquareFunctionReport::Kind::Area: return "area";
        default: return "gstar";
    }
}

double OffsetWeights::total() const {
    double s = 0.0;
    for (double w : weight) s += w;
    return s;
}

double unit_ball_volume(int dim) {
    if (dim == 1) return 2.0;
    if (dim == 2) return pi;
    throw std::invalid_argument("unit ball volume: dim must be 1 or 2");
}

TimeGrid square_time_grid(Band band, double q, double alpha_lo, double alpha_hi) {
    require_q(q);
    if (!(alpha_lo > 0.0) || !(alpha_hi >= alpha_lo)) throw std::invalid_argument("bad order range");
    const TimeGrid lo = TimeGrid::for_band(band, q * alpha_lo, q);
    const TimeGrid hi = TimeGrid::for_band(band, q * alpha_hi, q);
    const double t_min = std::min(lo.t_min(), hi.t_min());
    const double t_max = std::max(lo.t_max(), hi.t_max());
    const double step = std::min(lo.log_step(), hi.log_step());
    const int count = static_cast<int>(std::ceil(std::log(t_max / t_min) / step)) + 1;
    return TimeGrid(t_min, t_max, count);
}

TimeGrid square_time_grid(const Field& f, double q, double alpha) {
    return square_time_grid(spectral_band(f), q, alpha);
}

OffsetWeights cone_weights(const GridSpec& g, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("cone weights need t > 0");
    const double h = g.spacing();
    const double L = g.period;
    OffsetWeights w;
    if (g.dim == 1) {
        for (int j = 0; j < g.n; ++j) {
            const double lo = j * h - 0.5 * h;
            int k0, k1;
            image_range(lo, lo + h, L, t, k0, k1);
            double acc = 0.0;
            for (int k = k0; k <= k1; ++k) {
                const double a = std::max(lo + k * L, -t);
                const double b = std::min(lo + h + k * L, t);
                if (b > a) acc += b - a;
            }
            if (acc > 0.0) {
                w.offset.push_back(static_cast<std::size_t>(j));
                w.weight.push_back(acc);
            }
        }
        return w;
    }
    for (int i = 0; i < g.n; ++i) {
        const double xlo = i * h - 0.5 * h;
        int kx0, kx1;
        image_range(xlo, xlo + h, L, t, kx0, kx1);
        for (int j = 0; j < g.n; ++j) {
            const double ylo = j * h - 0.5 * h;
            int ky0, ky1;
            image_range(ylo, ylo + h, L, t, ky0, ky1);
            double acc = 0.0;
            for (int kx = kx0; kx <= kx1; ++kx) {
                for (int ky = ky0; ky <= ky1; ++ky) {
                    const double x0 = xlo + kx * L, y0 = ylo + ky * L;
                    acc += disk_rect(x0, x0 + h, y0, y0 + h, t);
                }
            }
            if (acc > 0.0) {
                w.offset.push_back(static_cast<std::size_t>(i) * g.n + j);
                w.weight.push_back(acc);
            }
        }
    }
    return w;
}

OffsetWeights gstar_weights(const GridSpec& g, double t, double lambda) {
    if (!(t > 0.0)) throw std::invalid_argument("g* weights need t > 0");
    require_lambda(lambda);
    const double h = g.spacing();
    const double L = g.period;
    const std::size_t np = g.points();
    OffsetWeights w;
    w.offset.resize(np);
    w.weight.assign(np, 0.0);
    double exact = 0.0;
    if (g.dim == 1) {
        const int K = static_cast<int>(std::ceil(8.0 + 8.0 * t / L));
        for (int j = 0; j < g.n; ++j) {
            const double lo = j * h - 0.5 * h;
            double acc = 0.0;
            for (int k = -K; k <= K; ++k) acc += gstar_1d(lo + k * L, lo + h + k * L, t, lambda);
            w.offset[j] = static_cast<std::size_t>(j);
            w.weight[j] = acc;
        }
        exact = 2.0 * t / (lambda - 1.0);
    } else {
        const int K = static_cast<int>(std::ceil(2.0 + 3.0 * t / L));
        const double power = 2.0 * lambda;
        parallel_for(np, [&](std::size_t b, std::size_t e) {
            for (std::size_t p = b; p < e; ++p) {
                const int i = static_cast<int>(p / g.n), j = static_cast<int>(p % g.n);
                const double xlo = i * h - 0.5 * h, ylo = j * h - 0.5 * h;
                double acc = 0.0;
                for (int kx = -K; kx <= K; ++kx) {
                    for (int ky = -K; ky <= K; ++ky) {
                        const double x0 = xlo + kx * L, y0 = ylo + ky * L;
                        acc += gstar_2d_rect(x0, x0 + h, y0, y0 + h, t, power, 0);
                    }
                }
                w.offset[p] = p;
                w.weight[p] = acc;
            }
        });
        exact = 2.0 * pi * t * t / ((2.0 * lambda - 2.0) * (2.0 * lambda - 1.0));
    }
    // Images beyond K: their mass, spread evenly over the cells.
    const double rest = std::max(0.0, exact - w.total());
    for (auto& v : w.weight) v += rest / static_cast<double>(np);
    return w;
}

namespace {

// Cone slices averaged against each node's hat function in log t. The slice
// mass is piecewise linear in t with kinks at cell edges; averaging makes the
// t-quadrature exact for integrands linear between nodes.
std::vector<OffsetWeights> averaged_cone_weights(const GridSpec& g, const TimeGrid& tg) {
    constexpr int sub = 16;
    const int count = tg.count();
    const double step = tg.log_step();
    std::vector<OffsetWeights> out(count);
    parallel_for(static_cast<std::size_t>(count), [&](std::size_t b, std::size_t e) {
        std::vector<double> dense(g.points());
        for (std::size_t i = b; i < e; ++i) {
            std::fill(dense.begin(), dense.end(), 0.0);
            const double si = std::log(tg.nodes()[i]);
            double norm = 0.0;
            for (int side : {-1, 1}) {
                if ((side < 0 && i == 0) || (side > 0 && i + 1 == static_cast<std::size_t>(count))) continue;
                for (int k = 0; k < sub; ++k) {
                    const double u = (k + 0.5) / sub;
                    const double hat = 1.0 - u;
                    const double ds = side * u * step;
                    const OffsetWeights w = cone_weights(g, std::exp(si + ds));
                    const double scale = hat * std::exp(-g.dim * ds);
                    for (std::size_t j = 0; j < w.offset.size(); ++j) dense[w.offset[j]] += scale * w.weight[j];
                    norm += hat;
                }
            }
            OffsetWeights& w = out[i];
            for (std::size_t p = 0; p < dense.size(); ++p) {
                if (dense[p] > 0.0) {
                    w.offset.push_back(p);
                    w.weight.push_back(dense[p] / norm);
                }
            }
        }
    });
    return out;
}

}  // namespace

SquareFunctionReport g_function(const Field& f, FracOrder ord, double q, const TimeGrid& tg) {
    require_q(q);
    SquareFunctionReport rep = make_report(SquareFunctionReport::Kind::G, f, ord, q, tg);
    const Profiles h = integrand_profiles(f, ord.alpha, q, tg);
    const std::size_t np = f.points();
    std::vector<double> acc(np, 0.0), ends(np, 0.0);
    const std::size_t last = h.size() - 1;
    for (std::size_t i = 0; i < h.size(); ++i) {
        const double w = tg.weights()[i];
        for (std::size_t p = 0; p < np; ++p) {
            const double c = w * h[i][p];
            acc[p] += c;
            if (i == 0 || i == last) ends[p] += c;
        }
    }
    rep.truncation_flag = truncated({acc, ends});
    rep.values = root(acc, q);
    return rep;
}

SquareFunctionReport area_function(const Field& f, FracOrder ord, double q, const TimeGrid& tg) {
    require_q(q);
    SquareFunctionReport rep = make_report(SquareFunctionReport::Kind::Area, f, ord, q, tg);
    const Profiles h = integrand_profiles(f, ord.alpha, q, tg);
    Pointwise pw = spatial_integral(f.grid(), h, tg, averaged_cone_weights(f.grid(), tg));
    // The averaged rule is second order with a smooth error expansion: one
    // Richardson step against every other node.
    const int last_even = (tg.count() - 1) & ~1;
    if (last_even >= 4) {
        const TimeGrid coarse(tg.t_min(), tg.nodes()[last_even], last_even / 2 + 1);
        Profiles hc;
        for (int i = 0; i <= last_even; i += 2) hc.push_back(h[i]);
        const Pointwise pc = spatial_integral(f.grid(), hc, coarse, averaged_cone_weights(f.grid(), coarse));
        for (std::size_t p = 0; p < pw.total.size(); ++p) {
            pw.total[p] = std::max(0.0, (4.0 * pw.total[p] - pc.total[p]) / 3.0);
        }
    }
    rep.truncation_flag = truncated(pw);
    rep.values = root(pw.total, q);
    return rep;
}

SquareFunctionReport gstar_function(const Field& f, FracOrder ord, double q, double lambda, const TimeGrid& tg) {
    require_q(q);
    require_lambda(lambda);
    SquareFunctionReport rep = make_report(SquareFunctionReport::Kind::GStar, f, ord, q, tg);
    rep.lambda = lambda;
    const Profiles h = integrand_profiles(f, ord.alpha, q, tg);
    std::vector<OffsetWeights> w(tg.count());
    for (int i = 0; i < tg.count(); ++i) w[i] = gstar_weights(f.grid(), tg.nodes()[i], lambda);
    const Pointwise pw = spatial_integral(f.grid(), h, tg, w);
    rep.truncation_flag = truncated(pw);
    rep.values = root(pw.total, q);
    return rep;
}

double lp_norm(const GridSpec& grid, const std::vector<double>& values, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : values) m = std::max(m, std::abs(v));
        return m;
    }
    double acc = 0.0;
    for (double v : values) acc += std::pow(std::abs(v), p);
    return std::pow(grid.cell_measure() * acc, 1.0 / p);
}

// ---------------------------------------------------------------- checks

double StabilityReport::relative_change() const {
    const double scale = std::max(std::abs(value), std::abs(value_refined));
    return scale > 0.0 ? std::abs(value_refined - value) / scale : 0.0;
}

BetaGammaReport check_beta_gamma_comparison(const Field& f, double beta, double gamma, double q,
                                            const TimeGrid& tg, double slack) {
    if (!(beta > 0.0) || !(gamma > beta)) throw std::invalid_argument("need 0 < beta < gamma");
    BetaGammaReport rep;
    rep.constant = std::exp(std::lgamma(beta) - std::lgamma(gamma));
    const SquareFunctionReport gb = g_function(f, FracOrder::of(beta), q, tg);
    const SquareFunctionReport gg = g_function(f, FracOrder::of(gamma), q, tg);
    for (std::size_t p = 0; p < gb.values.size(); ++p) {
        const double lhs = gb.values[p];
        const double rhs = rep.constant * gg.values[p];
        if (gg.values[p] > 0.0) rep.max_ratio = std::max(rep.max_ratio, lhs / gg.values[p]);
        if (lhs > rhs * (1.0 + slack)) rep.violations.push_back({p, lhs, rhs});
    }
    return rep;
}

namespace {

double max_g_over_S(const Field& f, FracOrder ord, double q, const TimeGrid& tg) {
    const SquareFunctionReport g = g_function(f, ord, q, tg);
    const SquareFunctionReport s = area_function(f, ord, q, tg);
    const double floor = 1e-12 * s.max();
    double worst = 0.0;
    for (std::size_t p = 0; p < g.values.size(); ++p) {
        if (s.values[p] > floor && s.values[p] > 0.0) worst = std::max(worst, g.values[p] / s.values[p]);
    }
    return worst;
}

}  // namespace

StabilityReport check_g_le_S(const Field& f, FracOrder ord, double q, const TimeGrid& tg) {
    StabilityReport rep;
    rep.value = max_g_over_S(f, ord, q, tg);
    rep.value_refined = max_g_over_S(refine_grid(f), ord, q, tg.refined());
    rep.stable = std::isfinite(rep.value) && rep.relative_change() <= 0.1;
    return rep;
}

double check_Lq_identity(const Field& f, FracOrder ord, double q, const TimeGrid& tg) {
    const SquareFunctionReport g = g_function(f, ord, q, tg);
    const SquareFunctionReport s = area_function(f, ord, q, tg);
    const double lhs = std::pow(lp_norm(f.grid(), s.values, q), q);
    const double rhs = unit_ball_volume(f.grid().dim) * std::pow(lp_norm(f.grid(), g.values, q), q);
    if (rhs == 0.0) return lhs == 0.0 ? 0.0 : 1.0;
    return std::abs(lhs - rhs) / rhs;
}

ChainReport check_S_le_gstar(const Field& f, FracOrder ord, double q, double lambda, const TimeGrid& tg,
                             double slack) {
    const SquareFunctionReport s = area_function(f, ord, q, tg);
    const SquareFunctionReport gs = gstar_function(f, ord, q, lambda, tg);
    const double c = std::pow(2.0, lambda * f.grid().dim / q);
    ChainReport rep;
    for (std::size_t p = 0; p < s.values.size(); ++p) {
        const double rhs = c * gs.values[p];
        if (rhs > 0.0) rep.max_ratio = std::max(rep.max_ratio, s.values[p] / rhs);
        if (s.values[p] > rhs * (1.0 + slack) + 1e-10 * c * gs.max()) rep.violations.push_back({p, s.values[p], rhs});
    }
    return rep;
}

PolarizationResult check_polarization(const Field& f, const Field& g, FracOrder ord, const TimeGrid& tg,
                                      double tolerance) {
    if (f.banach().kind != BanachSpec::Kind::Scalar || g.banach().kind != BanachSpec::Kind::Scalar) {
        throw std::invalid_argument("polarization needs scalar fields");
    }
    if (!(f.grid() == g.grid())) throw std::invalid_argument("polarization fields must share a grid");
    const double alpha = ord.alpha;
    const double norm = std::exp(alpha * std::log(4.0) - std::lgamma(2.0 * alpha));

    // Certify: the per-mode integral int (t xi)^{2 alpha} e^{-2 t xi} dt/t = Gamma(2 alpha) / 4^alpha.
    const Band bf = spectral_band(f), bg = spectral_band(g);
    const double lo = std::min(bf.min, bg.min), hi = std::max(bf.max, bg.max);
    double worst = 0.0;
    for (int k = 0; k < 16; ++k) {
        const double xi = lo * std::pow(hi / lo, k / 15.0);
        double acc = 0.0;
        for (int i = 0; i < tg.count(); ++i) {
            const double s = tg.nodes()[i] * xi;
            acc += tg.weights()[i] * std::exp(2.0 * alpha * std::log(s) - 2.0 * s);
        }
        worst = std::max(worst, std::abs(norm * acc - 1.0));
    }
    if (worst > tolerance) {
        std::ostringstream msg;
        msg << "polarization: time grid reproduces the per-mode Gamma integral only to " << worst;
        throw AccuracyError(msg.str());
    }

    PolarizationResult res;
    const double cell = f.grid().cell_measure();
    const Field fc = f - e0_project(f);
    const Field gc = g - e0_project(g);
    for (std::size_t p = 0; p < f.points(); ++p) res.lhs += fc(p) * std::conj(gc(p));
    res.lhs *= cell;

    std::vector<cplx> per_t(tg.count());
    parallel_for(per_t.size(), [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            const Field a = scaled_frac_derivative(f, tg.nodes()[i], alpha);
            const Field c = scaled_frac_derivative(g, tg.nodes()[i], alpha);
            cplx s = 0.0;
            for (std::size_t p = 0; p < a.points(); ++p) s += a(p) * std::conj(c(p));
            per_t[i] = s;
        }
    });
    for (int i = 0; i < tg.count(); ++i) res.rhs += tg.weights()[i] * per_t[i];
    res.rhs *= norm * cell;
    const double scale = std::sqrt(l2_energy(fc) * l2_energy(gc));
    res.residual = scale > 0.0 ? std::abs(res.lhs - res.rhs) / scale : std::abs(res.lhs - res.rhs);
    return res;
}

IterationGrids iteration_grids(Band band, int k, double q) {
    if (k < 1) throw std::invalid_argument("iteration identity needs k >= 1");
    require_q(q);
    return {TimeGrid::for_band(band, k * q, q), TimeGrid::for_band(band, q, q),
            TimeGrid::for_band(band, (k + 1) * q, q)};
}

IterationResult check_iteration_identity(const Field& f, int k, double q, const IterationGrids& grids,
                                         double tolerance) {
    if (k < 1) throw std::invalid_argument("iteration identity needs k >= 1");
    require_q(q);
    const double beta = std::exp(std::lgamma(k * q) + std::lgamma(q) - std::lgamma((k + 1) * q));

    // Certify on single modes at the ends of the band.
    const Band band = spectral_band(f);
    for (double xi : {band.min, band.max}) {
        auto moment = [&](const TimeGrid& tg, double a) {
            double acc = 0.0;
            for (int i = 0; i < tg.count(); ++i) {
                const double t = tg.nodes()[i];
                acc += tg.weights()[i] * std::exp(a * std::log(t) - q * xi * t);
            }
            return acc;
        };
        const double dbl = moment(grids.t, k * q) * moment(grids.s, q);
        const double sgl = beta * moment(grids.u, (k + 1) * q);
        const double exact = beta * std::exp(std::lgamma((k + 1) * q) - (k + 1) * q * std::log(q * xi));
        const double err = std::max(std::abs(dbl - exact), std::abs(sgl - exact)) / exact;
        if (err > tolerance) {
            std::ostringstream msg;
            msg << "iteration identity: time grids reproduce the single-mode integrals only to " << err;
            throw AccuracyError(msg.str());
        }
    }

    const int m = k + 1;
    auto power_norm = [&](double u) { return std::pow(lp_norm(poisson_derivative_integer(f, u, m), q), q); };

    IterationResult res;
    const int nt = grids.t.count(), ns = grids.s.count();
    std::vector<double> rows(nt, 0.0);
    parallel_for(static_cast<std::size_t>(nt), [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            const double t = grids.t.nodes()[i];
            double acc = 0.0;
            for (int j = 0; j < ns; ++j) {
                const double s = grids.s.nodes()[j];
                acc += grids.s.weights()[j] * std::pow(s, q) * power_norm(t + s);
            }
            rows[i] = grids.t.weights()[i] * std::pow(t, k * q) * acc;
        }
    });
    for (double r : rows) res.double_integral += r;

    std::vector<double> single(grids.u.count(), 0.0);
    parallel_for(single.size(), [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            const double u = grids.u.nodes()[i];
            single[i] = grids.u.weights()[i] * std::pow(u, m * q) * power_norm(u);
        }
    });
    for (double v : single) res.single_integral += v;
    res.single_integral *= beta;
    if (res.single_integral == 0.0) {
        res.residual = res.double_integral == 0.0 ? 0.0 : 1.0;
    } else {
        res.residual = std::abs(res.double_integral - res.single_integral) / res.single_integral;
    }
    return res;
}

IterationResult check_iteration_identity(const Field& f, int k, double q) {
    return check_iteration_identity(f, k, q, iteration_grids(spectral_band(f), k, q));
}

std::vector<double> gstar_average_sup(const Field& h, double lambda, const TimeGrid& tg) {
    require_lambda(lambda);
    if (h.banach().kind != BanachSpec::Kind::Scalar) throw std::invalid_argument("h must be scalar");
    const GridSpec& g = h.grid();
    const std::size_t np = g.points();
    std::vector<double> vals(np);
    for (std::size_t p = 0; p < np; ++p) {
        const cplx v = h(p);
        if (v.imag() != 0.0 || !(v.real() >= 0.0)) throw std::invalid_argument("h must be real and nonnegative");
        vals[p] = v.real();
    }
    std::vector<OffsetWeights> w(tg.count());
    for (int i = 0; i < tg.count(); ++i) w[i] = gstar_weights(g, tg.nodes()[i], lambda);
    std::vector<double> out(np, 0.0);
    parallel_for(np, [&](std::size_t b, std::size_t e) {
        for (std::size_t p = b; p < e; ++p) {
            double best = 0.0;
            for (int i = 0; i < tg.count(); ++i) {
                double s = 0.0;
                for (std::size_t k = 0; k < w[i].offset.size(); ++k) {
                    s += w[i].weight[k] * vals[shifted(g, p, w[i].offset[k])];
                }
                best = std::max(best, s / std::pow(tg.nodes()[i], g.dim));
            }
            out[p] = best;
        }
    });
    return out;
}

namespace {

// Each cell split into 2^dim equal cells carrying the same value.
Field split_cells(const Field& h) {
    const GridSpec& g = h.grid();
    const GridSpec fine = GridSpec::make(g.dim, 2 * g.n, g.period);
    std::vector<cplx> vals(fine.points());
    int xi[2] = {0, 0};
    for (std::size_t p = 0; p < fine.points(); ++p) {
        unflatten(fine, p, xi);
        std::size_t q = 0;
        for (int a = 0; a < g.dim; ++a) q = q * g.n + static_cast<std::size_t>(xi[a] / 2);
        vals[p] = h(q);
    }
    return Field(fine, h.banach(), std::move(vals));
}

double max_domination_ratio(const Field& h, double lambda, const TimeGrid& tg) {
    const std::vector<double> lhs = gstar_average_sup(h, lambda, tg);
    std::vector<double> vals(h.points());
    for (std::size_t p = 0; p < vals.size(); ++p) vals[p] = h(p).real();
    const std::vector<double> mh = periodic_maximal(h.grid(), vals);
    double worst = 0.0;
    for (std::size_t p = 0; p < vals.size(); ++p) {
        if (mh[p] > 0.0) worst = std::max(worst, lhs[p] / mh[p]);
    }
    return worst;
}

}  // namespace

StabilityReport check_maximal_domination(const Field& h, double lambda, const TimeGrid& tg) {
    StabilityReport rep;
    rep.value = max_domination_ratio(h, lambda, tg);
    rep.value_refined = max_domination_ratio(split_cells(h), lambda, tg.refined());
    rep.stable = std::isfinite(rep.value) && rep.relative_change() <= 0.1;
    return rep;
}

StabilityReport check_gstar_norm_comparison(const Field& f, FracOrder ord, double q, double lambda, double p,
                                            const TimeGrid& tg) {
    if (!(p >= q)) throw std::invalid_argument("norm comparison needs p >= q");
    auto ratio = [&](const Field& u, const TimeGrid& grid) {
        const double gn = lp_norm(u.grid(), g_function(u, ord, q, grid).values, p);
        const double sn = lp_norm(u.grid(), gstar_function(u, ord, q, lambda, grid).values, p);
        return gn > 0.0 ? sn / gn : 0.0;
    };
    StabilityReport rep;
    rep.value = ratio(f, tg);
    rep.value_refined = ratio(refine_grid(f), tg.refined());
    rep.stable = std::isfinite(rep.value) && rep.relative_change() <= 0.1;
    return rep;
}

// ---------------------------------------------------------------- output

namespace {

void put(std::ostream& os, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf;
}

}  // namespace

void write_report_csv(std::ostream& os, const SquareFunctionReport& rep) {
    os << (rep.grid.dim == 1 ? "x" : "x,y") << ",value\n";
    double x[2];
    for (std::size_t p = 0; p < rep.values.size(); ++p) {
        rep.grid.coordinates(p, {x, static_cast<std::size_t>(rep.grid.dim)});
        for (int a = 0; a < rep.grid.dim; ++a) {
            put(os, x[a]);
            os << ',';
        }
        put(os, rep.values[p]);
        os << '\n';
    }
}

void write_report_sidecar(std::ostream& os, const SquareFunctionReport& rep) {
    auto line = [&](const char* key, double v) {
        os << key << '=';
        put(os, v);
        os << '\n';
    };
    os << "kind=" << kind_name(rep.kind) << '\n';
    line("alpha", rep.alpha);
    line("q", rep.q);
    if (rep.kind == SquareFunctionReport::Kind::GStar) line("lambda", rep.lambda);
    line("aperture", rep.aperture);
    line("t_min", rep.t_min);
    line("t_max", rep.t_max);
    os << "count=" << rep.count << '\n';
    os << "truncation_flag=" << (rep.truncation_flag ? 1 : 0) << '\n';
    os << "wide_cone_flag=" << (rep.wide_cone_flag ? 1 : 0) << '\n';
}

}  // namespace fraclps
