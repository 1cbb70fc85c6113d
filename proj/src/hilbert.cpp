#include "fraclps/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <string>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "csv.hpp"
#include "fraclps/errors.hpp"
#include "fraclps/parallel.hpp"

namespace fraclps {

// ---------------------------------------------------------------- LineSample

LineSample::LineSample(double half_width, int intervals, BanachSpec banach)
    : LineSample(half_width, intervals, banach,
                 std::vector<cplx>(static_cast<std::size_t>(intervals + 1) * banach.dimension())) {}

LineSample::LineSample(double half_width, int intervals, BanachSpec banach, std::vector<cplx> values)
    : half_width_(half_width), half_(intervals / 2), banach_(banach), values_(std::move(values)) {
    if (!(half_width > 0.0)) throw std::invalid_argument("line sample half width must be positive");
    if (intervals < 4 || intervals % 2 != 0) {
        throw std::invalid_argument("line sample needs an even number (>= 4) of intervals");
    }
    if (values_.size() != size() * static_cast<std::size_t>(components())) {
        throw std::invalid_argument("line sample value count does not match the grid");
    }
    for (const auto& v : values_) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw std::invalid_argument("line sample values must be finite");
        }
    }
}

LineSample LineSample::sample(double half_width, int intervals, BanachSpec banach, const Sampler& fn) {
    LineSample probe(half_width, intervals, banach);
    const int m = banach.dimension();
    std::vector<cplx> vals(probe.size() * m);
    for (std::size_t i = 0; i < probe.size(); ++i) {
        fn(probe.x(i), {vals.data() + i * m, static_cast<std::size_t>(m)});
    }
    return LineSample(half_width, intervals, banach, std::move(vals));
}

std::vector<double> LineSample::norms() const {
    std::vector<double> out(size());
    for (std::size_t i = 0; i < size(); ++i) out[i] = norm_at(i);
    return out;
}

bool LineSample::support_margin_ok() const {
    const double edge = 0.75 * half_width_;
    for (std::size_t i = 0; i < size(); ++i) {
        if (std::abs(x(i)) > edge) {
            for (const auto& v : at(i)) {
                if (v != cplx(0.0)) return false;
            }
        }
    }
    return true;
}

LineSample hilbert_test_field(int index, double half_width, int intervals) {
    if (index < 0 || index > 9) throw std::invalid_argument("hilbert test field index must be in 0..9");
    const double c = 0.6 * std::sin(static_cast<double>(index));
    const double s = 1.5 + 0.2 * index;
    const double w = 2.0 + 1.5 * index;
    auto bump = [](double u) { return std::abs(u) < 1.0 ? std::exp(-1.0 / (1.0 - u * u)) : 0.0; };
    const bool vec = index >= 8;
    const BanachSpec banach = vec ? BanachSpec::sequence(2, 2.0) : BanachSpec::scalar();
    return LineSample::sample(half_width, intervals, banach, [&](double x, std::span<cplx> out) {
        const double b = bump((x - c) / s);
        out[0] = b * std::cos(w * x + index);
        if (vec) out[1] = b * std::sin(0.5 * w * x);
    });
}

LineSample gaussian_line_sample(double half_width, int intervals) {
    return LineSample::sample(half_width, intervals, BanachSpec::scalar(), [](double x, std::span<cplx> out) {
        out[0] = std::abs(x) <= 4.0 ? std::exp(-2.0 * x * x) : 0.0;
    });
}

// ---------------------------------------------------------------- CutoffPhi

double CutoffPhi::operator()(double u) const {
    if (u <= lo) return 0.0;
    if (u >= hi) return 1.0;
    const double s = (u - lo) / (hi - lo);
    return s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}

double CutoffPhi::derivative(double u) const {
    if (u <= lo || u >= hi) return 0.0;
    const double s = (u - lo) / (hi - lo);
    return 30.0 * s * s * (1.0 - s) * (1.0 - s) / (hi - lo);
}

// ---------------------------------------------------------------- truncated sums

namespace {

using idx = std::ptrdiff_t;

struct Support {
    idx lo = 0;
    idx hi = -1;
};

Support support_of(const LineSample& f) {
    Support s;
    const idx n = static_cast<idx>(f.size());
    for (idx i = 0; i < n; ++i) {
        for (const auto& v : f.at(i)) {
            if (v != cplx(0.0)) {
                if (s.hi < s.lo) s.lo = i;
                s.hi = i;
                break;
            }
        }
    }
    return s;
}

// Smallest d >= 1 with d h > eps (strict) or d h >= eps.
idx first_beyond(double eps, double h, bool strict) {
    idx d = static_cast<idx>(std::floor(eps / h));
    d = std::max<idx>(d - 1, 1);
    while (strict ? !(d * h > eps) : !(d * h >= eps)) ++d;
    return d;
}

/**
 * Per point i, left(c) = sum_{d >= c} v_{i-d} / d and right(c) = sum_{d >= c} v_{i+d} / d
 * for every cut c (strictly decreasing), accumulated segment by segment in
 * descending d. Keeping the sides apart makes mirror symmetry exact.
 */
class SuffixEngine {
public:
    SuffixEngine(const LineSample& f) : f_(f), s_(support_of(f)), m_(f.components()) {}

    bool empty() const { return s_.hi < s_.lo; }

    void run(idx i, int c, const std::vector<idx>& cuts, std::vector<cplx>& left,
             std::vector<cplx>& right) const {
        left.assign(cuts.size(), cplx(0.0));
        right.assign(cuts.size(), cplx(0.0));
        if (empty()) return;
        const idx top = static_cast<idx>(f_.size()) + 1;
        cplx l = 0.0;
        cplx r = 0.0;
        idx upper = top;
        for (std::size_t k = 0; k < cuts.size(); ++k) {
            l += side_sum(i, c, cuts[k], upper, -1);
            r += side_sum(i, c, cuts[k], upper, +1);
            left[k] = l;
            right[k] = r;
            upper = cuts[k] - 1;
        }
    }

    // sum over d in [d0, d1], descending, of weight(d) v_{i + sign d} / d.
    template <typename W>
    cplx weighted(idx i, int c, idx d0, idx d1, int sign, W&& weight) const {
        idx a, b;
        range(i, d0, d1, sign, a, b);
        cplx acc = 0.0;
        const auto v = f_.values();
        for (idx d = b; d >= a; --d) {
            const double w = weight(d);
            if (w != 0.0) acc += v[(i + sign * d) * m_ + c] * (w / static_cast<double>(d));
        }
        return acc;
    }

private:
    void range(idx i, idx d0, idx d1, int sign, idx& a, idx& b) const {
        if (sign < 0) {  // i - d in [lo, hi]
            a = std::max(d0, i - s_.hi);
            b = std::min(d1, i - s_.lo);
        } else {  // i + d in [lo, hi]
            a = std::max(d0, s_.lo - i);
            b = std::min(d1, s_.hi - i);
        }
        a = std::max<idx>(a, 1);
    }

    cplx side_sum(idx i, int c, idx d0, idx d1, int sign) const {
        idx a, b;
        range(i, d0, d1, sign, a, b);
        cplx acc = 0.0;
        const auto v = f_.values();
        for (idx d = b; d >= a; --d) acc += v[(i + sign * d) * m_ + c] / static_cast<double>(d);
        return acc;
    }

    const LineSample& f_;
    Support s_;
    int m_;
};

void check_eps(const LineSample& f, double eps) {
    if (!(eps >= 2.0 * f.step() * (1.0 - 1e-12))) {
        throw std::invalid_argument("truncation eps must be at least two grid steps");
    }
}

std::vector<double> sorted_desc(std::span<const double> eps) {
    std::vector<double> e(eps.begin(), eps.end());
    std::sort(e.begin(), e.end(), std::greater<>());
    return e;
}

}  // namespace

LineSample truncated_hilbert(const LineSample& f, double eps) {
    check_eps(f, eps);
    const SuffixEngine eng(f);
    const int m = f.components();
    const std::vector<idx> cuts{first_beyond(eps, f.step(), true)};
    std::vector<cplx> out(f.size() * m);
    parallel_for(f.size(), [&](std::size_t b, std::size_t e) {
        std::vector<cplx> l, r;
        for (std::size_t i = b; i < e; ++i) {
            for (int c = 0; c < m; ++c) {
                eng.run(static_cast<idx>(i), c, cuts, l, r);
                out[i * m + c] = l[0] - r[0];
            }
        }
    });
    return LineSample(f.half_width(), f.intervals(), f.banach(), std::move(out));
}

std::vector<double> default_eps_grid(const LineSample& f, int per_octave) {
    if (per_octave < 1) throw std::invalid_argument("eps grid needs at least one point per octave");
    std::vector<double> eps;
    const double top = 2.0 * f.half_width();
    const double floor_eps = 2.0 * f.step();
    for (int k = 0;; ++k) {
        const double e = top * std::exp2(-static_cast<double>(k) / per_octave);
        if (e < floor_eps * (1.0 - 1e-12)) break;
        eps.push_back(e);
    }
    return eps;
}

MaximalPair maximal_hilbert_pair(const LineSample& f, const CutoffPhi& phi, std::span<const double> eps_grid) {
    const std::vector<double> eps = sorted_desc(eps_grid);
    for (double e : eps) check_eps(f, e);
    const double h = f.step();
    const int m = f.components();
    const std::size_t ne = eps.size();

    // Cuts: H_eps starts past eps; H*_phi has phi = 1 from hi*eps on.
    std::vector<idx> strict(ne), full(ne), trans_lo(ne);
    std::vector<idx> cuts;
    for (std::size_t k = 0; k < ne; ++k) {
        strict[k] = first_beyond(eps[k], h, true);
        full[k] = first_beyond(phi.hi * eps[k], h, false);
        trans_lo[k] = first_beyond(phi.lo * eps[k], h, true);
        cuts.push_back(strict[k]);
        cuts.push_back(full[k]);
    }
    std::sort(cuts.begin(), cuts.end(), std::greater<>());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    auto slot = [&](idx c) {
        return static_cast<std::size_t>(std::lower_bound(cuts.begin(), cuts.end(), c, std::greater<>()) -
                                        cuts.begin());
    };
    std::vector<std::size_t> strict_slot(ne), full_slot(ne);
    for (std::size_t k = 0; k < ne; ++k) {
        strict_slot[k] = slot(strict[k]);
        full_slot[k] = slot(full[k]);
    }

    const SuffixEngine eng(f);
    MaximalPair out;
    out.hstar.assign(f.size(), 0.0);
    out.hstar_phi.assign(f.size(), 0.0);
    if (eng.empty()) return out;
    const BanachSpec& bs = f.banach();
    parallel_for(f.size(), [&](std::size_t b, std::size_t e) {
        std::vector<cplx> l, r;
        std::vector<cplx> plain(ne * m), smooth(ne * m);
        for (std::size_t i = b; i < e; ++i) {
            const idx ii = static_cast<idx>(i);
            for (int c = 0; c < m; ++c) {
                eng.run(ii, c, cuts, l, r);
                for (std::size_t k = 0; k < ne; ++k) {
                    plain[k * m + c] = l[strict_slot[k]] - r[strict_slot[k]];
                    const double ek = eps[k];
                    auto w = [&](idx d) { return phi(static_cast<double>(d) * h / ek); };
                    const cplx tl = eng.weighted(ii, c, trans_lo[k], full[k] - 1, -1, w);
                    const cplx tr = eng.weighted(ii, c, trans_lo[k], full[k] - 1, +1, w);
                    smooth[k * m + c] = (l[full_slot[k]] + tl) - (r[full_slot[k]] + tr);
                }
            }
            double hs = 0.0, hp = 0.0;
            for (std::size_t k = 0; k < ne; ++k) {
                hs = std::max(hs, bs.norm({plain.data() + k * m, static_cast<std::size_t>(m)}));
                hp = std::max(hp, bs.norm({smooth.data() + k * m, static_cast<std::size_t>(m)}));
            }
            out.hstar[i] = hs;
            out.hstar_phi[i] = hp;
        }
    });
    return out;
}

std::vector<double> maximal_hilbert(const LineSample& f, std::span<const double> eps_grid) {
    return maximal_hilbert_pair(f, CutoffPhi{}, eps_grid).hstar;
}

std::vector<double> smoothed_maximal_hilbert(const LineSample& f, const CutoffPhi& phi,
                                             std::span<const double> eps_grid) {
    return maximal_hilbert_pair(f, phi, eps_grid).hstar_phi;
}

// ---------------------------------------------------------------- maximal functions

std::vector<double> maximal_radii(double spacing, double top) {
    if (!(spacing > 0.0) || !(top >= spacing)) throw std::invalid_argument("bad maximal radius range");
    std::vector<double> radii;
    for (int k = 0;; ++k) {
        const double rho = spacing * std::exp2(k / 8.0);
        if (rho > top * (1.0 + 1e-12)) break;
        radii.push_back(rho);
    }
    return radii;
}

std::vector<double> hardy_littlewood_maximal(const LineSample& grid_like, std::span<const double> h) {
    const std::size_t n = grid_like.size();
    if (h.size() != n) throw std::invalid_argument("maximal function input has the wrong length");
    for (double v : h) {
        if (!(v >= 0.0)) throw std::invalid_argument("maximal function input must be nonnegative");
    }
    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + h[i];
    std::vector<idx> reach;
    for (double rho : maximal_radii(grid_like.step(), 2.0 * grid_like.half_width())) {
        const idx r = static_cast<idx>(std::floor(rho / grid_like.step() + 1e-9));
        if (reach.empty() || reach.back() != r) reach.push_back(r);
    }
    std::vector<double> out(n, 0.0);
    parallel_for(n, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            double best = 0.0;
            for (idx r : reach) {
                const idx lo = std::max<idx>(0, static_cast<idx>(i) - r);
                const idx hi = std::min<idx>(static_cast<idx>(n) - 1, static_cast<idx>(i) + r);
                best = std::max(best, (prefix[hi + 1] - prefix[lo]) / static_cast<double>(2 * r + 1));
            }
            out[i] = best;
        }
    });
    return out;
}

std::vector<double> hardy_littlewood_maximal(const LineSample& f_nonnegative) {
    return hardy_littlewood_maximal(f_nonnegative, f_nonnegative.norms());
}

std::vector<double> periodic_maximal(const GridSpec& grid, std::span<const double> h) {
    const std::size_t n = grid.points();
    if (h.size() != n) throw std::invalid_argument("maximal function input has the wrong length");
    for (double v : h) {
        if (!(v >= 0.0)) throw std::invalid_argument("maximal function input must be nonnegative");
    }
    // Offsets sorted by periodic distance; a ball is a prefix of this list.
    const double dx = grid.spacing();
    std::vector<std::pair<double, std::size_t>> offsets(n);
    for (std::size_t k = 0; k < n; ++k) {
        double d2 = 0.0;
        std::size_t rest = k;
        for (int a = grid.dim - 1; a >= 0; --a) {
            const int j = static_cast<int>(rest % grid.n);
            rest /= grid.n;
            const int w = std::min(j, grid.n - j);
            d2 += (w * dx) * (w * dx);
        }
        offsets[k] = {std::sqrt(d2), k};
    }
    std::stable_sort(offsets.begin(), offsets.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    const std::vector<double> radii = maximal_radii(dx, 0.5 * grid.period);
    std::vector<std::size_t> ends;
    for (double rho : radii) {
        const auto it = std::upper_bound(offsets.begin(), offsets.end(), rho * (1.0 + 1e-12),
                                         [](double v, const auto& o) { return v < o.first; });
        ends.push_back(static_cast<std::size_t>(it - offsets.begin()));
    }
    std::vector<double> out(n, 0.0);
    parallel_for(n, [&](std::size_t b, std::size_t e) {
        std::vector<int> xi(grid.dim), oj(grid.dim);
        for (std::size_t p = b; p < e; ++p) {
            std::size_t rest = p;
            for (int a = grid.dim - 1; a >= 0; --a) {
                xi[a] = static_cast<int>(rest % grid.n);
                rest /= grid.n;
            }
            double acc = 0.0, best = 0.0;
            std::size_t used = 0;
            for (std::size_t r = 0; r < ends.size(); ++r) {
                for (; used < ends[r]; ++used) {
                    std::size_t k = offsets[used].second;
                    for (int a = grid.dim - 1; a >= 0; --a) {
                        oj[a] = static_cast<int>(k % grid.n);
                        k /= grid.n;
                    }
                    std::size_t q = 0;
                    for (int a = 0; a < grid.dim; ++a) q = q * grid.n + (xi[a] + oj[a]) % grid.n;
                    acc += h[q];
                }
                best = std::max(best, acc / static_cast<double>(used));
            }
            out[p] = best;
        }
    });
    return out;
}

double comparison_ratio(const LineSample& f, const CutoffPhi& phi, std::span<const double> eps_grid) {
    const MaximalPair pair = maximal_hilbert_pair(f, phi, eps_grid);
    const std::vector<double> mf = hardy_littlewood_maximal(f);
    double worst = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (mf[i] > 0.0) worst = std::max(worst, std::abs(pair.hstar_phi[i] - pair.hstar[i]) / mf[i]);
    }
    return worst;
}

// ---------------------------------------------------------------- convergence

std::vector<double> eps_sequence_for(const LineSample& f, std::span<const int> multiples) {
    std::vector<double> eps;
    for (int k : multiples) eps.push_back(k * f.step());
    std::sort(eps.begin(), eps.end(), std::greater<>());
    return eps;
}

ConvergenceReport convergence_probe(const LineSample& f, std::span<const double> eps_sequence, double threshold) {
    if (eps_sequence.size() < 2) throw std::invalid_argument("convergence probe needs two or more eps values");
    for (std::size_t k = 0; k < eps_sequence.size(); ++k) {
        check_eps(f, eps_sequence[k]);
        if (k > 0 && !(eps_sequence[k] < eps_sequence[k - 1])) {
            throw std::invalid_argument("convergence probe eps sequence must be decreasing");
        }
    }
    const int m = f.components();
    std::vector<idx> cuts;
    for (double e : eps_sequence) cuts.push_back(first_beyond(e, f.step(), true));
    for (std::size_t k = 1; k < cuts.size(); ++k) {
        if (!(cuts[k] < cuts[k - 1])) throw std::invalid_argument("eps values closer than one grid step");
    }
    const SuffixEngine eng(f);
    ConvergenceReport rep;
    rep.step = f.step();
    rep.threshold = threshold;
    rep.osc.assign(f.size(), 0.0);
    if (!eng.empty()) {
        parallel_for(f.size(), [&](std::size_t b, std::size_t e) {
            std::vector<cplx> l, r, vals(cuts.size() * m), diff(m);
            for (std::size_t i = b; i < e; ++i) {
                for (int c = 0; c < m; ++c) {
                    eng.run(static_cast<idx>(i), c, cuts, l, r);
                    for (std::size_t k = 0; k < cuts.size(); ++k) vals[k * m + c] = l[k] - r[k];
                }
                double osc = 0.0;
                for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
                    for (int c = 0; c < m; ++c) diff[c] = vals[k * m + c] - vals[(k + 1) * m + c];
                    osc = std::max(osc, f.banach().norm(diff));
                }
                rep.osc[i] = osc;
            }
        });
    }
    std::size_t below = 0;
    std::vector<double> inner;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (rep.osc[i] < threshold) ++below;
        if (std::abs(f.x(i)) <= 0.25 * f.half_width()) inner.push_back(rep.osc[i]);
    }
    rep.fraction_below = static_cast<double>(below) / static_cast<double>(f.size());
    if (!inner.empty()) {
        std::sort(inner.begin(), inner.end());
        const std::size_t mid = inner.size() / 2;
        rep.median_osc = inner.size() % 2 ? inner[mid] : 0.5 * (inner[mid - 1] + inner[mid]);
    }
    const std::vector<double> eps = default_eps_grid(f);
    MaximalPair pair = maximal_hilbert_pair(f, CutoffPhi{}, eps);
    rep.hstar = std::move(pair.hstar);
    rep.hstar_phi = std::move(pair.hstar_phi);
    rep.maximal = hardy_littlewood_maximal(f);
    return rep;
}

std::vector<ConvergenceRow> convergence_study(const LineSample::Sampler& fn, BanachSpec banach,
                                              double half_width, std::span<const int> intervals,
                                              std::span<const int> multiples, double threshold) {
    std::vector<ConvergenceRow> rows;
    for (int n : intervals) {
        const LineSample f = LineSample::sample(half_width, n, banach, fn);
        const std::vector<double> eps = eps_sequence_for(f, multiples);
        const ConvergenceReport rep = convergence_probe(f, eps, threshold);
        rows.push_back({n, f.step(), rep.median_osc, rep.fraction_below});
    }
    return rows;
}

LineSample coarsen(const LineSample& f, int factor) {
    if (factor < 1 || f.intervals() % (2 * factor) != 0) {
        throw std::invalid_argument("coarsening factor must divide half the interval count");
    }
    const int m = f.components();
    const int intervals = f.intervals() / factor;
    std::vector<cplx> vals;
    vals.reserve(static_cast<std::size_t>(intervals + 1) * m);
    for (std::size_t i = 0; i < f.size(); i += factor) {
        for (const auto& v : f.at(i)) vals.push_back(v);
    }
    return LineSample(f.half_width(), intervals, f.banach(), std::move(vals));
}

std::vector<ConvergenceRow> convergence_study(const LineSample& finest, int levels, std::span<const int> multiples,
                                              double threshold) {
    if (levels < 1) throw std::invalid_argument("convergence study needs at least one level");
    std::vector<ConvergenceRow> rows;
    for (int lv = levels - 1; lv >= 0; --lv) {
        const LineSample f = coarsen(finest, 1 << lv);
        const std::vector<double> eps = eps_sequence_for(f, multiples);
        const ConvergenceReport rep = convergence_probe(f, eps, threshold);
        rows.push_back({f.intervals(), f.step(), rep.median_osc, rep.fraction_below});
    }
    return rows;
}

// ---------------------------------------------------------------- CSV

namespace {

void put(std::ostream& os, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf;
}

}  // namespace

void write_line_sample_csv(std::ostream& os, const LineSample& f) {
    os << "x";
    for (int c = 0; c < f.components(); ++c) os << ",re_" << c << ",im_" << c;
    os << '\n';
    for (std::size_t i = 0; i < f.size(); ++i) {
        put(os, f.x(i));
        for (const auto& v : f.at(i)) {
            os << ',';
            put(os, v.real());
            os << ',';
            put(os, v.imag());
        }
        os << '\n';
    }
}

void write_convergence_csv(std::ostream& os, const LineSample& f, const ConvergenceReport& rep) {
    os << "x,osc,Hstar,Hstar_phi,M\n";
    for (std::size_t i = 0; i < f.size(); ++i) {
        put(os, f.x(i));
        for (double v : {rep.osc[i], rep.hstar[i], rep.hstar_phi[i], rep.maximal[i]}) {
            os << ',';
            put(os, v);
        }
        os << '\n';
    }
}

void write_study_csv(std::ostream& os, std::span<const ConvergenceRow> rows) {
    os << "intervals,step,median_osc,fraction_below\n";
    for (const auto& row : rows) {
        os << row.intervals << ',';
        put(os, row.step);
        os << ',';
        put(os, row.median_osc);
        os << ',';
        put(os, row.fraction_below);
        os << '\n';
    }
}

LineSample read_line_sample_csv(std::istream& is, double r) {
    using detail::parse_double;
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(is, line)) throw InputError("line 1: missing header");
    const auto header = detail::split_csv(line);
    if (header.empty() || header[0] != "x") throw InputError("line 1: header must start with x");
    if (header.size() < 3 || (header.size() - 1) % 2 != 0) {
        throw InputError("line 1: expected re_c,im_c column pairs");
    }
    const int m = static_cast<int>((header.size() - 1) / 2);
    for (int c = 0; c < m; ++c) {
        if (header[1 + 2 * c] != "re_" + std::to_string(c) || header[2 + 2 * c] != "im_" + std::to_string(c)) {
            throw InputError("line 1: unexpected column name '" + header[1 + 2 * c] + "'");
        }
    }
    std::vector<double> xs;
    std::vector<std::size_t> row_line;
    std::vector<cplx> values;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto tok = detail::split_csv(line);
        if (tok.size() != header.size()) {
            throw InputError("line " + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                             " columns, got " + std::to_string(tok.size()));
        }
        xs.push_back(parse_double(tok[0], line_no));
        row_line.push_back(line_no);
        for (int c = 0; c < m; ++c) {
            values.emplace_back(parse_double(tok[1 + 2 * c], line_no), parse_double(tok[2 + 2 * c], line_no));
        }
    }
    const std::size_t rows = xs.size();
    if (rows < 5 || rows % 2 == 0) {
        throw InputError("line " + std::to_string(line_no) + ": need an odd number (>= 5) of rows");
    }
    const int intervals = static_cast<int>(rows - 1);
    const double half_width = xs.back();
    if (!(half_width > 0.0)) throw InputError("grid must run from -A to A");
    const double h = 2.0 * half_width / intervals;
    for (std::size_t i = 0; i < rows; ++i) {
        const double expected = (static_cast<double>(i) - intervals / 2) * h;
        if (std::abs(xs[i] - expected) > 1e-9 * half_width) {
            throw InputError("line " + std::to_string(row_line[i]) + ": coordinate off the symmetric grid");
        }
    }
    const BanachSpec banach = m == 1 ? BanachSpec::scalar() : BanachSpec::sequence(m, r);
    return LineSample(half_width, intervals, banach, std::move(values));
}

}  // namespace fraclps
