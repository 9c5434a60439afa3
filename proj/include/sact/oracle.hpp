#pragma once

#include <cmath>
#include <numbers>
#include <algorithm>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sact/generators.hpp"
#include "sact/lattice.hpp"
#include "sact/quadrature.hpp"
#include "sact/radon.hpp"

namespace sact {

struct OracleConfig {
    /// Panel multiplier relative to the default oracle split; must be >= 2.
    int quadrature_refinement = 2;
    double dense_grid_step = 1e-3;
    /// Adaptive Simpson stops when successive estimates differ by less than this.
    double tolerance = 1e-9;
    int max_depth = 50;

    void validate() const {
        if (quadrature_refinement < 2) throw InvalidArgument("oracle refinement must be >= 2");
        if (!(dense_grid_step > 0)) throw InvalidArgument("dense grid step must be positive");
        if (!(tolerance > 0)) throw InvalidArgument("oracle tolerance must be positive");
    }
};

/// Closed box holding supp(f) for f = sum_{k in E} c_k phi(. - k).
inline SupportBox field_support(const Generator& g, const IndexSet& e) {
    const auto& s = g.support();
    return {e.lo1() + s.n1, e.hi1() + s.m1, e.lo2() + s.n2, e.hi2() + s.m2};
}

/// Values of f = sum c_k phi(. - k) by direct summation.
inline double evaluate_field(const Generator& g, const CoefficientField& c, double x1, double x2) {
    double sum = 0.0;
    const auto& pts = c.index_set.points();
    for (std::size_t i = 0; i < pts.size(); ++i)
        if (c.values[i] != 0.0) sum += c.values[i] * g.value(x1 - pts[i].k1, x2 - pts[i].k2);
    return sum;
}

/// Parameter range of the line x(s) = t p + s (-sin, cos) inside `box`;
/// empty (lo >= hi) when the line misses it.
inline std::pair<double, double> chord(const SupportBox& box, const DirectionVector& d, double t) {
    constexpr double axis_eps = 1e-15;
    const double c = d.p1, s = d.p2;
    const double x1 = t * c, x2 = t * s;
    double lo = -INFINITY, hi = INFINITY;
    auto clip = [&](double base, double rate, double a, double b) {
        if (std::abs(rate) < axis_eps) {
            if (base < a || base > b) lo = hi = 0.0;
            return;
        }
        double u = (a - base) / rate, v = (b - base) / rate;
        if (u > v) std::swap(u, v);
        lo = std::max(lo, u);
        hi = std::min(hi, v);
    };
    clip(x1, -s, box.n1, box.m1);
    clip(x2, c, box.n2, box.m2);
    return {lo, hi};
}

/// Chord parameters in [lo, hi] where the line crosses a knot line of some
/// shifted generator term, so that f is polynomial between them.
inline std::vector<double> chord_breaks(const Generator& g, const IndexSet& e, const DirectionVector& d, double t,
                                        double lo, double hi) {
    std::set<double> lines1, lines2;
    for (const auto& term : g.terms()) {
        for (double k : term.knots_u)
            for (int a = e.lo1(); a <= e.hi1(); ++a) lines1.insert(a + term.shift1 + k);
        for (double k : term.knots_v)
            for (int b = e.lo2(); b <= e.hi2(); ++b) lines2.insert(b + term.shift2 + k);
    }
    std::vector<double> out{lo, hi};
    // x1(s) = t cos - s sin, x2(s) = t sin + s cos.
    if (std::abs(d.p2) > 1e-15)
        for (double x : lines1) out.push_back((t * d.p1 - x) / d.p2);
    if (std::abs(d.p1) > 1e-15)
        for (double x : lines2) out.push_back((x - t * d.p2) / d.p1);
    std::sort(out.begin(), out.end());
    out.erase(std::remove_if(out.begin(), out.end(), [&](double v) { return v < lo || v > hi; }), out.end());
    out.erase(std::unique(out.begin(), out.end(), [](double a, double b) { return b - a <= 1e-14; }), out.end());
    return out;
}

/// R_p f(t) by adaptive Simpson on s -> f(t cos - s sin, t sin + s cos),
/// evaluating f pointwise. Shares nothing with RadonIntegrator beyond the
/// generator's point values.
inline double line_integral_oracle(const Generator& g, const CoefficientField& c, const DirectionVector& d, double t,
                                   const OracleConfig& cfg = {}) {
    cfg.validate();
    if (c.index_set.empty()) return 0.0;
    const SupportBox box = field_support(g, c.index_set);
    if (std::abs(t) > std::numbers::sqrt2 * box.max_abs()) return 0.0;
    const auto [lo, hi] = chord(box, d, t);
    if (!(hi > lo)) return 0.0;
    auto f = [&](double s) { return evaluate_field(g, c, t * d.p1 - s * d.p2, t * d.p2 + s * d.p1); };
    const auto pieces = chord_breaks(g, c.index_set, d, t, lo, hi);
    // Adaptive Simpson can still accept a wrong panel when its two-level
    // estimate cancels by accident. Successive rounds use non-nested splits
    // (N -> 2N + 1) and must agree.
    int split = cfg.quadrature_refinement;
    const double inner_tol = 0.1 * cfg.tolerance / cfg.quadrature_refinement;
    auto estimate = [&](int n) {
        double sum = 0.0;
        bool ok = true;
        for (std::size_t i = 0; i + 1 < pieces.size(); ++i) {
            const double share = inner_tol * (pieces[i + 1] - pieces[i]) / (hi - lo);
            const auto r = adaptive_simpson(f, pieces[i], pieces[i + 1], share, n, cfg.max_depth);
            sum += r.value;
            ok = ok && r.converged;
        }
        return std::pair{sum, ok};
    };
    double prev = estimate(split).first;
    for (int round = 0; round < 8; ++round) {
        split = 2 * split + 1;
        const auto [value, ok] = estimate(split);
        if (ok && std::abs(value - prev) < cfg.tolerance) return value;
        prev = value;
    }
    throw NumericalError("line-integral oracle did not converge at t = " + std::to_string(t));
}

} // namespace sact
