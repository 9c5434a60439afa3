#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "sact/error.hpp"

namespace sact {

/// Gauss-Legendre nodes and weights on [-1, 1].
class GaussLegendre {
public:
    explicit GaussLegendre(int n = 32) : nodes_(n), weights_(n) {
        if (n < 1) throw InvalidArgument("Gauss-Legendre rule needs at least one node");
        // Newton iteration on P_n from the Chebyshev initial guess; symmetric pairs.
        const int half = (n + 1) / 2;
        for (int i = 0; i < half; ++i) {
            double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int iter = 0; iter < 100; ++iter) {
                double p0 = 1.0, p1 = 0.0;
                for (int j = 1; j <= n; ++j) {
                    const double p2 = p1;
                    p1 = p0;
                    p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
                }
                dp = n * (z * p0 - p1) / (z * z - 1.0);
                const double dz = p0 / dp;
                z -= dz;
                if (std::abs(dz) < 1e-16) break;
            }
            nodes_[i] = -z;
            nodes_[n - 1 - i] = z;
            weights_[i] = weights_[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
        }
    }

    int size() const noexcept { return static_cast<int>(nodes_.size()); }
    std::span<const double> nodes() const noexcept { return nodes_; }
    std::span<const double> weights() const noexcept { return weights_; }

    /// Integrate f over [a, b] with one panel.
    template <class F>
    double integrate(F&& f, double a, double b) const {
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        double sum = 0.0;
        for (std::size_t i = 0; i < nodes_.size(); ++i) sum += weights_[i] * f(mid + half * nodes_[i]);
        return half * sum;
    }

    /// Composite rule over consecutive breakpoints, each gap split into
    /// `subdivisions` equal panels. Breakpoints must be sorted.
    template <class F>
    double integrate_panels(F&& f, std::span<const double> breaks, int subdivisions = 1) const {
        double sum = 0.0;
        for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
            const double a = breaks[i], b = breaks[i + 1];
            if (!(b > a)) continue;
            const double h = (b - a) / subdivisions;
            for (int j = 0; j < subdivisions; ++j) {
                const double lo = a + j * h;
                const double hi = (j + 1 == subdivisions) ? b : lo + h;
                sum += integrate(f, lo, hi);
            }
        }
        return sum;
    }

private:
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

inline const GaussLegendre& default_gauss_legendre() {
    static const GaussLegendre rule(32);
    return rule;
}

namespace detail {

template <class F>
double adaptive_simpson_step(F& f, double a, double b, double fa, double fm, double fb,
                             double whole, double tol, int depth, bool& converged) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double diff = left + right - whole;
    if (std::abs(diff) <= 15.0 * tol || depth <= 0) {
        if (depth <= 0 && std::abs(diff) > 15.0 * tol) converged = false;
        return left + right + diff / 15.0;
    }
    return adaptive_simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, converged) +
           adaptive_simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, converged);
}

} // namespace detail

struct AdaptiveResult {
    double value = 0.0;
    bool converged = true;
};

/// Adaptive Simpson over [a, b] after an initial split into `initial_panels`
/// uniform pieces. Each piece receives an equal share of `tol`.
template <class F>
AdaptiveResult adaptive_simpson(F&& f, double a, double b, double tol, int initial_panels = 16,
                                int max_depth = 40) {
    AdaptiveResult out;
    if (!(b > a)) return out;
    const double h = (b - a) / initial_panels;
    const double piece_tol = tol / initial_panels;
    double prev = f(a);
    for (int i = 0; i < initial_panels; ++i) {
        const double lo = a + i * h;
        const double hi = (i + 1 == initial_panels) ? b : lo + h;
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid), fb = f(hi);
        const double whole = (hi - lo) / 6.0 * (prev + 4.0 * fm + fb);
        out.value += detail::adaptive_simpson_step(f, lo, hi, prev, fm, fb, whole, piece_tol, max_depth,
                                                   out.converged);
        prev = fb;
    }
    return out;
}

} // namespace sact
