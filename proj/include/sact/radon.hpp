#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "sact/generators.hpp"
#include "sact/lattice.hpp"
#include "sact/quadrature.hpp"

namespace sact {

/// Unit row vector p = (cos theta, sin theta) with theta normalized to [0, 2 pi).
struct DirectionVector {
    double theta = 0.0;
    double p1 = 1.0;
    double p2 = 0.0;

    static DirectionVector from_angle(double theta) {
        if (!std::isfinite(theta)) throw InvalidArgument("direction angle must be finite");
        constexpr double two_pi = 2.0 * std::numbers::pi;
        double t = std::fmod(theta, two_pi);
        if (t < 0) t += two_pi;
        if (t >= two_pi) t = 0.0;
        return {t, std::cos(t), std::sin(t)};
    }

    double dot(double x1, double x2) const noexcept { return p1 * x1 + p2 * x2; }
    double dot(const LatticePoint& k) const noexcept { return p1 * k.k1 + p2 * k.k2; }
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double length() const noexcept { return hi - lo; }
    bool contains(double t) const noexcept { return t >= lo && t <= hi; }
    friend bool operator==(const Interval&, const Interval&) = default;
};

/// [-sqrt(2) M, sqrt(2) M] with M = box.max_abs(): the Radon transform of
/// anything supported in the box vanishes outside it, for every direction.
inline Interval radon_support_bounds(const SupportBox& box) {
    const double r = std::numbers::sqrt2 * box.max_abs();
    return {-r, r};
}

struct RadonOptions {
    int panel_nodes = 32;
    int panel_subdivisions = 1;
};

/// Line integrals along x(s) = t p + s (-sin theta, cos theta).
class RadonIntegrator {
public:
    RadonIntegrator() : RadonIntegrator(RadonOptions{}) {}
    explicit RadonIntegrator(RadonOptions opts) : opts_(opts), rule_(opts.panel_nodes) {
        if (opts.panel_subdivisions < 1) throw InvalidArgument("panel subdivisions must be >= 1");
    }

    const RadonOptions& options() const noexcept { return opts_; }

    /// R_p phi(t).
    double profile(const Generator& g, const DirectionVector& d, double t) const {
        if (std::abs(t) > std::numbers::sqrt2 * g.support().max_abs()) return 0.0;
        double sum = 0.0;
        for (const auto& term : g.terms()) sum += term_integral(term, d, t);
        return g.amplitude() * sum;
    }

    /// R_p (phi(. - k))(t) = R_p phi(t - p k).
    double shifted(const Generator& g, const DirectionVector& d, const LatticePoint& k, double t) const {
        return profile(g, d, t - d.dot(k));
    }

    /// R_p f(t) for f = sum_k c_k phi(. - k).
    double field(const Generator& g, const DirectionVector& d, const CoefficientField& c, double t) const {
        double sum = 0.0;
        const auto& pts = c.index_set.points();
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (c.values[i] == 0.0) continue;
            sum += c.values[i] * shifted(g, d, pts[i], t);
        }
        return sum;
    }

private:
    double term_integral(const SeparableTerm& term, const DirectionVector& d, double t) const {
        constexpr double axis_eps = 1e-15;
        const double c = d.p1, s = d.p2;
        const auto box = term.support();
        const double base1 = t * c, base2 = t * s;
        // x1(s) = base1 - s * sin, x2(s) = base2 + s * cos.
        double s_lo = -INFINITY, s_hi = INFINITY;
        if (std::abs(s) < axis_eps) {
            if (base1 < box.n1 || base1 > box.m1) return 0.0;
        } else {
            double a = (base1 - box.m1) / s, b = (base1 - box.n1) / s;
            if (a > b) std::swap(a, b);
            s_lo = std::max(s_lo, a);
            s_hi = std::min(s_hi, b);
        }
        if (std::abs(c) < axis_eps) {
            if (base2 < box.n2 || base2 > box.m2) return 0.0;
        } else {
            double a = (box.n2 - base2) / c, b = (box.m2 - base2) / c;
            if (a > b) std::swap(a, b);
            s_lo = std::max(s_lo, a);
            s_hi = std::min(s_hi, b);
        }
        if (!(s_hi > s_lo)) return 0.0;

        std::vector<double>& breaks = scratch();
        breaks.clear();
        breaks.push_back(s_lo);
        if (std::abs(s) >= axis_eps)
            for (double k : term.knots_u) {
                const double sv = (base1 - term.shift1 - k) / s;
                if (sv > s_lo && sv < s_hi) breaks.push_back(sv);
            }
        if (std::abs(c) >= axis_eps)
            for (double k : term.knots_v) {
                const double sv = (term.shift2 + k - base2) / c;
                if (sv > s_lo && sv < s_hi) breaks.push_back(sv);
            }
        breaks.push_back(s_hi);
        std::sort(breaks.begin(), breaks.end());

        auto integrand = [&](double sv) {
            const double a = term.u.value(base1 - sv * s - term.shift1);
            if (a == 0.0) return 0.0;
            return a * term.v.value(base2 + sv * c - term.shift2);
        };
        return term.weight * rule_.integrate_panels(integrand, breaks, opts_.panel_subdivisions);
    }

    static std::vector<double>& scratch() {
        thread_local std::vector<double> buf;
        return buf;
    }

    RadonOptions opts_;
    GaussLegendre rule_;
};

inline const RadonIntegrator& default_radon_integrator() {
    static const RadonIntegrator integrator;
    return integrator;
}

inline double radon_generator(const Generator& g, const DirectionVector& d, double t) {
    return default_radon_integrator().profile(g, d, t);
}

inline double radon_shifted_generator(const Generator& g, const DirectionVector& d, const LatticePoint& k,
                                      double t) {
    return default_radon_integrator().shifted(g, d, k, t);
}

inline double radon_field(const Generator& g, const DirectionVector& d, const CoefficientField& c, double t) {
    return default_radon_integrator().field(g, d, c, t);
}

/// phi^(xi p^T): the 1D transform of t -> R_p phi(t).
inline complex fourier_slice(const Generator& g, const DirectionVector& d, double xi) {
    return g.fourier(xi * d.p1, xi * d.p2);
}

/// Offsets t at which the line passes a knot-grid vertex of some term; the
/// profile R_p phi is a polynomial between consecutive entries.
inline std::vector<double> profile_breakpoints(const Generator& g, const DirectionVector& d) {
    std::vector<double> out;
    for (const auto& term : g.terms())
        for (double a : term.knots_u)
            for (double b : term.knots_v) out.push_back(d.dot(term.shift1 + a, term.shift2 + b));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end(),
                          [](double x, double y) { return std::abs(x - y) <= 1e-13 * (1 + std::abs(x)); }),
              out.end());
    return out;
}

/// t -> R_p phi(t) with its support interval.
class RadonProfile {
public:
    RadonProfile(Generator g, DirectionVector d, RadonOptions opts = {})
        : generator_(std::move(g)), direction_(d), integrator_(opts),
          support_(radon_support_bounds(generator_.support())) {}

    const DirectionVector& direction() const noexcept { return direction_; }
    const Interval& support() const noexcept { return support_; }
    const Generator& generator() const noexcept { return generator_; }

    double operator()(double t) const {
        if (!support_.contains(t)) return 0.0;
        return integrator_.profile(generator_, direction_, t);
    }

private:
    Generator generator_;
    DirectionVector direction_;
    RadonIntegrator integrator_;
    Interval support_;
};

} // namespace sact
