#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <set>
#include <vector>

#include "sact/generators.hpp"
#include "sact/lattice.hpp"
#include "sact/radon.hpp"

namespace sact {

inline constexpr double kAngularTolerance = 1e-9;
inline constexpr double kProjectionTolerance = 1e-12;

namespace detail {

// ceil/floor that snap values within 1e-12 of an integer onto it, so that
// e.g. 0.3 - 0.1 - 0.2 does not move a bound by one.
inline int snapped_ceil(double x) {
    const double r = std::round(x);
    if (std::abs(x - r) <= 1e-12 * std::max(1.0, std::abs(x))) return static_cast<int>(r);
    return static_cast<int>(std::ceil(x));
}

inline int snapped_floor(double x) {
    const double r = std::round(x);
    if (std::abs(x - r) <= 1e-12 * std::max(1.0, std::abs(x))) return static_cast<int>(r);
    return static_cast<int>(std::floor(x));
}

inline double angular_distance(double a, double b) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double d = std::fmod(std::abs(a - b), two_pi);
    return std::min(d, two_pi - d);
}

} // namespace detail

/// E = [ceil(a1 - M1), floor(b1 - N1)] x [ceil(a2 - M2), floor(b2 - N2)] over Z^2.
inline IndexSet build_index_set(const SupportBox& phi_support, const SupportBox& f_support) {
    phi_support.validate();
    f_support.validate();
    const int lo1 = detail::snapped_ceil(f_support.n1 - phi_support.m1);
    const int hi1 = detail::snapped_floor(f_support.m1 - phi_support.n1);
    const int lo2 = detail::snapped_ceil(f_support.n2 - phi_support.m2);
    const int hi2 = detail::snapped_floor(f_support.m2 - phi_support.n2);
    if (hi1 < lo1 || hi2 < lo2) throw EmptyProblemError("index set E is empty: nothing to reconstruct");
    return IndexSet(lo1, hi1, lo2, hi2);
}

/// Nonzero differences x - y, x != y in E, sorted and deduplicated.
struct DifferenceSet {
    std::vector<LatticePoint> diffs;
};

inline DifferenceSet build_difference_set(const IndexSet& e) {
    std::set<LatticePoint> seen;
    const auto& pts = e.points();
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = 0; j < pts.size(); ++j)
            if (i != j) seen.insert(pts[i] - pts[j]);
    return {{seen.begin(), seen.end()}};
}

struct ForbiddenAngle {
    double theta = 0.0;
    /// A difference d with p(theta) . d = 0 (the shortest one found).
    LatticePoint witness;
};

/// Directions orthogonal to some difference in E+, sorted by angle in [0, 2 pi).
struct ForbiddenDirections {
    std::vector<ForbiddenAngle> angles;

    bool empty() const noexcept { return angles.empty(); }
    std::size_t size() const noexcept { return angles.size(); }

    /// Nearest forbidden angle to theta, by circular distance.
    std::optional<std::pair<ForbiddenAngle, double>> nearest(double theta) const {
        if (angles.empty()) return std::nullopt;
        const ForbiddenAngle* best = nullptr;
        double best_d = INFINITY;
        for (const auto& a : angles) {
            const double dist = detail::angular_distance(theta, a.theta);
            if (dist < best_d) {
                best_d = dist;
                best = &a;
            }
        }
        return std::pair{*best, best_d};
    }
};

inline ForbiddenDirections forbidden_angles(const DifferenceSet& ds) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    auto norm = [](double t) {
        t = std::fmod(t, two_pi);
        if (t < 0) t += two_pi;
        if (t >= two_pi) t -= two_pi;
        return t;
    };
    // E+ = -E+, so report each witness with k1 > 0, or k1 = 0 and k2 > 0.
    std::vector<LatticePoint> diffs;
    for (const auto& d : ds.diffs)
        if (d.k1 > 0 || (d.k1 == 0 && d.k2 > 0)) diffs.push_back(d);
    if (diffs.empty()) diffs = ds.diffs;
    std::stable_sort(diffs.begin(), diffs.end(), [](const LatticePoint& a, const LatticePoint& b) {
        return a.k1 * a.k1 + a.k2 * a.k2 < b.k1 * b.k1 + b.k2 * b.k2;
    });
    std::vector<ForbiddenAngle> raw;
    for (const auto& d : diffs) {
        double base;
        if (d.k2 == 0) {
            base = std::numbers::pi / 2;
        } else {
            // tan(theta) = -d1 / d2, i.e. p is parallel to (-d2, d1).
            base = std::atan2(static_cast<double>(d.k1), static_cast<double>(-d.k2));
        }
        raw.push_back({norm(base), d});
        raw.push_back({norm(base + std::numbers::pi), d});
    }
    // Shortest witness first, so keep the earliest entry of each cluster.
    std::stable_sort(raw.begin(), raw.end(),
                     [](const ForbiddenAngle& a, const ForbiddenAngle& b) { return a.theta < b.theta; });
    ForbiddenDirections out;
    for (const auto& a : raw) {
        if (!out.angles.empty() && std::abs(a.theta - out.angles.back().theta) <= 1e-12) {
            const auto& w = out.angles.back().witness;
            if (a.witness.k1 * a.witness.k1 + a.witness.k2 * a.witness.k2 < w.k1 * w.k1 + w.k2 * w.k2)
                out.angles.back().witness = a.witness;
            continue;
        }
        out.angles.push_back(a);
    }
    // Wrap-around cluster near 0 and 2 pi.
    if (out.angles.size() > 1 && two_pi - out.angles.back().theta <= 1e-12) out.angles.pop_back();
    return out;
}

inline ForbiddenDirections forbidden_angles(const IndexSet& e) {
    return forbidden_angles(build_difference_set(e));
}

/// min_{j != n} |p k_j - p k_n|; +infinity when #E = 1.
inline double separation_margin(const IndexSet& e, const DirectionVector& d) {
    std::vector<double> proj;
    proj.reserve(e.size());
    for (const auto& k : e.points()) proj.push_back(d.dot(k));
    std::sort(proj.begin(), proj.end());
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < proj.size(); ++i) best = std::min(best, proj[i] - proj[i - 1]);
    return best;
}

struct SliceScanOptions {
    double gamma_max = 8.0 * std::numbers::pi;
    int nodes = 4096;
    double threshold = 1e-6;
};

struct EligibilityOptions {
    double angular_tolerance = kAngularTolerance;
    SliceScanOptions scan{};
};

struct EligibilityVerdict {
    bool eligible = false;
    VanishingClass generator_class = VanishingClass::nonvanishing;
    /// Nearest forbidden angle and its witness, when E+ is nonempty.
    std::optional<ForbiddenAngle> nearest_forbidden;
    double angular_distance = std::numeric_limits<double>::infinity();
    bool forbidden = false;
    /// Vanishing case only: argmax of |phi^(gamma p)| over the scan and its value.
    std::optional<double> slice_gamma;
    double slice_max = 0.0;
    bool slice_vanishes = false;
};

namespace detail {

inline void fill_forbidden(EligibilityVerdict& v, const DirectionVector& d, const ForbiddenDirections& fb,
                           double tol) {
    if (auto n = fb.nearest(d.theta)) {
        v.nearest_forbidden = n->first;
        v.angular_distance = n->second;
        v.forbidden = n->second <= tol;
    }
}

} // namespace detail

inline EligibilityVerdict is_direction_eligible_nonvanishing(const Generator& g, const DirectionVector& d,
                                                             const ForbiddenDirections& forbidden,
                                                             const EligibilityOptions& opts = {}) {
    if (classify_vanishing(g) != VanishingClass::nonvanishing)
        throw WrongCaseError("generator is vanishing; use the vanishing-case eligibility test");
    EligibilityVerdict v;
    v.generator_class = VanishingClass::nonvanishing;
    detail::fill_forbidden(v, d, forbidden, opts.angular_tolerance);
    v.eligible = !v.forbidden;
    return v;
}

/// Not forbidden, and the slice gamma -> phi^(gamma p) is not identically zero
/// (certified by one scan node above the threshold).
inline EligibilityVerdict is_direction_eligible_vanishing(const Generator& g, const DirectionVector& d,
                                                          const ForbiddenDirections& forbidden,
                                                          const EligibilityOptions& opts = {}) {
    if (classify_vanishing(g) != VanishingClass::vanishing)
        throw WrongCaseError("generator is nonvanishing; use the nonvanishing-case eligibility test");
    const auto& scan = opts.scan;
    if (scan.nodes < 2 || !(scan.gamma_max > 0)) throw InvalidArgument("slice scan needs >= 2 nodes and gamma_max > 0");
    EligibilityVerdict v;
    v.generator_class = VanishingClass::vanishing;
    detail::fill_forbidden(v, d, forbidden, opts.angular_tolerance);
    for (int i = 0; i < scan.nodes; ++i) {
        const double gamma = -scan.gamma_max + 2.0 * scan.gamma_max * i / (scan.nodes - 1);
        const double m = std::abs(fourier_slice(g, d, gamma));
        if (m > v.slice_max) {
            v.slice_max = m;
            v.slice_gamma = gamma;
        }
    }
    v.slice_vanishes = !(v.slice_max > scan.threshold);
    v.eligible = !v.forbidden && !v.slice_vanishes;
    return v;
}

/// Dispatches on the generator's vanishing class.
inline EligibilityVerdict check_eligibility(const Generator& g, const DirectionVector& d,
                                            const ForbiddenDirections& forbidden,
                                            const EligibilityOptions& opts = {}) {
    return classify_vanishing(g) == VanishingClass::nonvanishing
               ? is_direction_eligible_nonvanishing(g, d, forbidden, opts)
               : is_direction_eligible_vanishing(g, d, forbidden, opts);
}

} // namespace sact
