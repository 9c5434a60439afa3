#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sact/error.hpp"

namespace sact {

using complex = std::complex<double>;

/// Axis-aligned box [n1, m1] x [n2, m2].
struct SupportBox {
    double n1 = 0, m1 = 0, n2 = 0, m2 = 0;

    static SupportBox checked(double n1, double m1, double n2, double m2) {
        SupportBox box{n1, m1, n2, m2};
        box.validate();
        return box;
    }

    void validate() const {
        if (!(std::isfinite(n1) && std::isfinite(m1) && std::isfinite(n2) && std::isfinite(m2)))
            throw InvalidArgument("support box has non-finite bounds");
        if (!(n1 < m1) || !(n2 < m2)) throw InvalidArgument("support box needs n1 < m1 and n2 < m2");
    }

    double max_abs() const noexcept {
        return std::max({std::abs(n1), std::abs(m1), std::abs(n2), std::abs(m2)});
    }

    bool contains(double x1, double x2) const noexcept {
        return x1 >= n1 && x1 <= m1 && x2 >= n2 && x2 <= m2;
    }

    friend bool operator==(const SupportBox&, const SupportBox&) = default;
};

// ---------------------------------------------------------------------------
// Cardinal B-splines B_m = chi_(0,1] * ... * chi_(0,1], supported on (0, m].

/// B_m(x) via the cardinal Cox-de Boor recurrence
///   B_r(x) = (x B_{r-1}(x) + (r - x) B_{r-1}(x - 1)) / (r - 1).
inline double cardinal_bspline(int m, double x) {
    if (m < 1) throw InvalidArgument("cardinal B-spline order must be >= 1");
    if (!(x > 0.0) || x > m) return 0.0;
    // x lies in (j, j+1]; only B_1(x - j) is nonzero at the bottom level.
    const int j = static_cast<int>(std::ceil(x)) - 1;
    // vals[k] holds B_r(x - k) for k in [j - r + 1, j], stored at index k - (j - r + 1).
    std::array<double, 64> small{};
    std::vector<double> big;
    double* vals = small.data();
    if (m > static_cast<int>(small.size())) {
        big.assign(m, 0.0);
        vals = big.data();
    }
    vals[0] = 1.0;
    for (int r = 2; r <= m; ++r) {
        // New window k in [j - r + 1, j]; old window k in [j - r + 2, j].
        const int new_lo = j - r + 1;
        for (int idx = r - 1; idx >= 0; --idx) {
            const int k = new_lo + idx;
            const double y = x - k;
            // B_{r-1}(x - k) is old index idx - 1 (k >= j - r + 2); B_{r-1}(x - k - 1) is old idx.
            const double here = (idx >= 1) ? vals[idx - 1] : 0.0;
            const double next = (idx <= r - 2) ? vals[idx] : 0.0;
            vals[idx] = (y * here + (r - y) * next) / (r - 1);
        }
    }
    // B_m(x) = B_m(x - 0); k = 0 sits at index -(j - m + 1).
    const int idx0 = -(j - m + 1);
    return (idx0 >= 0 && idx0 < m) ? vals[idx0] : 0.0;
}

/// B_m'(x) = B_{m-1}(x) - B_{m-1}(x - 1), valid for m >= 2 away from knots when m = 2.
inline double cardinal_bspline_derivative(int m, double x) {
    if (m < 2) throw InvalidArgument("B-spline derivative needs order >= 2");
    return cardinal_bspline(m - 1, x) - cardinal_bspline(m - 1, x - 1.0);
}

/// sin(w) / w with the removable singularity filled in.
inline double sinc(double w) {
    if (std::abs(w) < 1e-4) {
        const double w2 = w * w;
        return 1.0 - w2 / 6.0 + w2 * w2 / 120.0;
    }
    return std::sin(w) / w;
}

/// Fourier transform of B_m: e^{-i m xi / 2} [sin(xi/2) / (xi/2)]^m.
inline complex cardinal_bspline_fourier(int m, double xi) {
    return std::polar(std::pow(sinc(0.5 * xi), m), -0.5 * m * xi);
}

// ---------------------------------------------------------------------------

/// weight * B_order(scale * x + offset), scale > 0.
struct BsplinePiece {
    double weight = 1.0;
    int order = 1;
    double scale = 1.0;
    double offset = 0.0;
};

/// Finite linear combination of dilated, translated cardinal B-splines.
class Univariate {
public:
    Univariate() = default;
    explicit Univariate(std::vector<BsplinePiece> pieces) : pieces_(std::move(pieces)) {
        if (pieces_.empty()) throw InvalidArgument("univariate factor needs at least one piece");
        for (const auto& p : pieces_) {
            if (p.order < 1) throw InvalidArgument("B-spline order must be >= 1");
            if (!(p.scale > 0)) throw InvalidArgument("B-spline dilation must be positive");
        }
    }

    const std::vector<BsplinePiece>& pieces() const noexcept { return pieces_; }

    double value(double x) const {
        double sum = 0.0;
        for (const auto& p : pieces_) sum += p.weight * cardinal_bspline(p.order, p.scale * x + p.offset);
        return sum;
    }

    double derivative(double x) const {
        double sum = 0.0;
        for (const auto& p : pieces_)
            sum += p.weight * p.scale * cardinal_bspline_derivative(p.order, p.scale * x + p.offset);
        return sum;
    }

    complex fourier(double xi) const {
        complex sum = 0.0;
        for (const auto& p : pieces_) {
            const double w = xi / p.scale;
            sum += p.weight / p.scale * std::polar(1.0, p.offset * w) * cardinal_bspline_fourier(p.order, w);
        }
        return sum;
    }

    /// Smallest interval (lo, hi] containing the support.
    std::pair<double, double> support() const {
        double lo = INFINITY, hi = -INFINITY;
        for (const auto& p : pieces_) {
            lo = std::min(lo, -p.offset / p.scale);
            hi = std::max(hi, (p.order - p.offset) / p.scale);
        }
        return {lo, hi};
    }

    /// Sorted, deduplicated knots; the factor is polynomial between them.
    std::vector<double> breakpoints() const {
        std::vector<double> out;
        for (const auto& p : pieces_)
            for (int j = 0; j <= p.order; ++j) out.push_back((j - p.offset) / p.scale);
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end(),
                              [](double a, double b) { return std::abs(a - b) <= 1e-14 * (1 + std::abs(a)); }),
                  out.end());
        return out;
    }

    int min_order() const {
        int m = pieces_.front().order;
        for (const auto& p : pieces_) m = std::min(m, p.order);
        return m;
    }

    int max_order() const {
        int m = 0;
        for (const auto& p : pieces_) m = std::max(m, p.order);
        return m;
    }

    /// Dense-grid maximum of |value| (or |derivative|) with `per_piece` points per knot gap.
    double dense_sup(bool derivative_of, int per_piece = 2001) const {
        const auto knots = breakpoints();
        double best = 0.0;
        for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
            const double a = knots[i], b = knots[i + 1];
            for (int k = 0; k < per_piece; ++k) {
                const double x = a + (b - a) * k / (per_piece - 1);
                best = std::max(best, std::abs(derivative_of ? derivative(x) : value(x)));
            }
        }
        return best;
    }

private:
    std::vector<BsplinePiece> pieces_;
};

/// weight * u(x1 - shift1) * v(x2 - shift2).
struct SeparableTerm {
    double weight = 1.0;
    double shift1 = 0.0;
    double shift2 = 0.0;
    Univariate u;
    Univariate v;
    /// Cached u.breakpoints() / v.breakpoints(), filled by the owning Generator.
    std::vector<double> knots_u;
    std::vector<double> knots_v;

    SupportBox support() const {
        const auto [ulo, uhi] = u.support();
        const auto [vlo, vhi] = v.support();
        return {shift1 + ulo, shift1 + uhi, shift2 + vlo, shift2 + vhi};
    }

    double value(double x1, double x2) const {
        const double a = u.value(x1 - shift1);
        if (a == 0.0) return 0.0;
        return weight * a * v.value(x2 - shift2);
    }
};

enum class GeneratorKind { bspline_tensor, vanishing_pd, counterexample };

inline std::string_view to_string(GeneratorKind k) {
    switch (k) {
    case GeneratorKind::bspline_tensor: return "bspline_tensor";
    case GeneratorKind::vanishing_pd: return "vanishing_pd";
    case GeneratorKind::counterexample: return "counterexample";
    }
    return "unknown";
}

inline std::optional<GeneratorKind> generator_kind_from_string(std::string_view s) {
    if (s == "bspline_tensor") return GeneratorKind::bspline_tensor;
    if (s == "vanishing_pd") return GeneratorKind::vanishing_pd;
    if (s == "counterexample") return GeneratorKind::counterexample;
    return std::nullopt;
}

enum class VanishingClass { vanishing, nonvanishing };

/// Compactly supported generator phi of the shift-invariant space, stored as a
/// short sum of separable B-spline terms so that values, Fourier transforms,
/// knots and derivative bounds are all closed form.
class Generator {
public:
    /// phi(x) = B_{2 n1}(x1 + n1) B_{2 n2}(x2 + n2), supported on (-n1, n1] x (-n2, n2].
    static Generator bspline_tensor(int n1, int n2) {
        check_orders(n1, n2);
        Generator g(GeneratorKind::bspline_tensor, {n1, n2});
        g.terms_.push_back({1.0, 0.0, 0.0, centered_bspline(n1), centered_bspline(n2), {}, {}});
        g.finish();
        return g;
    }

    /// Tensor square of the zero-mean positive definite factor with
    /// transform sin^2(xi/2) (sin(xi/4) / (xi/4))^2, i.e.
    /// phi1(x) = -h(2x + 2)/2 + h(2x) - h(2x - 2)/2 with h the hat on (-1, 1].
    static Generator vanishing_pd() {
        Generator g(GeneratorKind::vanishing_pd, {1, 1});
        const Univariate phi1({{-0.5, 2, 2.0, 3.0}, {1.0, 2, 2.0, 1.0}, {-0.5, 2, 2.0, -1.0}});
        g.terms_.push_back({1.0, 0.0, 0.0, phi1, phi1, {}, {}});
        g.finish();
        return g;
    }

    /// Real surrogate (g(x1 + 1, x2 - 1) - g(x1 - 1, x2 + 1)) / 2 with
    /// g = B_{2 n1}(. + n1) (x) B_{2 n2}(. + n2); its transform is
    /// i sin(xi1 - xi2) g^(xi), which vanishes on the diagonal.
    static Generator counterexample(int n1 = 1, int n2 = 1) {
        check_orders(n1, n2);
        Generator g(GeneratorKind::counterexample, {n1, n2});
        g.terms_.push_back({0.5, -1.0, 1.0, centered_bspline(n1), centered_bspline(n2), {}, {}});
        g.terms_.push_back({-0.5, 1.0, -1.0, centered_bspline(n1), centered_bspline(n2), {}, {}});
        g.finish();
        return g;
    }

    static Generator make(GeneratorKind kind, std::array<int, 2> orders) {
        switch (kind) {
        case GeneratorKind::bspline_tensor: return bspline_tensor(orders[0], orders[1]);
        case GeneratorKind::vanishing_pd: return vanishing_pd();
        case GeneratorKind::counterexample: return counterexample(orders[0], orders[1]);
        }
        throw InvalidArgument("unknown generator kind");
    }

    /// alpha * phi.
    Generator scaled(double alpha) const {
        Generator g = *this;
        g.amplitude_ *= alpha;
        return g;
    }

    GeneratorKind kind() const noexcept { return kind_; }
    std::array<int, 2> orders() const noexcept { return orders_; }
    double amplitude() const noexcept { return amplitude_; }
    const std::vector<SeparableTerm>& terms() const noexcept { return terms_; }
    const SupportBox& support() const noexcept { return support_; }

    double value(double x1, double x2) const {
        if (!support_.contains(x1, x2)) return 0.0;
        double sum = 0.0;
        for (const auto& t : terms_) sum += t.value(x1, x2);
        return amplitude_ * sum;
    }

    complex fourier(double xi1, double xi2) const {
        complex sum = 0.0;
        for (const auto& t : terms_)
            sum += t.weight * std::polar(1.0, -(t.shift1 * xi1 + t.shift2 * xi2)) * t.u.fourier(xi1) *
                   t.v.fourier(xi2);
        return amplitude_ * sum;
    }

    /// Every piece has order >= 3, so phi is C^1.
    bool is_c1() const {
        for (const auto& t : terms_)
            if (t.u.min_order() < 3 || t.v.min_order() < 3) return false;
        return true;
    }

    /// Largest piecewise-polynomial degree of the Radon profile on a knot panel.
    int profile_degree() const {
        int d = 0;
        for (const auto& t : terms_) d = std::max(d, t.u.max_order() + t.v.max_order() - 1);
        return d;
    }

private:
    Generator(GeneratorKind kind, std::array<int, 2> orders) : kind_(kind), orders_(orders) {}

    static void check_orders(int n1, int n2) {
        if (n1 < 1 || n2 < 1) throw InvalidArgument("generator orders must be >= 1");
    }

    static Univariate centered_bspline(int n) { return Univariate({{1.0, 2 * n, 1.0, double(n)}}); }

    void finish() {
        for (auto& t : terms_) {
            t.knots_u = t.u.breakpoints();
            t.knots_v = t.v.breakpoints();
        }
        support_ = terms_.front().support();
        for (const auto& t : terms_) {
            const auto b = t.support();
            support_.n1 = std::min(support_.n1, b.n1);
            support_.m1 = std::max(support_.m1, b.m1);
            support_.n2 = std::min(support_.n2, b.n2);
            support_.m2 = std::max(support_.m2, b.m2);
        }
    }

    GeneratorKind kind_;
    std::array<int, 2> orders_;
    double amplitude_ = 1.0;
    std::vector<SeparableTerm> terms_;
    SupportBox support_;
};

// ---------------------------------------------------------------------------

inline double eval_bspline(int m, double x) { return cardinal_bspline(m, x); }

inline double eval_generator(const Generator& g, double x1, double x2) { return g.value(x1, x2); }

inline complex fourier_generator(const Generator& g, double xi1, double xi2) { return g.fourier(xi1, xi2); }

inline constexpr double kSupNormInflation = 1.05;
inline constexpr int kSupNormGridPerPiece = 2001;

/// Upper bounds on (||d phi / dx1||_inf, ||d phi / dx2||_inf).
/// Each separable term contributes |w| sup|u'| sup|v| (resp. sup|u| sup|v'|),
/// maximized on a dense grid and inflated by kSupNormInflation.
inline std::pair<double, double> derivative_sup_norms(const Generator& g) {
    if (!g.is_c1())
        throw SmoothnessError("generator is not C^1; use grid refinement instead of the explicit step");
    double d1 = 0.0, d2 = 0.0;
    for (const auto& t : g.terms()) {
        const double su = t.u.dense_sup(false, kSupNormGridPerPiece);
        const double sv = t.v.dense_sup(false, kSupNormGridPerPiece);
        const double du = t.u.dense_sup(true, kSupNormGridPerPiece);
        const double dv = t.v.dense_sup(true, kSupNormGridPerPiece);
        d1 += std::abs(t.weight) * du * sv;
        d2 += std::abs(t.weight) * su * dv;
    }
    const double a = std::abs(g.amplitude()) * kSupNormInflation;
    return {a * d1, a * d2};
}

inline constexpr double kVanishingTolerance = 1e-10;

inline VanishingClass classify_vanishing(const Generator& g, double tol = kVanishingTolerance) {
    return std::abs(g.fourier(0.0, 0.0)) > tol ? VanishingClass::nonvanishing : VanishingClass::vanishing;
}

struct ProbeResult {
    bool pass = false;
    /// Offending node on failure; for a transform with no positive value the
    /// node holding the largest magnitude.
    std::optional<std::pair<double, double>> witness;
    complex witness_value = 0.0;
};

/// Checks Re phi^ >= -tol, |Im phi^| <= tol on a square grid, plus one
/// strictly positive node: a finite-grid stand-in for Bochner's criterion.
inline ProbeResult positive_definiteness_probe(const Generator& g, double grid_extent, double grid_step,
                                               double tol = 1e-10) {
    if (!(grid_extent > 0) || !(grid_step > 0)) throw InvalidArgument("probe needs positive extent and step");
    const int n = static_cast<int>(std::floor(grid_extent / grid_step + 1e-9));
    bool positive_seen = false;
    for (int i = -n; i <= n; ++i) {
        for (int j = -n; j <= n; ++j) {
            const double x = i * grid_step, y = j * grid_step;
            const complex v = g.fourier(x, y);
            if (v.real() < -tol || std::abs(v.imag()) > tol) return {false, std::pair{x, y}, v};
            if (v.real() > tol) positive_seen = true;
        }
    }
    if (!positive_seen) return {false, std::pair{0.0, 0.0}, g.fourier(0.0, 0.0)};
    return {true, std::nullopt, 0.0};
}

} // namespace sact
