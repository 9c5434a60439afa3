#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sact/eligibility.hpp"
#include "sact/generators.hpp"
#include "sact/linalg.hpp"
#include "sact/radon.hpp"

namespace sact {

enum class PlanMethod { explicit_grid, refine_grid, kernel_points };

inline std::string_view to_string(PlanMethod m) {
    switch (m) {
    case PlanMethod::explicit_grid: return "explicit_grid";
    case PlanMethod::refine_grid: return "refine_grid";
    case PlanMethod::kernel_points: return "kernel_points";
    }
    return "unknown";
}

inline std::optional<PlanMethod> plan_method_from_string(std::string_view s) {
    if (s == "explicit_grid") return PlanMethod::explicit_grid;
    if (s == "refine_grid") return PlanMethod::refine_grid;
    if (s == "kernel_points") return PlanMethod::kernel_points;
    return std::nullopt;
}

struct SamplingOptions {
    RadonOptions quadrature{};
    /// A plan is valid iff sigma_min > invertibility_tolerance * sigma_max.
    double invertibility_tolerance = 1e-12;
    /// sigma_max at or below this means the collocation matrix is zero.
    double zero_tolerance = 1e-10;
    /// Largest grid candidate_grid will materialize.
    std::int64_t grid_cap = 10'000'000;
    /// Candidate rows handed to one greedy selection pass; 0 means 16 #E (at least 256).
    std::int64_t candidate_budget = 0;
    /// Largest grid the refinement path will try.
    std::int64_t refine_cap = 1 << 18;
    int exhaustive_max_rows = 6;
    double exhaustive_max_subsets = 1e6;
    /// Relative pivot floor for the kernel-matrix Cholesky.
    double cholesky_tolerance = 1e-14;
    /// Largest tolerated ||A - A^T|| / ||A|| for a kernel matrix.
    double kernel_symmetry_tolerance = 1e-8;
    /// Grid refinement checks the Gram matrix first; off, it runs to its cap.
    bool refine_checks_gram = true;
};

// ---------------------------------------------------------------------------

/// <R_p phi(. - p k_j), R_p phi(. - p k_n)> over E, with its extreme eigenvalues.
struct GramMatrix {
    Matrix entries;
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    /// Jacobi eigenvalues of `entries`, ascending.
    Vector eigenvalues;
    /// sqrt(w_q) R_p phi(t_q - p k_j) on the Gauss nodes t_q; entries = factor^T factor.
    Matrix factor;

    /// lambda_min > rel^2 lambda_max: the factor's singular value ratio exceeds rel.
    bool positive_definite(double rel) const {
        return lambda_max > 0.0 && lambda_min > rel * rel * lambda_max;
    }
};

namespace detail {

inline std::vector<double> merged_sorted(std::vector<double> v, double tol = 1e-13) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end(),
                        [tol](double x, double y) { return std::abs(x - y) <= tol * (1 + std::abs(x)); }),
            v.end());
    return v;
}

inline std::vector<double> projections(const IndexSet& e, const DirectionVector& d) {
    std::vector<double> out;
    out.reserve(e.size());
    for (const auto& k : e.points()) out.push_back(d.dot(k));
    return out;
}

/// Knots of every shifted profile, merged.
inline std::vector<double> joint_breakpoints(const Generator& g, const DirectionVector& d, const IndexSet& e) {
    const auto base = profile_breakpoints(g, d);
    std::vector<double> all;
    all.reserve(base.size() * e.size());
    for (const auto& k : e.points()) {
        const double pk = d.dot(k);
        for (double b : base) all.push_back(b + pk);
    }
    return merged_sorted(std::move(all));
}

} // namespace detail

/// Gram entries by Gauss-Legendre quadrature on the merged knot panels of all
/// shifted profiles, where every product is a polynomial and the rule is exact.
/// lambda_min is sigma_min(factor)^2, which keeps relative accuracy when the
/// Gram is too close to singular for its entries to resolve lambda_min.
inline GramMatrix gram_matrix(const Generator& g, const DirectionVector& d, const IndexSet& e,
                              const SamplingOptions& opts = {}) {
    const RadonIntegrator radon(opts.quadrature);
    const auto breaks = detail::joint_breakpoints(g, d, e);
    const auto proj = detail::projections(e, d);
    const int nodes = std::max(opts.quadrature.panel_nodes, g.profile_degree() + 1);
    const GaussLegendre rule(nodes);

    std::vector<double> ts, ws;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double a = breaks[i], b = breaks[i + 1];
        if (!(b > a)) continue;
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (int q = 0; q < rule.size(); ++q) {
            ts.push_back(mid + half * rule.nodes()[q]);
            ws.push_back(half * rule.weights()[q]);
        }
    }
    const Eigen::Index nq = static_cast<Eigen::Index>(ts.size());
    const Eigen::Index ne = static_cast<Eigen::Index>(e.size());
    GramMatrix out;
    out.factor.resize(nq, ne);
    for (Eigen::Index j = 0; j < ne; ++j)
        for (Eigen::Index q = 0; q < nq; ++q)
            out.factor(q, j) = std::sqrt(ws[q]) * radon.profile(g, d, ts[q] - proj[j]);

    out.entries.resize(ne, ne);
    for (Eigen::Index j = 0; j < ne; ++j) {
        for (Eigen::Index n = j; n < ne; ++n) {
            double s = 0.0;
            for (Eigen::Index q = 0; q < nq; ++q) s += out.factor(q, j) * out.factor(q, n);
            out.entries(j, n) = out.entries(n, j) = s;
        }
    }
    out.eigenvalues = jacobi_eigenvalues(out.entries);
    const Vector sv = singular_values(out.factor);
    out.lambda_max = out.eigenvalues(ne - 1);
    const double smin = sv(sv.size() - 1);
    out.lambda_min = smin * smin;
    return out;
}

/// [L1, L2] = [-sqrt(2) M + min p k, sqrt(2) M + max p k], M = phi's box max_abs.
inline Interval profile_interval(const Generator& g, const DirectionVector& d, const IndexSet& e) {
    if (e.empty()) throw EmptyProblemError("index set is empty");
    const auto proj = detail::projections(e, d);
    const auto [mn, mx] = std::minmax_element(proj.begin(), proj.end());
    const double r = std::numbers::sqrt2 * g.support().max_abs();
    return {-r + *mn, r + *mx};
}

/// sqrt(lambda_min / (3 #E (L2 - L1))): the modulus-of-continuity target.
inline double continuity_target(const GramMatrix& gram, const IndexSet& e, const Interval& iv) {
    return std::sqrt(gram.lambda_min / (3.0 * static_cast<double>(e.size()) * iv.length()));
}

/// delta_p = continuity_target / (2 (||phi_1|| + ||phi_2||) max|N_i, M_i|).
inline double explicit_delta(const Generator& g, const DirectionVector& d, const IndexSet& e,
                             const GramMatrix& gram, const SamplingOptions& opts = {}) {
    const auto [s1, s2] = derivative_sup_norms(g);
    if (!gram.positive_definite(opts.invertibility_tolerance))
        throw IneligibleDirectionError("Gram matrix is singular for this direction");
    const Interval iv = profile_interval(g, d, e);
    return continuity_target(gram, e, iv) / (2.0 * (s1 + s2) * g.support().max_abs());
}

/// Y_p = {L1 + (L2 - L1)(k - 1) / K : k = 1..K+1}, stored by its endpoints and K.
struct UniformGrid {
    double lo = 0.0;
    double hi = 0.0;
    std::int64_t panels = 1;

    std::int64_t size() const noexcept { return panels + 1; }
    double spacing() const noexcept { return (hi - lo) / static_cast<double>(panels); }
    double point(std::int64_t i) const noexcept {
        if (i >= panels) return hi;
        return lo + (hi - lo) * (static_cast<double>(i) / static_cast<double>(panels));
    }
};

/// K_p = ceil((L2 - L1) / delta_p).
inline UniformGrid uniform_grid(const Interval& iv, double delta) {
    if (!(delta > 0) || !std::isfinite(delta)) throw InvalidArgument("grid step must be positive and finite");
    if (!(iv.hi > iv.lo)) throw InvalidArgument("grid interval must have positive length");
    const double k = std::ceil(iv.length() / delta);
    if (!(k < 9.0e15)) throw GridTooFineError("grid step too small to index", k);
    return {iv.lo, iv.hi, std::max<std::int64_t>(1, static_cast<std::int64_t>(k))};
}

/// Materialized Y_p. Throws GridTooFineError past `cap` panels.
inline std::vector<double> candidate_grid(const Interval& iv, double delta, std::int64_t cap = 10'000'000) {
    const UniformGrid grid = uniform_grid(iv, delta);
    if (grid.panels > cap)
        throw GridTooFineError("K_p = " + std::to_string(grid.panels) + " exceeds the grid cap",
                               static_cast<double>(grid.panels));
    std::vector<double> out(static_cast<std::size_t>(grid.size()));
    for (std::int64_t i = 0; i < grid.size(); ++i) out[static_cast<std::size_t>(i)] = grid.point(i);
    return out;
}

// ---------------------------------------------------------------------------

struct SamplingPlan {
    PlanMethod method = PlanMethod::explicit_grid;
    DirectionVector direction;
    IndexSet index_set;
    Interval interval;
    double delta_p = std::numeric_limits<double>::quiet_NaN();
    /// Y_p for the grid methods; panels = K_p.
    std::optional<UniformGrid> grid;
    /// Grid methods: stride through Y_p of the candidate pool that produced
    /// the selection, and the pool size.
    std::int64_t stride = 1;
    std::int64_t candidate_count = 0;
    /// X_p, ascending for grid methods and in E order for kernel points.
    std::vector<double> chosen;
    /// Position of each chosen point in Y_p (grid methods only).
    std::vector<std::int64_t> chosen_grid_index;
    /// A[i][j] = R_p phi(chosen[i] - p k_j).
    Matrix matrix_a;
    double smallest_singular_value = 0.0;
    double largest_singular_value = 0.0;
    double condition_estimate = std::numeric_limits<double>::infinity();
    bool valid = false;
    std::optional<double> gram_lambda_min;
    std::optional<double> gram_lambda_max;
};

namespace detail {

inline Matrix evaluation_matrix(const Generator& g, const DirectionVector& d, const IndexSet& e,
                                const std::vector<double>& points, const RadonIntegrator& radon) {
    const auto proj = projections(e, d);
    Matrix m(static_cast<Eigen::Index>(points.size()), static_cast<Eigen::Index>(e.size()));
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = radon.profile(g, d, points[i] - proj[j]);
    return m;
}

inline void fill_conditioning(SamplingPlan& plan, const SamplingOptions& opts) {
    const Vector sv = singular_values(plan.matrix_a);
    plan.largest_singular_value = sv.size() ? sv(0) : 0.0;
    plan.smallest_singular_value = sv.size() ? sv(sv.size() - 1) : 0.0;
    plan.condition_estimate = plan.smallest_singular_value > 0
                                  ? plan.largest_singular_value / plan.smallest_singular_value
                                  : std::numeric_limits<double>::infinity();
    plan.valid = plan.largest_singular_value > opts.zero_tolerance &&
                 plan.smallest_singular_value > opts.invertibility_tolerance * plan.largest_singular_value;
}

inline double ratio(const SamplingPlan& p) {
    return p.largest_singular_value > 0 ? p.smallest_singular_value / p.largest_singular_value : 0.0;
}

inline double binomial(double n, double k) {
    double r = 1.0;
    for (int i = 0; i < static_cast<int>(k); ++i) r = r * (n - i) / (i + 1);
    return r;
}

/// Exhaustive max-|det| search over all row subsets.
inline std::vector<Eigen::Index> exhaustive_rows(const Matrix& m, Eigen::Index count) {
    const Eigen::Index n = m.rows();
    std::vector<Eigen::Index> idx(count), best;
    for (Eigen::Index i = 0; i < count; ++i) idx[i] = i;
    double best_det = -1.0;
    Matrix sub(count, m.cols());
    while (true) {
        for (Eigen::Index i = 0; i < count; ++i) sub.row(i) = m.row(idx[i]);
        const double det = std::abs(sub.determinant());
        if (det > best_det) {
            best_det = det;
            best = idx;
        }
        Eigen::Index i = count - 1;
        while (i >= 0 && idx[i] == n - count + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (Eigen::Index j = i + 1; j < count; ++j) idx[j] = idx[j - 1] + 1;
    }
    return best;
}

} // namespace detail

/// Chooses #E rows of the tall matrix [R_p phi(y - p k_j)]_{y in grid, j}.
/// Throws SelectionFailure when the best square submatrix found is not
/// invertible within the tolerance.
inline SamplingPlan select_rows(const Generator& g, const DirectionVector& d, const IndexSet& e,
                                const std::vector<double>& grid, const SamplingOptions& opts = {}) {
    const std::size_t ne = e.size();
    if (ne == 0) throw EmptyProblemError("index set is empty");
    if (grid.size() < ne) throw InvalidArgument("candidate grid has fewer points than #E");
    const RadonIntegrator radon(opts.quadrature);
    const Matrix tall = detail::evaluation_matrix(g, d, e, grid, radon);

    auto assemble = [&](std::vector<Eigen::Index> rows) {
        std::sort(rows.begin(), rows.end());
        SamplingPlan plan;
        plan.direction = d;
        plan.index_set = e;
        plan.interval = {grid.front(), grid.back()};
        plan.candidate_count = static_cast<std::int64_t>(grid.size());
        plan.matrix_a.resize(static_cast<Eigen::Index>(ne), static_cast<Eigen::Index>(ne));
        for (std::size_t i = 0; i < ne; ++i) {
            plan.chosen.push_back(grid[static_cast<std::size_t>(rows[i])]);
            plan.chosen_grid_index.push_back(rows[i]);
            plan.matrix_a.row(static_cast<Eigen::Index>(i)) = tall.row(rows[i]);
        }
        detail::fill_conditioning(plan, opts);
        return plan;
    };

    SamplingPlan plan = assemble(greedy_volume_rows(tall, static_cast<Eigen::Index>(ne)));
    if (!plan.valid && static_cast<int>(ne) <= opts.exhaustive_max_rows &&
        detail::binomial(static_cast<double>(grid.size()), static_cast<double>(ne)) <= opts.exhaustive_max_subsets) {
        SamplingPlan alt = assemble(detail::exhaustive_rows(tall, static_cast<Eigen::Index>(ne)));
        if (detail::ratio(alt) > detail::ratio(plan)) plan = std::move(alt);
    }
    if (!plan.valid)
        throw SelectionFailure("no invertible #E-row subset above tolerance (best sigma ratio " +
                                   std::to_string(detail::ratio(plan)) + ")",
                               detail::ratio(plan));
    return plan;
}

namespace detail {

/// Greedy selection over the sub-lattice {x_0, x_s, x_2s, ..., x_K} of Y_p,
/// halving the stride s until it succeeds. Every chosen point is a node of Y_p.
inline SamplingPlan select_on_grid(const Generator& g, const DirectionVector& d, const IndexSet& e,
                                   const UniformGrid& grid, const SamplingOptions& opts) {
    const std::int64_t ne = static_cast<std::int64_t>(e.size());
    const std::int64_t budget = opts.candidate_budget > 0 ? opts.candidate_budget : std::max<std::int64_t>(256, 16 * ne);
    std::int64_t stride = std::max<std::int64_t>(1, (grid.panels + budget - 1) / budget);
    double best = 0.0;
    while (true) {
        std::vector<std::int64_t> idx;
        for (std::int64_t i = 0; i < grid.panels; i += stride) idx.push_back(i);
        idx.push_back(grid.panels);
        if (static_cast<std::int64_t>(idx.size()) > opts.grid_cap)
            throw GridTooFineError("candidate pool exceeds the grid cap", static_cast<double>(idx.size()));
        if (static_cast<std::int64_t>(idx.size()) >= ne) {
            std::vector<double> pts;
            pts.reserve(idx.size());
            for (auto i : idx) pts.push_back(grid.point(i));
            try {
                SamplingPlan plan = select_rows(g, d, e, pts, opts);
                for (auto& gi : plan.chosen_grid_index) gi = idx[static_cast<std::size_t>(gi)];
                plan.stride = stride;
                plan.grid = grid;
                return plan;
            } catch (const SelectionFailure& f) {
                best = std::max(best, f.best_ratio());
                if (stride == 1) throw SelectionFailure(f.what(), best);
            }
        } else if (stride == 1) {
            throw SelectionFailure("Y_p has fewer nodes than #E", 0.0);
        }
        stride = std::max<std::int64_t>(1, stride / 2);
    }
}

} // namespace detail

/// The explicit C^1 construction: Gram -> delta_p -> K_p -> Y_p -> X_p in Y_p.
inline SamplingPlan explicit_grid_plan(const Generator& g, const DirectionVector& d, const IndexSet& e,
                                       const SamplingOptions& opts = {}) {
    derivative_sup_norms(g); // SmoothnessError before any quadrature work
    const GramMatrix gram = gram_matrix(g, d, e, opts);
    const double delta = explicit_delta(g, d, e, gram, opts);
    const Interval iv = profile_interval(g, d, e);
    const UniformGrid grid = uniform_grid(iv, delta);
    SamplingPlan plan = detail::select_on_grid(g, d, e, grid, opts);
    plan.method = PlanMethod::explicit_grid;
    plan.interval = iv;
    plan.delta_p = delta;
    plan.gram_lambda_min = gram.lambda_min;
    plan.gram_lambda_max = gram.lambda_max;
    return plan;
}

/// Existence path: halve the spacing from (L2 - L1) / (4 #E) until a selection succeeds.
inline SamplingPlan refine_grid_plan(const Generator& g, const DirectionVector& d, const IndexSet& e,
                                     const SamplingOptions& opts = {}) {
    std::optional<GramMatrix> gram;
    if (opts.refine_checks_gram) {
        gram = gram_matrix(g, d, e, opts);
        if (!gram->positive_definite(opts.invertibility_tolerance))
            throw IneligibleDirectionError("Gram matrix is singular for this direction");
    }
    const Interval iv = profile_interval(g, d, e);
    double best = 0.0;
    for (std::int64_t panels = 4 * static_cast<std::int64_t>(e.size()); panels + 1 <= opts.refine_cap; panels *= 2) {
        const UniformGrid grid{iv.lo, iv.hi, panels};
        std::vector<double> pts(static_cast<std::size_t>(grid.size()));
        for (std::int64_t i = 0; i < grid.size(); ++i) pts[static_cast<std::size_t>(i)] = grid.point(i);
        try {
            SamplingPlan plan = select_rows(g, d, e, pts, opts);
            plan.method = PlanMethod::refine_grid;
            plan.interval = iv;
            plan.grid = grid;
            plan.delta_p = grid.spacing();
            if (gram) {
                plan.gram_lambda_min = gram->lambda_min;
                plan.gram_lambda_max = gram->lambda_max;
            }
            return plan;
        } catch (const SelectionFailure& f) {
            best = std::max(best, f.best_ratio());
        }
    }
    throw SelectionFailure("grid refinement reached its cap without an invertible subset", best);
}

/// X_p = {p k_l}: A[i][j] = R_p phi(p k_i - p k_j), certified by Cholesky.
inline SamplingPlan kernel_plan(const Generator& g, const DirectionVector& d, const IndexSet& e,
                                const SamplingOptions& opts = {}) {
    if (e.empty()) throw EmptyProblemError("index set is empty");
    const RadonIntegrator radon(opts.quadrature);
    SamplingPlan plan;
    plan.method = PlanMethod::kernel_points;
    plan.direction = d;
    plan.index_set = e;
    plan.interval = profile_interval(g, d, e);
    plan.chosen = detail::projections(e, d);
    plan.matrix_a = detail::evaluation_matrix(g, d, e, plan.chosen, radon);
    plan.candidate_count = static_cast<std::int64_t>(e.size());
    detail::fill_conditioning(plan, opts);

    const double norm = plan.matrix_a.norm();
    if (!(plan.largest_singular_value > opts.zero_tolerance))
        throw KernelNotPdError("kernel matrix is zero within tolerance");
    const double asym = (plan.matrix_a - plan.matrix_a.transpose()).norm();
    if (asym > opts.kernel_symmetry_tolerance * norm)
        throw KernelNotPdError("kernel matrix is not symmetric");
    const Matrix sym = 0.5 * (plan.matrix_a + plan.matrix_a.transpose());
    const auto chol = cholesky_check(sym, opts.cholesky_tolerance);
    if (!chol.ok)
        throw KernelNotPdError("Cholesky factorization of the kernel matrix failed at pivot " +
                               std::to_string(chol.failed_at));
    if (!plan.valid) throw KernelNotPdError("kernel matrix is positive definite but numerically singular");
    return plan;
}

inline SamplingPlan build_plan(PlanMethod method, const Generator& g, const DirectionVector& d, const IndexSet& e,
                               const SamplingOptions& opts = {}) {
    switch (method) {
    case PlanMethod::explicit_grid: return explicit_grid_plan(g, d, e, opts);
    case PlanMethod::refine_grid: return refine_grid_plan(g, d, e, opts);
    case PlanMethod::kernel_points: return kernel_plan(g, d, e, opts);
    }
    throw InvalidArgument("unknown plan method");
}

/// Finite-grid sign scan of the slice gamma -> phi^(gamma p). A diagnostic
/// only: a finite scan cannot prove a global sign condition.
struct SliceSignScan {
    double real_min = INFINITY, real_max = -INFINITY;
    double imag_min = INFINITY, imag_max = -INFINITY;

    bool real_sign_unchanged(double tol) const { return real_min >= -tol || real_max <= tol; }
    bool imag_sign_unchanged(double tol) const { return imag_min >= -tol || imag_max <= tol; }
};

inline SliceSignScan slice_sign_scan(const Generator& g, const DirectionVector& d, double gamma_max = 8 * std::numbers::pi,
                                     int nodes = 4096) {
    SliceSignScan s;
    for (int i = 0; i < nodes; ++i) {
        const double gamma = -gamma_max + 2.0 * gamma_max * i / (nodes - 1);
        const complex v = fourier_slice(g, d, gamma);
        s.real_min = std::min(s.real_min, v.real());
        s.real_max = std::max(s.real_max, v.real());
        s.imag_min = std::min(s.imag_min, v.imag());
        s.imag_max = std::max(s.imag_max, v.imag());
    }
    return s;
}

} // namespace sact
