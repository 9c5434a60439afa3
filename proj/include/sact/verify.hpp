#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "sact/eligibility.hpp"
#include "sact/linalg.hpp"
#include "sact/oracle.hpp"
#include "sact/reconstruct.hpp"
#include "sact/sampling.hpp"

namespace sact {

/// Smallest singular value of sqrt(h) [R_p phi(t_i - p k_j)] on the uniform
/// grid of step h over [L1, L2]; tends to sqrt(lambda_min(G)) as h -> 0.
inline double dense_independence_test(const Generator& g, const DirectionVector& d, const IndexSet& e,
                                      double grid_step, const RadonOptions& quad = {}) {
    if (!(grid_step > 0)) throw InvalidArgument("grid step must be positive");
    const Interval iv = profile_interval(g, d, e);
    const auto n = static_cast<std::size_t>(std::ceil(iv.length() / grid_step)) + 1;
    std::vector<double> ts(n);
    for (std::size_t i = 0; i < n; ++i) ts[i] = iv.lo + static_cast<double>(i) * grid_step;
    const RadonIntegrator radon(quad);
    Matrix m = detail::evaluation_matrix(g, d, e, ts, radon) * std::sqrt(grid_step);
    const Vector sv = singular_values(m);
    return sv(sv.size() - 1);
}

/// integral of R_p phi by Gauss-Legendre on the knot panels (exact for the
/// piecewise polynomial profile).
inline double profile_integral(const Generator& g, const DirectionVector& d, const RadonOptions& quad = {}) {
    const RadonIntegrator radon(quad);
    const GaussLegendre rule(std::max(quad.panel_nodes, g.profile_degree() + 1));
    const auto bps = profile_breakpoints(g, d);
    return rule.integrate_panels([&](double t) { return radon.profile(g, d, t); }, bps);
}

/// max over n points xi in [-xi_max, xi_max] of |FT[R_p phi](xi) - phi^(xi p)|,
/// with the transform taken by the trapezoid rule on each knot panel plus one
/// Richardson step.
inline double slice_transform_check(const Generator& g, const DirectionVector& d, double xi_max, int n,
                                    int per_panel = 128, const RadonOptions& quad = {}) {
    if (n < 64) throw InvalidArgument("slice check needs n >= 64");
    if (per_panel < 2 || per_panel % 2) throw InvalidArgument("trapezoid panel count must be even and >= 2");
    const RadonIntegrator radon(quad);
    const auto bps = profile_breakpoints(g, d);
    struct Panel {
        double a, h;
        std::vector<double> f;
    };
    std::vector<Panel> panels;
    for (std::size_t i = 0; i + 1 < bps.size(); ++i) {
        const double a = bps[i], b = bps[i + 1];
        if (!(b > a)) continue;
        Panel p{a, (b - a) / per_panel, std::vector<double>(static_cast<std::size_t>(per_panel) + 1)};
        for (int j = 0; j <= per_panel; ++j) p.f[static_cast<std::size_t>(j)] = radon.profile(g, d, a + j * p.h);
        panels.push_back(std::move(p));
    }
    double worst = 0.0;
    for (int k = 0; k < n; ++k) {
        const double xi = -xi_max + 2.0 * xi_max * k / (n - 1);
        complex total = 0.0;
        for (const auto& p : panels) {
            complex fine = 0.0, coarse = 0.0;
            for (int j = 0; j <= per_panel; ++j) {
                const complex v = p.f[static_cast<std::size_t>(j)] * std::polar(1.0, -xi * (p.a + j * p.h));
                const double wf = (j == 0 || j == per_panel) ? 0.5 : 1.0;
                fine += wf * v;
                if (j % 2 == 0) coarse += wf * v;
            }
            fine *= p.h;
            coarse *= 2.0 * p.h;
            total += (4.0 * fine - coarse) / 3.0;
        }
        worst = std::max(worst, std::abs(total - fourier_slice(g, d, xi)));
    }
    return worst;
}

// ---------------------------------------------------------------------------

struct CheckResult {
    std::string name;
    bool passed = false;
    double value = 0.0;
    double threshold = 0.0;
    std::string detail;
};

struct SuiteInputs {
    Generator generator = Generator::bspline_tensor(2, 2);
    DirectionVector direction;
    IndexSet index_set;
    CoefficientField coefficients;
    PlanMethod method = PlanMethod::explicit_grid;
    SamplingOptions sampling{};
    OracleConfig oracle{};
    EligibilityOptions eligibility{};
    int probes = 50;
    std::uint64_t seed = 7;
    double slice_xi_max = 10.0;
    int slice_points = 201;
};

/// The invariant checks behind `sact verify`, on one scenario.
inline std::vector<CheckResult> run_invariant_suite(const SuiteInputs& in) {
    const Generator& g = in.generator;
    const DirectionVector& d = in.direction;
    const IndexSet& e = in.index_set;
    const RadonIntegrator radon(in.sampling.quadrature);
    std::mt19937_64 rng(in.seed);
    auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53); };
    std::vector<CheckResult> out;

    {
        const double bound = radon_support_bounds(g.support()).hi;
        double worst = 0.0;
        for (int i = 1; i <= 100; ++i) {
            const double t = bound * (1.0 + i / 100.0);
            worst = std::max({worst, std::abs(radon.profile(g, d, t)), std::abs(radon.profile(g, d, -t))});
        }
        out.push_back({"support_bound", worst == 0.0, worst, 0.0, "R_p phi outside [-sqrt2 M, sqrt2 M]"});
    }
    {
        const double gap = std::abs(profile_integral(g, d, in.sampling.quadrature) - g.fourier(0, 0).real());
        out.push_back({"mass", gap <= 1e-8, gap, 1e-8, "integral of R_p phi vs phi^(0)"});
    }
    {
        const double dev = slice_transform_check(g, d, in.slice_xi_max, in.slice_points);
        out.push_back({"fourier_slice", dev <= 1e-4, dev, 1e-4, "numeric transform of R_p phi vs phi^(xi p)"});
    }
    {
        const Interval iv = profile_interval(g, d, e);
        double worst = 0.0;
        for (int i = 0; i < in.probes; ++i) {
            const double t = uniform(iv.lo, iv.hi);
            worst = std::max(worst, std::abs(radon.field(g, d, in.coefficients, t) -
                                             line_integral_oracle(g, in.coefficients, d, t, in.oracle)));
        }
        out.push_back({"oracle_agreement", worst <= 1e-6, worst, 1e-6, "shift identity vs direct line integral"});
    }
    {
        const IndexSet corner(e.lo1(), std::min(e.hi1(), e.lo1() + 1), e.lo2(), std::min(e.hi2(), e.lo2() + 1));
        const auto verdict = check_eligibility(g, d, forbidden_angles(corner), in.eligibility);
        const double sigma = dense_independence_test(g, d, corner, in.oracle.dense_grid_step, in.sampling.quadrature);
        const bool agree = verdict.eligible == (sigma > 1e-6);
        out.push_back({"eligibility_independence", agree, sigma, 1e-6,
                       std::string("corner of E: eligible=") + (verdict.eligible ? "true" : "false")});
    }
    {
        const auto verdict = check_eligibility(g, d, forbidden_angles(e), in.eligibility);
        CheckResult plan_check{"plan_reevaluation", false, 0.0, 1e-10, ""};
        CheckResult rt{"round_trip", false, 0.0, 1e-6, ""};
        try {
            const SamplingPlan plan = build_plan(in.method, g, d, e, in.sampling);
            double worst = 0.0;
            const auto& pts = e.points();
            for (Eigen::Index i = 0; i < plan.matrix_a.rows(); ++i)
                for (Eigen::Index j = 0; j < plan.matrix_a.cols(); ++j)
                    worst = std::max(worst, std::abs(plan.matrix_a(i, j) -
                                                     radon_shifted_generator(g, d, pts[j], plan.chosen[i])));
            plan_check.value = worst;
            plan_check.passed = worst <= 1e-10 && plan.chosen.size() == e.size();
            const auto samples = take_samples(g, plan, in.coefficients, SampleMode::linearity, in.sampling.quadrature);
            const auto report = reconstruct(plan, samples, in.coefficients);
            rt.value = *report.coeff_max_error;
            rt.passed = rt.value <= rt.threshold && report.sample_count == e.size();
            rt.detail = "coefficient max error with #E samples";
            plan_check.detail = std::string(to_string(plan.method)) + " plan, eligible=" +
                                (verdict.eligible ? "true" : "false");
        } catch (const DomainError& err) {
            // Refusing an ineligible direction is the expected outcome.
            plan_check.passed = rt.passed = !verdict.eligible;
            plan_check.detail = rt.detail = err.what();
            plan_check.value = rt.value = NAN;
        }
        out.push_back(plan_check);
        out.push_back(rt);
    }
    return out;
}

} // namespace sact
