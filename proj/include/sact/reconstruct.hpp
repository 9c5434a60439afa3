#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "sact/linalg.hpp"
#include "sact/oracle.hpp"
#include "sact/sampling.hpp"

namespace sact {

/// Explicit coefficient values, or a seed for uniform draws in [-1, 1].
struct CoefficientSpec {
    std::optional<std::vector<double>> values;
    std::uint64_t seed = 42;
};

/// Deterministic across platforms: the mt19937_64 stream is fixed by the
/// standard and the mapping to [-1, 1] avoids library distributions.
inline CoefficientField synthesize(const IndexSet& e, const CoefficientSpec& spec) {
    if (spec.values) {
        if (spec.values->size() != e.size())
            throw ConfigError("coefficient list has " + std::to_string(spec.values->size()) + " entries, #E is " +
                              std::to_string(e.size()));
        return {e, *spec.values};
    }
    std::mt19937_64 rng(spec.seed);
    std::vector<double> v(e.size());
    for (auto& x : v) x = 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
    return {e, std::move(v)};
}

inline CoefficientField synthesize(const IndexSet& e, std::uint64_t seed) {
    return synthesize(e, CoefficientSpec{std::nullopt, seed});
}

enum class SampleMode { linearity, oracle };

/// R_p f at the plan's points: via the shift identity (linearity) or by
/// integrating f itself along each line (oracle).
inline std::vector<double> take_samples(const Generator& g, const SamplingPlan& plan, const CoefficientField& c,
                                        SampleMode mode = SampleMode::linearity, const RadonOptions& quad = {},
                                        const OracleConfig& oracle = {}) {
    std::vector<double> out;
    out.reserve(plan.chosen.size());
    const RadonIntegrator radon(quad);
    for (double x : plan.chosen)
        out.push_back(mode == SampleMode::linearity ? radon.field(g, plan.direction, c, x)
                                                    : line_integral_oracle(g, c, plan.direction, x, oracle));
    return out;
}

/// A c = samples, in E order. Refuses invalid plans.
inline CoefficientField solve(const SamplingPlan& plan, const std::vector<double>& samples) {
    if (!plan.valid) throw RefuseToSolveError("sampling plan is not valid; refusing to solve");
    const Eigen::Index n = plan.matrix_a.rows();
    if (static_cast<Eigen::Index>(samples.size()) != n)
        throw InvalidArgument("sample count does not match the plan");
    const Vector b = Eigen::Map<const Vector>(samples.data(), n);
    const Vector x = lu_solve_refined(plan.matrix_a, b);
    return {plan.index_set, std::vector<double>(x.data(), x.data() + n)};
}

struct PlanSummary {
    PlanMethod method = PlanMethod::explicit_grid;
    double theta = 0.0;
    double smallest_singular_value = 0.0;
    double condition_estimate = 0.0;
    std::size_t points = 0;
};

struct ReconstructionReport {
    CoefficientField recovered;
    double residual_norm = 0.0;
    std::optional<double> coeff_max_error;
    std::optional<double> coeff_rel_l2_error;
    std::size_t sample_count = 0;
    PlanSummary plan;
    /// Residual after refinement above kResidualWarning relative to the data.
    bool conditioning_warning = false;
};

inline constexpr double kResidualWarning = 1e-10;

inline ReconstructionReport reconstruct(const SamplingPlan& plan, const std::vector<double>& samples,
                                        const std::optional<CoefficientField>& truth = std::nullopt) {
    ReconstructionReport r;
    r.recovered = solve(plan, samples);
    r.sample_count = samples.size();
    r.plan = {plan.method, plan.direction.theta, plan.smallest_singular_value, plan.condition_estimate,
              plan.chosen.size()};
    const Eigen::Index n = plan.matrix_a.rows();
    const Vector b = Eigen::Map<const Vector>(samples.data(), n);
    const Vector x = Eigen::Map<const Vector>(r.recovered.values.data(), n);
    r.residual_norm = (plan.matrix_a * x - b).norm();
    const double scale = b.norm() + plan.matrix_a.norm() * x.norm();
    r.conditioning_warning = r.residual_norm > kResidualWarning * std::max(scale, 1e-300);
    if (truth) {
        if (truth->size() != r.recovered.size()) throw InvalidArgument("ground truth size does not match #E");
        double mx = 0.0, num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < truth->size(); ++i) {
            const double e = std::abs(r.recovered.values[i] - truth->values[i]);
            mx = std::max(mx, e);
            num += e * e;
            den += truth->values[i] * truth->values[i];
        }
        r.coeff_max_error = mx;
        r.coeff_rel_l2_error = den > 0 ? std::sqrt(num / den) : std::sqrt(num);
    }
    return r;
}

/// f(x1, x2) = sum_k c_k phi(x - k).
inline double evaluate_reconstruction(const Generator& g, const CoefficientField& c, double x1, double x2) {
    return evaluate_field(g, c, x1, x2);
}

} // namespace sact
