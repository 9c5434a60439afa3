#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <string_view>
#include <vector>

#include "sact/config.hpp"
#include "sact/verify.hpp"

namespace sact {

inline constexpr int kSchemaVersion = 1;

enum class ExitCode : int { ok = 0, domain = 1, config = 2 };

namespace detail {

inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Non-finite values become null; JSON has no spelling for them.
inline json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline json box_json(const SupportBox& b) { return json::array({b.n1, b.m1, b.n2, b.m2}); }

inline json header(std::string_view sub, const RunConfig& c) {
    json h;
    h["schema_version"] = kSchemaVersion;
    h["subcommand"] = sub;
    h["generator"] = {{"kind", to_string(c.kind)}, {"orders", c.orders}};
    h["f_support"] = box_json(c.f_support);
    h["theta_radians"] = c.theta;
    return h;
}

inline json index_set_json(const IndexSet& e) {
    return {{"k1", {e.lo1(), e.hi1()}}, {"k2", {e.lo2(), e.hi2()}}, {"size", e.size()}};
}

inline json plan_json(const SamplingPlan& p) {
    json j;
    j["method"] = to_string(p.method);
    j["valid"] = p.valid;
    j["interval"] = {p.interval.lo, p.interval.hi};
    j["delta_p"] = num(p.delta_p);
    if (p.grid) {
        j["K_p"] = p.grid->panels;
        j["grid_size"] = p.grid->size();
        j["grid_spacing"] = p.grid->spacing();
        j["candidate_stride"] = p.stride;
        j["chosen_grid_index"] = p.chosen_grid_index;
    } else {
        j["K_p"] = nullptr;
        j["grid_size"] = nullptr;
    }
    j["candidate_count"] = p.candidate_count;
    j["chosen"] = p.chosen;
    j["smallest_singular_value"] = num(p.smallest_singular_value);
    j["largest_singular_value"] = num(p.largest_singular_value);
    j["condition_estimate"] = num(p.condition_estimate);
    j["gram_lambda_min"] = p.gram_lambda_min ? num(*p.gram_lambda_min) : json(nullptr);
    j["gram_lambda_max"] = p.gram_lambda_max ? num(*p.gram_lambda_max) : json(nullptr);
    return j;
}

inline std::string error_kind(const std::exception& e) {
    if (dynamic_cast<const EmptyProblemError*>(&e)) return "empty_problem";
    if (dynamic_cast<const SmoothnessError*>(&e)) return "smoothness";
    if (dynamic_cast<const WrongCaseError*>(&e)) return "wrong_case";
    if (dynamic_cast<const IneligibleDirectionError*>(&e)) return "ineligible_direction";
    if (dynamic_cast<const GridTooFineError*>(&e)) return "grid_too_fine";
    if (dynamic_cast<const SelectionFailure*>(&e)) return "selection_failure";
    if (dynamic_cast<const KernelNotPdError*>(&e)) return "kernel_not_pd";
    if (dynamic_cast<const RefuseToSolveError*>(&e)) return "refuse_to_solve";
    if (dynamic_cast<const NumericalError*>(&e)) return "numerical";
    if (dynamic_cast<const ConfigError*>(&e)) return "config";
    return "error";
}

class Artifacts {
public:
    explicit Artifacts(std::filesystem::path dir) : dir_(std::move(dir)) {}

    std::filesystem::path write_json(const std::string& name, const json& j) {
        const auto path = prepare(name + ".json");
        std::ofstream(path) << j.dump(2) << '\n';
        return path;
    }

    std::filesystem::path write_csv(const std::string& name, const std::string& text) {
        const auto path = prepare(name + ".csv");
        std::ofstream(path) << text;
        return path;
    }

private:
    std::filesystem::path prepare(const std::string& file) {
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        if (ec) throw ConfigError("cannot create output directory " + dir_.string() + ": " + ec.message());
        return dir_ / file;
    }

    std::filesystem::path dir_;
};

using Clock = std::chrono::steady_clock;

inline double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

inline int run_eligibility(const RunConfig& c, Artifacts& out, std::ostream& log) {
    const Generator g = c.generator();
    const DirectionVector d = c.direction();
    const IndexSet e = c.index_set();
    const auto fb = forbidden_angles(e);
    const auto v = check_eligibility(g, d, fb, c.eligibility);
    json j = header("eligibility", c);
    j["index_set"] = index_set_json(e);
    j["generator_class"] = v.generator_class == VanishingClass::vanishing ? "vanishing" : "nonvanishing";
    j["eligible"] = v.eligible;
    j["forbidden"] = v.forbidden;
    j["forbidden_angle_count"] = fb.size();
    if (v.nearest_forbidden) {
        j["nearest_forbidden"] = {{"theta_radians", v.nearest_forbidden->theta},
                                  {"witness", {v.nearest_forbidden->witness.k1, v.nearest_forbidden->witness.k2}},
                                  {"angular_distance", v.angular_distance}};
    } else {
        j["nearest_forbidden"] = nullptr;
    }
    j["separation_margin"] = num(separation_margin(e, d));
    if (v.generator_class == VanishingClass::vanishing)
        j["slice"] = {{"max_abs", v.slice_max},
                      {"argmax_gamma", v.slice_gamma ? json(*v.slice_gamma) : json(nullptr)},
                      {"vanishes", v.slice_vanishes}};
    out.write_json("eligibility", j);
    log << (v.eligible ? "eligible" : "ineligible") << " direction theta=" << fmt17(d.theta);
    if (v.forbidden && v.nearest_forbidden)
        log << " (orthogonal to difference (" << v.nearest_forbidden->witness.k1 << ", "
            << v.nearest_forbidden->witness.k2 << "))";
    if (v.slice_vanishes) log << " (Fourier slice vanishes)";
    log << '\n';
    return v.eligible ? 0 : 1;
}

inline int run_plan(const RunConfig& c, Artifacts& out, std::ostream& log) {
    const auto t0 = Clock::now();
    const SamplingPlan plan = build_plan(c.method, c.generator(), c.direction(), c.index_set(), c.sampling);
    json j = header("plan", c);
    j["index_set"] = index_set_json(plan.index_set);
    j["plan"] = plan_json(plan);
    if (c.output.timing) j["timing_seconds"] = seconds_since(t0);
    out.write_json("plan", j);
    log << to_string(plan.method) << " plan: " << plan.chosen.size() << " points, condition "
        << fmt17(plan.condition_estimate) << '\n';
    return 0;
}

inline int run_radon(const RunConfig& c, Artifacts& out, std::ostream& log) {
    const Generator g = c.generator();
    const DirectionVector d = c.direction();
    const RadonIntegrator radon(c.sampling.quadrature);
    std::optional<CoefficientField> field;
    SupportBox box = g.support();
    if (c.radon.target == "field") {
        const IndexSet e = c.index_set();
        field = synthesize(e, c.coefficients);
        box = field_support(g, e);
    }
    const Interval bound = radon_support_bounds(box);
    const double lo = c.radon.t_min.value_or(bound.lo), hi = c.radon.t_max.value_or(bound.hi);
    if (!(hi > lo)) throw ConfigError("radon t range is empty");
    std::string csv = "t,value\n";
    for (int i = 0; i < c.radon.points; ++i) {
        const double t = lo + (hi - lo) * i / (c.radon.points - 1);
        const double v = field ? radon.field(g, d, *field, t) : radon.profile(g, d, t);
        csv += fmt17(t) + "," + fmt17(v) + "\n";
    }
    out.write_csv("radon", csv);
    json j = header("radon", c);
    j["target"] = c.radon.target;
    j["t_range"] = {lo, hi};
    j["points"] = c.radon.points;
    j["support_bound"] = {bound.lo, bound.hi};
    out.write_json("radon", j);
    log << "wrote " << c.radon.points << " Radon samples\n";
    return 0;
}

inline int run_reconstruct(const RunConfig& c, Artifacts& out, std::ostream& log) {
    const auto t0 = Clock::now();
    const Generator g = c.generator();
    const IndexSet e = c.index_set();
    const CoefficientField truth = synthesize(e, c.coefficients);
    const SamplingPlan plan = build_plan(c.method, g, c.direction(), e, c.sampling);
    const auto t_plan = seconds_since(t0);
    const auto samples = take_samples(g, plan, truth, c.sample_mode, c.sampling.quadrature, c.oracle);
    const auto report = reconstruct(plan, samples, truth);

    std::string csv = "k1,k2,c_true,c_recovered,abs_error\n";
    for (std::size_t i = 0; i < e.size(); ++i) {
        const double ct = truth.values[i], cr = report.recovered.values[i];
        csv += std::to_string(e[i].k1) + "," + std::to_string(e[i].k2) + "," + fmt17(ct) + "," + fmt17(cr) + "," +
               fmt17(std::abs(cr - ct)) + "\n";
    }
    out.write_csv("reconstruct", csv);

    json j = header("reconstruct", c);
    j["index_set"] = index_set_json(e);
    j["sample_mode"] = c.sample_mode == SampleMode::oracle ? "oracle" : "linearity";
    j["sample_count"] = report.sample_count;
    j["residual_norm"] = num(report.residual_norm);
    j["coeff_max_error"] = num(*report.coeff_max_error);
    j["coeff_rel_l2_error"] = num(*report.coeff_rel_l2_error);
    j["conditioning_warning"] = report.conditioning_warning;
    j["plan"] = plan_json(plan);
    if (c.output.timing) j["timing_seconds"] = {{"plan", t_plan}, {"total", seconds_since(t0)}};
    out.write_json("reconstruct", j);
    log << "recovered " << e.size() << " coefficients from " << report.sample_count
        << " samples, max error " << fmt17(*report.coeff_max_error) << '\n';
    return 0;
}

inline int run_verify(const RunConfig& c, Artifacts& out, std::ostream& log) {
    SuiteInputs in;
    in.generator = c.generator();
    in.direction = c.direction();
    in.index_set = c.index_set();
    in.coefficients = synthesize(in.index_set, c.coefficients);
    in.method = c.method;
    in.sampling = c.sampling;
    in.oracle = c.oracle;
    in.eligibility = c.eligibility;
    in.probes = c.verify_probes;
    in.seed = c.verify_seed;
    const auto checks = run_invariant_suite(in);
    json j = header("verify", c);
    j["checks"] = json::array();
    bool all = true;
    for (const auto& ch : checks) {
        all = all && ch.passed;
        j["checks"].push_back({{"name", ch.name},
                               {"passed", ch.passed},
                               {"value", num(ch.value)},
                               {"threshold", ch.threshold},
                               {"detail", ch.detail}});
        log << (ch.passed ? "PASS " : "FAIL ") << ch.name << " value=" << fmt17(ch.value) << '\n';
    }
    j["passed"] = all;
    out.write_json("verify", j);
    return all ? 0 : 1;
}

} // namespace detail

inline const std::vector<std::string_view>& subcommands() {
    static const std::vector<std::string_view> names{"eligibility", "plan", "radon", "reconstruct", "verify"};
    return names;
}

/// Runs one subcommand, writing artifacts under config.output.dir.
/// Returns 0 on success, 1 on domain errors, 2 on config errors.
inline int run(std::string_view subcommand, const RunConfig& config, std::ostream& log = std::cout,
               std::ostream& err = std::cerr) {
    detail::Artifacts out(config.output.dir);
    try {
        if (subcommand == "eligibility") return detail::run_eligibility(config, out, log);
        if (subcommand == "plan") return detail::run_plan(config, out, log);
        if (subcommand == "radon") return detail::run_radon(config, out, log);
        if (subcommand == "reconstruct") return detail::run_reconstruct(config, out, log);
        if (subcommand == "verify") return detail::run_verify(config, out, log);
        err << "error: unknown subcommand " << subcommand << '\n';
        return static_cast<int>(ExitCode::config);
    } catch (const InvalidArgument& e) {
        err << "config error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::config);
    } catch (const DomainError& e) {
        json j = detail::header(subcommand, config);
        j["error"] = {{"kind", detail::error_kind(e)}, {"message", e.what()}};
        try {
            out.write_json(std::string(subcommand), j);
        } catch (const Error&) {
        }
        err << "error (" << detail::error_kind(e) << "): " << e.what() << '\n';
        return static_cast<int>(ExitCode::domain);
    }
}

/// Loads the config file, then runs. Config problems map to exit code 2.
inline int run_file(std::string_view subcommand, const std::string& config_path,
                    const std::optional<std::string>& output_dir = std::nullopt, std::ostream& log = std::cout,
                    std::ostream& err = std::cerr) {
    RunConfig config;
    try {
        config = load_config(config_path);
    } catch (const InvalidArgument& e) {
        err << "config error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::config);
    }
    if (output_dir) config.output.dir = *output_dir;
    return run(subcommand, config, log, err);
}

} // namespace sact
