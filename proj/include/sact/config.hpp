#pragma once

#include <array>
#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sact/eligibility.hpp"
#include "sact/oracle.hpp"
#include "sact/reconstruct.hpp"
#include "sact/sampling.hpp"

namespace sact {

using json = nlohmann::json;

struct RadonOutputSpec {
    /// "field" samples R_p f of the configured coefficients, "generator" R_p phi.
    std::string target = "field";
    std::optional<double> t_min, t_max;
    int points = 401;
};

struct OutputSpec {
    std::string dir = "out";
    /// Adds wall-clock timings to JSON reports; off by default so reruns are byte-identical.
    bool timing = false;
};

struct RunConfig {
    GeneratorKind kind = GeneratorKind::bspline_tensor;
    std::array<int, 2> orders{2, 2};
    SupportBox f_support{};
    CoefficientSpec coefficients{};
    double theta = 0.0;
    PlanMethod method = PlanMethod::explicit_grid;
    SampleMode sample_mode = SampleMode::linearity;
    SamplingOptions sampling{};
    EligibilityOptions eligibility{};
    OracleConfig oracle{};
    RadonOutputSpec radon{};
    OutputSpec output{};
    int verify_probes = 50;
    std::uint64_t verify_seed = 7;

    Generator generator() const { return Generator::make(kind, orders); }
    DirectionVector direction() const { return DirectionVector::from_angle(theta); }
    IndexSet index_set() const { return build_index_set(generator().support(), f_support); }
};

namespace detail {

class KeyChecker {
public:
    void allow(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
        if (!obj.is_object()) {
            bad_.push_back(path + " (expected an object)");
            return;
        }
        std::set<std::string> ok(keys.begin(), keys.end());
        for (auto it = obj.begin(); it != obj.end(); ++it)
            if (!ok.count(it.key())) unknown_.push_back(path.empty() ? it.key() : path + "." + it.key());
    }
    void missing(const std::string& key) { missing_.push_back(key); }
    void bad(const std::string& what) { bad_.push_back(what); }

    void raise_if_needed() const {
        if (unknown_.empty() && missing_.empty() && bad_.empty()) return;
        std::ostringstream msg;
        msg << "invalid config";
        auto list = [&](const char* label, const std::vector<std::string>& v) {
            if (v.empty()) return;
            msg << "; " << label << ":";
            for (const auto& k : v) msg << ' ' << k;
        };
        list("unknown keys", unknown_);
        list("missing keys", missing_);
        list("bad values", bad_);
        throw ConfigError(msg.str());
    }

private:
    std::vector<std::string> unknown_, missing_, bad_;
};

template <class T>
void read(const json& obj, const char* key, T& out, KeyChecker& kc, const std::string& path) {
    if (!obj.is_object() || !obj.contains(key)) return;
    try {
        out = obj.at(key).get<T>();
    } catch (const json::exception&) {
        kc.bad(path + key + " (wrong type)");
    }
}

} // namespace detail

inline RunConfig parse_config(const json& j) {
    detail::KeyChecker kc;
    RunConfig c;
    kc.allow(j, "", {"generator", "f_support", "coefficients", "direction", "plan", "reconstruct", "quadrature",
                     "tolerances", "radon", "verify", "output"});
    if (!j.is_object()) kc.raise_if_needed();

    if (!j.contains("generator")) {
        kc.missing("generator");
    } else {
        const auto& g = j["generator"];
        kc.allow(g, "generator", {"kind", "orders"});
        if (!g.is_object() || !g.contains("kind")) {
            kc.missing("generator.kind");
        } else if (!g["kind"].is_string() || !generator_kind_from_string(g["kind"].get<std::string>())) {
            kc.bad("generator.kind (expected bspline_tensor, vanishing_pd or counterexample)");
        } else {
            c.kind = *generator_kind_from_string(g["kind"].get<std::string>());
            c.orders = c.kind == GeneratorKind::bspline_tensor ? std::array{2, 2} : std::array{1, 1};
        }
        std::vector<int> orders;
        detail::read(g, "orders", orders, kc, "generator.");
        if (g.is_object() && g.contains("orders")) {
            if (orders.size() != 2 || orders[0] < 1 || orders[1] < 1)
                kc.bad("generator.orders (expected two integers >= 1)");
            else if (c.kind == GeneratorKind::vanishing_pd && (orders[0] != 1 || orders[1] != 1))
                kc.bad("generator.orders (vanishing_pd has fixed orders [1, 1])");
            else
                c.orders = {orders[0], orders[1]};
        }
    }

    if (!j.contains("f_support")) {
        kc.missing("f_support");
    } else {
        std::vector<double> box;
        detail::read(j, "f_support", box, kc, "");
        if (box.size() != 4)
            kc.bad("f_support (expected [a1, b1, a2, b2])");
        else if (!(box[0] < box[1]) || !(box[2] < box[3]))
            kc.bad("f_support (need a1 < b1 and a2 < b2)");
        else
            c.f_support = {box[0], box[1], box[2], box[3]};
    }

    if (j.contains("coefficients")) {
        const auto& co = j["coefficients"];
        kc.allow(co, "coefficients", {"seed", "values"});
        if (co.is_object() && co.contains("seed") && co.contains("values"))
            kc.bad("coefficients (give either seed or values)");
        detail::read(co, "seed", c.coefficients.seed, kc, "coefficients.");
        if (co.is_object() && co.contains("values")) {
            std::vector<double> v;
            detail::read(co, "values", v, kc, "coefficients.");
            c.coefficients.values = std::move(v);
        }
    }

    if (!j.contains("direction")) {
        kc.missing("direction.theta_radians");
    } else {
        const auto& d = j["direction"];
        if (d.is_object() && d.contains("theta_degrees"))
            kc.bad("direction.theta_degrees (angles are accepted in radians only; use theta_radians)");
        kc.allow(d, "direction", {"theta_radians", "theta_degrees"});
        if (!d.is_object() || !d.contains("theta_radians")) {
            kc.missing("direction.theta_radians");
        } else {
            detail::read(d, "theta_radians", c.theta, kc, "direction.");
            if (!std::isfinite(c.theta)) kc.bad("direction.theta_radians (must be finite)");
            else c.theta = DirectionVector::from_angle(c.theta).theta;
        }
    }

    if (j.contains("plan")) {
        const auto& p = j["plan"];
        kc.allow(p, "plan", {"method", "grid_cap", "candidate_budget", "refine_cap"});
        std::string m;
        detail::read(p, "method", m, kc, "plan.");
        if (!m.empty()) {
            if (auto pm = plan_method_from_string(m)) c.method = *pm;
            else kc.bad("plan.method (expected explicit_grid, refine_grid or kernel_points)");
        }
        detail::read(p, "grid_cap", c.sampling.grid_cap, kc, "plan.");
        detail::read(p, "candidate_budget", c.sampling.candidate_budget, kc, "plan.");
        detail::read(p, "refine_cap", c.sampling.refine_cap, kc, "plan.");
        if (c.sampling.grid_cap < 1 || c.sampling.refine_cap < 2 || c.sampling.candidate_budget < 0)
            kc.bad("plan caps must be positive");
    }

    if (j.contains("reconstruct")) {
        const auto& r = j["reconstruct"];
        kc.allow(r, "reconstruct", {"sample_mode"});
        std::string m;
        detail::read(r, "sample_mode", m, kc, "reconstruct.");
        if (m == "oracle") c.sample_mode = SampleMode::oracle;
        else if (!m.empty() && m != "linearity") kc.bad("reconstruct.sample_mode (expected linearity or oracle)");
    }

    if (j.contains("quadrature")) {
        const auto& q = j["quadrature"];
        kc.allow(q, "quadrature", {"panel_nodes", "panel_subdivisions", "oracle_refinement", "oracle_tolerance",
                                   "dense_grid_step"});
        detail::read(q, "panel_nodes", c.sampling.quadrature.panel_nodes, kc, "quadrature.");
        detail::read(q, "panel_subdivisions", c.sampling.quadrature.panel_subdivisions, kc, "quadrature.");
        detail::read(q, "oracle_refinement", c.oracle.quadrature_refinement, kc, "quadrature.");
        detail::read(q, "oracle_tolerance", c.oracle.tolerance, kc, "quadrature.");
        detail::read(q, "dense_grid_step", c.oracle.dense_grid_step, kc, "quadrature.");
        if (c.sampling.quadrature.panel_nodes < 1 || c.sampling.quadrature.panel_subdivisions < 1)
            kc.bad("quadrature panel settings must be >= 1");
        if (c.oracle.quadrature_refinement < 2) kc.bad("quadrature.oracle_refinement (must be >= 2)");
        if (!(c.oracle.tolerance > 0) || !(c.oracle.dense_grid_step > 0))
            kc.bad("quadrature oracle tolerance and dense step must be positive");
    }

    if (j.contains("tolerances")) {
        const auto& t = j["tolerances"];
        kc.allow(t, "tolerances", {"invertibility", "zero", "angular", "slice_threshold", "slice_gamma_max",
                                   "slice_nodes"});
        detail::read(t, "invertibility", c.sampling.invertibility_tolerance, kc, "tolerances.");
        detail::read(t, "zero", c.sampling.zero_tolerance, kc, "tolerances.");
        detail::read(t, "angular", c.eligibility.angular_tolerance, kc, "tolerances.");
        detail::read(t, "slice_threshold", c.eligibility.scan.threshold, kc, "tolerances.");
        detail::read(t, "slice_gamma_max", c.eligibility.scan.gamma_max, kc, "tolerances.");
        detail::read(t, "slice_nodes", c.eligibility.scan.nodes, kc, "tolerances.");
        if (!(c.sampling.invertibility_tolerance > 0) || !(c.eligibility.angular_tolerance > 0) ||
            !(c.eligibility.scan.threshold > 0) || !(c.eligibility.scan.gamma_max > 0) || c.eligibility.scan.nodes < 2)
            kc.bad("tolerances must be positive (slice_nodes >= 2)");
    }

    if (j.contains("radon")) {
        const auto& r = j["radon"];
        kc.allow(r, "radon", {"target", "t_min", "t_max", "points"});
        detail::read(r, "target", c.radon.target, kc, "radon.");
        if (c.radon.target != "field" && c.radon.target != "generator")
            kc.bad("radon.target (expected field or generator)");
        if (r.is_object() && r.contains("t_min")) {
            double v = 0;
            detail::read(r, "t_min", v, kc, "radon.");
            c.radon.t_min = v;
        }
        if (r.is_object() && r.contains("t_max")) {
            double v = 0;
            detail::read(r, "t_max", v, kc, "radon.");
            c.radon.t_max = v;
        }
        detail::read(r, "points", c.radon.points, kc, "radon.");
        if (c.radon.points < 2) kc.bad("radon.points (must be >= 2)");
    }

    if (j.contains("verify")) {
        const auto& v = j["verify"];
        kc.allow(v, "verify", {"probes", "seed"});
        detail::read(v, "probes", c.verify_probes, kc, "verify.");
        detail::read(v, "seed", c.verify_seed, kc, "verify.");
        if (c.verify_probes < 1) kc.bad("verify.probes (must be >= 1)");
    }

    if (j.contains("output")) {
        const auto& o = j["output"];
        kc.allow(o, "output", {"dir", "timing"});
        detail::read(o, "dir", c.output.dir, kc, "output.");
        detail::read(o, "timing", c.output.timing, kc, "output.");
    }

    kc.raise_if_needed();
    return c;
}

inline RunConfig parse_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config(j);
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

} // namespace sact
