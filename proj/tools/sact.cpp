// sact: single-angle Radon reconstruction experiments driven by a JSON config.

#include <optional>
#include <string>

#include <CLI11.hpp>

#include "sact/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Single-angle Radon sampling and reconstruction"};
    app.require_subcommand(1);

    std::string config_path;
    std::string output_dir;
    for (auto name : sact::subcommands()) {
        auto* sub = app.add_subcommand(std::string(name));
        sub->add_option("-c,--config", config_path, "JSON run configuration")->required();
        sub->add_option("-o,--output-dir", output_dir, "directory for CSV/JSON artifacts (overrides output.dir)");
    }
    app.get_subcommand("eligibility")->description("test the direction against the forbidden angles and slice");
    app.get_subcommand("plan")->description("build a sampling plan and report its conditioning");
    app.get_subcommand("radon")->description("tabulate R_p f or R_p phi as CSV");
    app.get_subcommand("reconstruct")->description("sample, solve for the #E coefficients, report errors");
    app.get_subcommand("verify")->description("run the invariant checks on the configured scenario");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    const auto* chosen = app.get_subcommands().front();
    std::optional<std::string> out;
    if (!output_dir.empty()) out = output_dir;
    return sact::run_file(chosen->get_name(), config_path, out);
}
