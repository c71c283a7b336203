// tbpc: scenario runner for the transboundary pollution control solvers.
#include "tbpc/tbpc.h"

#include "CLI11.hpp"

#include <cstdio>
#include <memory>
#include <optional>
#include <string>

namespace {

constexpr int kOk = 0;
constexpr int kSolverFailure = 1;
constexpr int kInputError = 2;

using ScenarioPtr = std::unique_ptr<tbpc_scenario, decltype(&tbpc_scenario_free)>;
using ResultPtr = std::unique_ptr<tbpc_result, decltype(&tbpc_result_free)>;

int input_or_solver(tbpc_status s) {
    return (s == TBPC_INVALID_ARGUMENT || s == TBPC_PARSE_ERROR || s == TBPC_IO_ERROR) ? kInputError : kSolverFailure;
}

int report_error(tbpc_status s, const char* what) {
    std::fprintf(stderr, "tbpc: %s: %s (%s)\n", what, tbpc_last_error(), tbpc_status_string(s));
    return input_or_solver(s);
}

struct Common {
    std::optional<std::uint64_t> seed;
    std::string preset;
    bool parallel = false;
};

/// Loads the file, or the preset scenario when no file is given.
int load(const std::string& file, const Common& common, ScenarioPtr& out) {
    tbpc_scenario* raw = nullptr;
    tbpc_status s = TBPC_OK;
    if (!file.empty()) s = tbpc_scenario_load(file.c_str(), &raw);
    else if (!common.preset.empty()) s = tbpc_scenario_preset(common.preset.c_str(), &raw);
    else {
        std::fprintf(stderr, "tbpc: need a scenario file or --preset\n");
        return kInputError;
    }
    if (s != TBPC_OK) return report_error(s, "cannot load scenario");
    out.reset(raw);
    if (!file.empty() && !common.preset.empty()) {
        s = tbpc_scenario_apply_preset(out.get(), common.preset.c_str());
        if (s != TBPC_OK) return report_error(s, "cannot apply preset");
    }
    return kOk;
}

void print_result(const tbpc_result* r) {
    for (size_t i = 0; i < tbpc_result_report_count(r); ++i) std::printf("%s\n", tbpc_result_report(r, i));
    for (size_t i = 0; i < tbpc_result_failure_count(r); ++i)
        std::fprintf(stderr, "tbpc: failure: %s\n", tbpc_result_failure(r, i));
}

void print_files(const tbpc_result* r) {
    std::printf("wrote %zu files to %s\n", tbpc_result_file_count(r), tbpc_result_directory(r));
}

int cmd_run(const std::string& file, const std::string& out_dir, const Common& common) {
    ScenarioPtr sc(nullptr, tbpc_scenario_free);
    if (int rc = load(file, common, sc); rc != kOk) return rc;
    tbpc_run_options opts{};
    opts.output_dir = out_dir.empty() ? nullptr : out_dir.c_str();
    opts.has_seed = common.seed.has_value();
    opts.seed = common.seed.value_or(0);
    opts.parallel = common.parallel ? 1 : -1;
    tbpc_result* raw = nullptr;
    const tbpc_status s = tbpc_run(sc.get(), &opts, &raw);
    if (s != TBPC_OK) return report_error(s, "run failed");
    ResultPtr r(raw, tbpc_result_free);
    print_result(r.get());
    print_files(r.get());
    return tbpc_result_exit_code(r.get());
}

int cmd_figure(const std::string& name, const std::string& file, std::string out_dir, const Common& common) {
    ScenarioPtr sc(nullptr, tbpc_scenario_free);
    if (!file.empty()) {
        if (int rc = load(file, common, sc); rc != kOk) return rc;
    } else {
        tbpc_scenario* raw = nullptr;
        if (tbpc_status s = tbpc_scenario_figure(name.c_str(), &raw); s != TBPC_OK) return report_error(s, "unknown figure");
        sc.reset(raw);
        if (!common.preset.empty()) {
            if (tbpc_status s = tbpc_scenario_apply_preset(sc.get(), common.preset.c_str()); s != TBPC_OK)
                return report_error(s, "cannot apply preset");
        }
    }
    if (out_dir.empty()) out_dir = "out/" + name;
    tbpc_result* raw = nullptr;
    const tbpc_status s = tbpc_emit_figure(sc.get(), name.c_str(), out_dir.c_str(), &raw);
    if (s != TBPC_OK) return report_error(s, "figure failed");
    ResultPtr r(raw, tbpc_result_free);
    print_result(r.get());
    print_files(r.get());
    return tbpc_result_exit_code(r.get());
}

int cmd_check(const std::string& file, const std::string& prop, const Common& common) {
    ScenarioPtr sc(nullptr, tbpc_scenario_free);
    if (int rc = load(file, common, sc); rc != kOk) return rc;
    tbpc_result* raw = nullptr;
    const tbpc_status s = tbpc_check(sc.get(), prop.c_str(), &raw);
    if (s != TBPC_OK) return report_error(s, "check failed");
    ResultPtr r(raw, tbpc_result_free);
    print_result(r.get());
    return tbpc_result_exit_code(r.get());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Transboundary pollution control: closed forms, oracle and proposition checks"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(tbpc_version()));

    Common common;
    app.add_option("--seed", common.seed, "Monte Carlo seed (overrides the scenario)");
    app.add_option("--preset", common.preset, "Model preset (paper-2015)")->check(CLI::IsMember({"paper-2015"}));
    app.add_flag("--parallel", common.parallel, "Run independent solvers concurrently");

    std::string run_file, run_out;
    auto* run = app.add_subcommand("run", "Run a scenario and write CSV surfaces, report.txt and MANIFEST");
    run->add_option("file", run_file, "Scenario file");
    run->add_option("--out", run_out, "Output directory (overrides the scenario)");
    run->fallthrough();

    std::string fig_name, fig_file, fig_out;
    auto* figure = app.add_subcommand("figure", "Emit figure surfaces on a 101x101 grid");
    figure->add_option("name", fig_name, "fig1, fig2 or fig_unbounded")
        ->required()
        ->check(CLI::IsMember({"fig1", "fig2", "fig_unbounded"}));
    figure->add_option("--scenario", fig_file, "Scenario file (defaults to the figure's canonical scenario)");
    figure->add_option("--out", fig_out, "Output directory (default out/<name>)");
    figure->fallthrough();

    std::string check_file, check_prop;
    auto* check = app.add_subcommand("check", "Evaluate one proposition check");
    check->add_option("file", check_file, "Scenario file");
    check->add_option("--prop", check_prop, "local_equals_global, aggregate_decay, upper_bound or longrun_cleanup")
        ->required();
    check->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kInputError;
    }

    if (*run) return cmd_run(run_file, run_out, common);
    if (*figure) return cmd_figure(fig_name, fig_file, fig_out, common);
    return cmd_check(check_file, check_prop, common);
}
