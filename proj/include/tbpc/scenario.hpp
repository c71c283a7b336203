#pragma once

#include "tbpc/analysis.hpp"
#include "tbpc/core.hpp"
#include "tbpc/greens.hpp"
#include "tbpc/pde_oracle.hpp"
#include "tbpc/spectral.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tbpc::cli {

/// Parse failure with the offending line (0 when the field is missing) and field.
class ScenarioError : public Error {
public:
    ScenarioError(std::size_t line, std::string field, std::string message, const std::string& source = "");
    std::size_t line() const noexcept { return line_; }
    const std::string& field() const noexcept { return field_; }
    const std::string& message() const noexcept { return message_; }

private:
    std::size_t line_;
    std::string field_;
    std::string message_;
};

struct Scenario {
    std::string name = "scenario";
    ModelParams params;
    SpatialDomain domain;
    InitialProfile profile = InitialProfile::constant(kPaperInitialLevel);
    std::size_t nx = 201;
    std::size_t nt = 201;
    std::vector<Provenance> solvers;
    std::vector<std::string> checks;
    std::vector<double> horizons{10.0, 20.0, 40.0, 80.0};
    spectral::SpectralOptions spectral;
    oracle::SweepConfig sweep;
    greens::KernelEvaluator kernel;
    std::filesystem::path output_dir = "out";
    std::uint64_t seed = 2015;
    bool parallel = false;

    /// Throws ScenarioError for cross-field problems (no solvers, unknown checks, ...).
    void validate() const;
};

/// Sections: [scenario] [model] [domain] [profile] [grid] [solvers] [spectral]
/// [oracle] [greens] [checks] [output].  `key = value`, `#` comments.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);

/// The preset scenario: paper parameters, constant 400.23 on [-1,1].
Scenario preset_scenario(std::string_view preset);

std::optional<Provenance> solver_from_name(std::string_view name);
const std::vector<std::string>& check_names();

struct RunOptions {
    std::optional<std::filesystem::path> output_dir;
    std::optional<std::uint64_t> seed;
    std::optional<bool> parallel;
};

struct RunSummary {
    int exit_code = 0;  // 0 ok, 1 solver failure
    std::filesystem::path directory;
    std::vector<std::string> files;
    std::vector<std::string> failures;
    std::vector<analysis::PropositionReport> reports;
};

/// Runs every requested solver and check, writing <solver>_{p,u,tau}.csv,
/// props.csv, report.txt and MANIFEST into the output directory.
RunSummary run_scenario(const Scenario& scenario, const RunOptions& options = {});

/// Evaluates one named check against the scenario's solvers.
std::vector<analysis::PropositionReport> run_check(const Scenario& scenario, std::string_view check);

enum class Figure { Fig1, Fig2, FigUnbounded };
std::optional<Figure> figure_from_name(std::string_view name);
std::string_view to_string(Figure figure);

/// Canonical scenario for a figure (the same content as scenarios/<name>.scn).
Scenario figure_scenario(Figure figure);

/// Figure surfaces on a 101x101 display grid.  Throws InvalidArgument naming the
/// mismatch when the scenario does not fit the figure.
RunSummary emit_figure_data(const Scenario& scenario, Figure figure, const std::filesystem::path& out_dir);

/// `x,t,value` rows, time-major, shortest round-trip decimals; NaN entries are skipped.
void write_surface_csv(const std::filesystem::path& path, const Grid& grid, const Field2D& values);

}  // namespace tbpc::cli
