#include "tbpc/aspatial.hpp"
#include "tbpc/numerics.hpp"
#include "tbpc/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <sstream>

namespace tbpc::cli {

namespace fs = std::filesystem;

namespace {

std::string num(double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return ec == std::errc() ? std::string(buf, end) : std::string("nan");
}

std::string short_num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

struct SolverRun {
    Provenance solver;
    SolutionField field;
    bool ok = false;
    std::string error;
    std::size_t iterations = 0;
    double final_change = 0.0;
    double relaxation = 0.0;
    std::vector<std::string> warnings;
};

SolverRun run_solver(const Scenario& sc, Provenance solver, const Grid& grid) {
    SolverRun r{solver, {}, false, {}, 0, 0.0, 0.0, {}};
    const auto tau = [params = sc.params](double t) { return aspatial::tau_star(params, std::min(t, params.horizon)); };
    try {
        switch (solver) {
            case Provenance::AspatialClosedForm:
                r.field = aspatial::aspatial_field(sc.params, sc.profile, grid);
                break;
            case Provenance::SpectralLocal:
                r.field = spectral::local_solution_bounded(sc.params, sc.domain, sc.profile, grid, sc.spectral);
                break;
            case Provenance::SpectralGlobal:
                r.field = spectral::global_solution_bounded(sc.params, sc.domain, sc.profile, grid, sc.spectral);
                break;
            case Provenance::GreensLocal:
                r.field = greens::local_solution_unbounded(sc.params, sc.profile, grid, sc.kernel);
                break;
            case Provenance::GreensGlobal:
                r.field = greens::global_solution_unbounded(
                    sc.params, sc.profile, grid, sc.kernel,
                    sc.spectral.form == spectral::GlobalForm::Exact ? greens::GlobalForm::Exact : greens::GlobalForm::Printed);
                break;
            case Provenance::FdOracleLocal:
                r.field = oracle::diffuse_forward(sc.profile, sc.params, sc.domain, grid, oracle::TaxPath{tau}, &r.warnings);
                break;
            case Provenance::FdOracleGlobal: {
                auto sweep = oracle::forward_backward_sweep(sc.profile, sc.params, sc.domain, grid, sc.sweep);
                r.iterations = sweep.iterations;
                r.final_change = sweep.final_change;
                r.relaxation = sweep.relaxation;
                r.field = std::move(sweep.field);
                break;
            }
        }
        r.ok = true;
    } catch (const std::exception& e) {
        r.error = e.what();
    }
    return r;
}

std::vector<SolverRun> run_solvers(const Scenario& sc, const Grid& grid, bool parallel) {
    std::vector<SolverRun> runs;
    if (!parallel) {
        for (auto s : sc.solvers) runs.push_back(run_solver(sc, s, grid));
        return runs;
    }
    std::vector<std::future<SolverRun>> jobs;
    for (auto s : sc.solvers) jobs.push_back(std::async(std::launch::async, run_solver, std::cref(sc), s, std::cref(grid)));
    for (auto& j : jobs) runs.push_back(j.get());
    return runs;
}

bool is_local(Provenance p) {
    return p == Provenance::SpectralLocal || p == Provenance::GreensLocal || p == Provenance::FdOracleLocal;
}
bool is_global(Provenance p) {
    return p == Provenance::SpectralGlobal || p == Provenance::GreensGlobal || p == Provenance::FdOracleGlobal;
}

const SolverRun* pick(const std::vector<SolverRun>& runs, bool (*pred)(Provenance)) {
    for (const auto& r : runs)
        if (r.ok && pred(r.solver)) return &r;
    return nullptr;
}

std::vector<analysis::PropositionReport> evaluate_check(const Scenario& sc, const std::string& check,
                                                        const std::vector<SolverRun>& runs) {
    std::vector<analysis::PropositionReport> out;
    if (check == "local_equals_global") {
        out.push_back(analysis::check_local_equals_global(sc.params, sc.domain, sc.profile,
                                                          {sc.nx, sc.nt, sc.spectral.modes}));
    } else if (check == "longrun_cleanup") {
        out.push_back(analysis::check_longrun_cleanup(sc.params, sc.domain, sc.profile, sc.horizons));
    } else {
        for (const auto& r : runs) {
            if (!r.ok) continue;
            auto rep = check == "aggregate_decay" ? analysis::check_aggregate_decay(sc.params, r.field)
                                                  : analysis::check_upper_bound(sc.params, r.field, sc.profile, sc.domain);
            rep.name += "[" + std::string(to_string(r.solver)) + "]";
            out.push_back(std::move(rep));
        }
    }
    return out;
}

std::string csv_quote(const std::string& s) {
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

class OutputDir {
public:
    explicit OutputDir(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

    void write(const std::string& name, const std::string& content) {
        std::ofstream out(dir_ / name, std::ios::binary);
        if (!out) fail(ErrorCode::Io, "cannot write '" + (dir_ / name).string() + "'");
        out << content;
        if (!out) fail(ErrorCode::Io, "write failed for '" + (dir_ / name).string() + "'");
        hashes_.emplace_back(name, numerics::fnv1a64(content));
    }

    void surface(const std::string& name, const Grid& grid, const Field2D& values);

    void manifest(const std::vector<std::string>& failures) {
        std::ostringstream os;
        for (const auto& [name, h] : hashes_) {
            char buf[17];
            std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
            os << "fnv1a64:" << buf << "  " << name << "\n";
        }
        for (const auto& f : failures) os << "FAILED " << f << "\n";
        std::ofstream out(dir_ / "MANIFEST", std::ios::binary);
        out << os.str();
        if (!out) fail(ErrorCode::Io, "cannot write MANIFEST in '" + dir_.string() + "'");
    }

    std::vector<std::string> files() const {
        std::vector<std::string> f;
        for (const auto& [name, h] : hashes_) f.push_back(name);
        f.push_back("MANIFEST");
        return f;
    }
    const fs::path& path() const { return dir_; }

private:
    fs::path dir_;
    std::vector<std::pair<std::string, std::uint64_t>> hashes_;
};

std::string surface_text(const Grid& grid, const Field2D& values) {
    std::string s = "x,t,value\n";
    s.reserve(grid.nt() * grid.nx() * 40);
    for (std::size_t n = 0; n < grid.nt(); ++n)
        for (std::size_t i = 0; i < grid.nx(); ++i) {
            const double v = values(n, i);
            if (!std::isfinite(v)) continue;
            s += num(grid.positions[i]);
            s += ',';
            s += num(grid.times[n]);
            s += ',';
            s += num(v);
            s += '\n';
        }
    return s;
}

void OutputDir::surface(const std::string& name, const Grid& grid, const Field2D& values) {
    write(name, surface_text(grid, values));
}

/// "monotonically increases over time" / "monotonically decreases over time" / "is not monotone in time".
std::string time_trend(const SolutionField& f, std::size_t ix) {
    bool up = true, down = true;
    for (std::size_t n = 1; n < f.grid.nt(); ++n) {
        const double a = f.p(n - 1, ix), b = f.p(n, ix);
        if (b < a) up = false;
        if (b > a) down = false;
    }
    if (up && !down) return "monotonically increases over time";
    if (down && !up) return "monotonically decreases over time";
    if (up && down) return "is constant over time";
    return "is not monotone in time";
}

std::string describe_params(const ModelParams& p) {
    std::ostringstream os;
    os << "eta=" << num(p.eta) << " delta=" << num(p.delta) << " rho=" << num(p.rho) << " theta=" << num(p.theta)
       << " T=" << num(p.horizon) << " d=" << num(p.diffusivity);
    return os.str();
}

std::string describe_domain(const SpatialDomain& d) {
    return std::string(d.is_bounded() ? "bounded" : "unbounded window") + " [" + num(d.lo) + ", " + num(d.hi) + "]";
}

double printed_vs_exact(const Scenario& sc, const Grid& grid, const SolutionField& exact) {
    SolutionField printed;
    if (sc.domain.is_bounded()) {
        auto opts = sc.spectral;
        opts.form = sc.spectral.form == spectral::GlobalForm::Exact ? spectral::GlobalForm::Printed : spectral::GlobalForm::Exact;
        printed = spectral::global_solution_bounded(sc.params, sc.domain, sc.profile, grid, opts);
    } else {
        const auto form = sc.spectral.form == spectral::GlobalForm::Exact ? greens::GlobalForm::Printed : greens::GlobalForm::Exact;
        printed = greens::global_solution_unbounded(sc.params, sc.profile, grid, sc.kernel, form);
    }
    return analysis::relative_gap(printed, exact);
}

std::string build_report(const Scenario& sc, const Grid& grid, const std::vector<SolverRun>& runs,
                         const std::vector<analysis::PropositionReport>& reports) {
    std::ostringstream os;
    os << "scenario " << sc.name << "\n";
    os << "model " << describe_params(sc.params) << "\n";
    os << "domain " << describe_domain(sc.domain) << "\n";
    os << "profile " << sc.profile.describe() << "\n";
    os << "grid nx=" << sc.nx << " nt=" << sc.nt << "\n";
    os << "seed " << sc.seed << "\n";

    os << "\n[costs]\n";
    for (const auto& r : runs) {
        if (!r.ok) continue;
        const auto c = analysis::spatial_cost(sc.params, r.field);
        os << to_string(r.solver) << " running=" << num(c.running) << " terminal=" << num(c.terminal)
           << " total=" << num(c.total) << "\n";
    }

    os << "\n[solvers]\n";
    for (const auto& r : runs) {
        os << to_string(r.solver);
        if (!r.ok) {
            os << " FAILED " << r.error << "\n";
            continue;
        }
        os << " tau_min=" << short_num(analysis::tau_min(r.field));
        if (r.solver == Provenance::FdOracleGlobal)
            os << " iterations=" << r.iterations << " final_change=" << short_num(r.final_change)
               << " relaxation=" << short_num(r.relaxation);
        for (const auto& w : r.warnings) os << " warning=\"" << w << "\"";
        os << "\n";
    }
    os << "tax_threshold " << short_num(sc.params.tax_threshold()) << "\n";

    os << "\n[cross_gaps]\n";
    for (std::size_t a = 0; a < runs.size(); ++a)
        for (std::size_t b = a + 1; b < runs.size(); ++b) {
            if (!runs[a].ok || !runs[b].ok) continue;
            os << to_string(runs[a].solver) << " vs " << to_string(runs[b].solver)
               << " sup_gap=" << short_num(analysis::relative_gap(runs[a].field, runs[b].field)) << "\n";
        }

    const SolverRun* local = pick(runs, is_local);
    const SolverRun* global = pick(runs, is_global);
    if (local && global) {
        os << "\n[local_vs_global]\n";
        os << "pair " << to_string(local->solver) << " / " << to_string(global->solver) << "\n";
        const double gap = analysis::relative_gap(local->field, global->field);
        os << "local_global_sup_gap=" << short_num(gap) << (gap < 1e-6 ? " (below 1e-6)" : " (not below 1e-6)") << "\n";
        const double cl = analysis::spatial_cost(sc.params, local->field).total;
        const double cg = analysis::spatial_cost(sc.params, global->field).total;
        os << "cost_local=" << num(cl) << " cost_global=" << num(cg) << "\n";
        if (cg < cl) os << "C(global) < C(local): yes, gap " << short_num(cl - cg) << "\n";
        else os << "C(global) < C(local): no, gap " << short_num(cl - cg) << "\n";
        const std::size_t mid = grid.nx() / 2;
        os << "local pollution at x=" << num(grid.positions[mid]) << " " << time_trend(local->field, mid) << "\n";
        os << "global pollution at x=" << num(grid.positions[mid]) << " " << time_trend(global->field, mid) << "\n";
        double worst_rise = 0.0;
        for (std::size_t i = 0; i < grid.nx(); ++i)
            for (std::size_t n = 1; n < grid.nt(); ++n)
                worst_rise = std::max(worst_rise, global->field.p(n, i) - global->field.p(n - 1, i));
        os << "global pollution non-increasing in t at every x: " << (worst_rise <= 0.0 ? "yes" : "no")
           << " (largest one-step rise " << short_num(worst_rise) << ")\n";
    }

    os << "\n[closed_form]\n";
    const auto cf = aspatial::closed_form_discrepancy(sc.params);
    os << "drift_gap=" << short_num(cf.drift_gap) << " tax_gap=" << short_num(cf.tax_gap)
       << " path_gap=" << short_num(cf.path_gap) << "\n";
    for (const auto& r : runs)
        if (r.ok && (r.solver == Provenance::SpectralGlobal || r.solver == Provenance::GreensGlobal))
            os << "printed_vs_exact_global_gap[" << to_string(r.solver)
               << "]=" << short_num(printed_vs_exact(sc, grid, r.field)) << "\n";

    os << "\n[propositions]\n";
    for (const auto& rep : reports) os << rep.to_line() << "\n";

    std::vector<std::string> failed;
    for (const auto& r : runs)
        if (!r.ok) failed.push_back(std::string(to_string(r.solver)) + ": " + r.error);
    if (!failed.empty()) {
        os << "\n[failures]\n";
        for (const auto& f : failed) os << f << "\n";
    }
    return os.str();
}

std::string props_csv(const std::vector<analysis::PropositionReport>& reports) {
    std::string s = "name,holds,asserted,margin,tolerance,details\n";
    for (const auto& r : reports)
        s += r.name + "," + (r.holds ? "true" : "false") + "," + (r.asserted ? "true" : "false") + "," + num(r.margin) +
             "," + num(r.tolerance) + "," + csv_quote(r.details) + "\n";
    return s;
}

}  // namespace

void write_surface_csv(const fs::path& path, const Grid& grid, const Field2D& values) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::Io, "cannot write '" + path.string() + "'");
    out << surface_text(grid, values);
}

RunSummary run_scenario(const Scenario& scenario, const RunOptions& options) {
    Scenario sc = scenario;
    if (options.output_dir) sc.output_dir = *options.output_dir;
    if (options.seed) sc.seed = sc.kernel.seed = *options.seed;
    if (options.parallel) sc.parallel = *options.parallel;
    sc.validate();

    const Grid grid = make_grid(sc.domain, sc.params, sc.nx, sc.nt);
    const auto runs = run_solvers(sc, grid, sc.parallel);

    OutputDir out(sc.output_dir);
    RunSummary summary;
    summary.directory = out.path();
    for (const auto& r : runs) {
        if (!r.ok) {
            summary.failures.push_back(std::string(to_string(r.solver)) + ": " + r.error);
            continue;
        }
        const std::string base(to_string(r.solver));
        out.surface(base + "_p.csv", grid, r.field.p);
        out.surface(base + "_u.csv", grid, r.field.u);
        out.surface(base + "_tau.csv", grid, r.field.tau);
    }
    for (const auto& c : sc.checks) {
        try {
            auto reps = evaluate_check(sc, c, runs);
            summary.reports.insert(summary.reports.end(), reps.begin(), reps.end());
        } catch (const std::exception& e) {
            summary.failures.push_back("check " + c + ": " + e.what());
        }
    }
    out.write("props.csv", props_csv(summary.reports));
    out.write("report.txt", build_report(sc, grid, runs, summary.reports));
    out.manifest(summary.failures);
    summary.files = out.files();
    summary.exit_code = summary.failures.empty() ? 0 : 1;
    return summary;
}

std::vector<analysis::PropositionReport> run_check(const Scenario& scenario, std::string_view check) {
    scenario.validate();
    const std::string name(check);
    if (std::find(check_names().begin(), check_names().end(), name) == check_names().end())
        fail(ErrorCode::InvalidArgument, "unknown check '" + name + "'");
    std::vector<SolverRun> runs;
    if (name == "aggregate_decay" || name == "upper_bound") {
        const Grid grid = make_grid(scenario.domain, scenario.params, scenario.nx, scenario.nt);
        runs = run_solvers(scenario, grid, scenario.parallel);
        for (const auto& r : runs)
            if (!r.ok) fail(ErrorCode::Internal, std::string(to_string(r.solver)) + " failed: " + r.error);
    }
    return evaluate_check(scenario, name, runs);
}

// ---------------------------------------------------------------------------

std::optional<Figure> figure_from_name(std::string_view name) {
    if (name == "fig1") return Figure::Fig1;
    if (name == "fig2") return Figure::Fig2;
    if (name == "fig_unbounded") return Figure::FigUnbounded;
    return std::nullopt;
}

std::string_view to_string(Figure figure) {
    switch (figure) {
        case Figure::Fig1: return "fig1";
        case Figure::Fig2: return "fig2";
        case Figure::FigUnbounded: return "fig_unbounded";
    }
    return "unknown";
}

Scenario figure_scenario(Figure figure) {
    Scenario s = preset_scenario("paper-2015");
    s.name = std::string(to_string(figure));
    s.output_dir = fs::path("out") / s.name;
    switch (figure) {
        case Figure::Fig1:
            s.solvers = {Provenance::AspatialClosedForm, Provenance::SpectralLocal, Provenance::SpectralGlobal,
                         Provenance::FdOracleGlobal};
            break;
        case Figure::Fig2:
            s.profile = InitialProfile::centered_bump(kPaperInitialLevel);
            s.solvers = {Provenance::SpectralLocal, Provenance::SpectralGlobal, Provenance::FdOracleLocal,
                         Provenance::FdOracleGlobal};
            break;
        case Figure::FigUnbounded:
            s.profile = InitialProfile::centered_bump(kPaperInitialLevel);
            s.domain = SpatialDomain::unbounded(1.0);
            s.solvers = {Provenance::GreensLocal, Provenance::GreensGlobal, Provenance::FdOracleLocal};
            break;
    }
    return s;
}

RunSummary emit_figure_data(const Scenario& sc, Figure figure, const fs::path& out_dir) {
    const std::string name(to_string(figure));
    const bool homogeneous = sc.profile.is_homogeneous();
    if (figure == Figure::FigUnbounded && sc.domain.is_bounded())
        fail(ErrorCode::InvalidArgument, name + " needs an unbounded domain; scenario domain is " + describe_domain(sc.domain));
    if (figure != Figure::FigUnbounded && !sc.domain.is_bounded())
        fail(ErrorCode::InvalidArgument, name + " needs a bounded domain; scenario domain is " + describe_domain(sc.domain));
    if (figure == Figure::Fig1 && !homogeneous)
        fail(ErrorCode::InvalidArgument, "fig1 needs a homogeneous profile; scenario profile is " + sc.profile.describe());
    if (figure == Figure::Fig2 && homogeneous)
        fail(ErrorCode::InvalidArgument, "fig2 needs a heterogeneous profile; scenario profile is " + sc.profile.describe());
    sc.params.validate();

    const Grid grid = make_grid(sc.domain, sc.params, 101, 101);
    OutputDir out(out_dir);
    RunSummary summary;
    summary.directory = out.path();
    try {
        if (figure == Figure::Fig1) {
            const auto g = spectral::global_solution_bounded(sc.params, sc.domain, sc.profile, grid, sc.spectral);
            out.surface("fig1_tau.csv", grid, g.tau);
            out.surface("fig1_p.csv", grid, g.p);
        } else if (figure == Figure::Fig2) {
            const auto l = spectral::local_solution_bounded(sc.params, sc.domain, sc.profile, grid, sc.spectral);
            const auto g = spectral::global_solution_bounded(sc.params, sc.domain, sc.profile, grid, sc.spectral);
            out.surface("fig2_local_tau.csv", grid, l.tau);
            out.surface("fig2_local_p.csv", grid, l.p);
            out.surface("fig2_global_tau.csv", grid, g.tau);
            out.surface("fig2_global_p.csv", grid, g.p);
        } else {
            const auto g = greens::global_solution_unbounded(sc.params, sc.profile, grid, sc.kernel);
            out.surface("fig_unbounded_tau.csv", grid, g.tau);
            out.surface("fig_unbounded_p.csv", grid, g.p);
        }
    } catch (const std::exception& e) {
        summary.failures.push_back(name + ": " + e.what());
    }
    out.manifest(summary.failures);
    summary.files = out.files();
    summary.exit_code = summary.failures.empty() ? 0 : 1;
    return summary;
}

}  // namespace tbpc::cli
