#include "tbpc/tbpc.h"

#include "tbpc/aspatial.hpp"
#include "tbpc/scenario.hpp"

#include <new>
#include <string>
#include <vector>

struct tbpc_scenario {
    tbpc::cli::Scenario value;
};

struct tbpc_result {
    int exit_code = 0;
    std::string directory;
    std::vector<std::string> files;
    std::vector<std::string> failures;
    std::vector<std::string> lines;
    std::vector<std::pair<bool, bool>> flags;
};

namespace {

thread_local std::string last_error;

tbpc_status status_of(tbpc::ErrorCode code) {
    switch (code) {
        case tbpc::ErrorCode::Ok: return TBPC_OK;
        case tbpc::ErrorCode::InvalidArgument: return TBPC_INVALID_ARGUMENT;
        case tbpc::ErrorCode::Parse: return TBPC_PARSE_ERROR;
        case tbpc::ErrorCode::Io: return TBPC_IO_ERROR;
        case tbpc::ErrorCode::DegenerateCoupling: return TBPC_DEGENERATE_COUPLING;
        case tbpc::ErrorCode::NotConverged: return TBPC_NOT_CONVERGED;
        case tbpc::ErrorCode::Quadrature: return TBPC_QUADRATURE_ERROR;
        case tbpc::ErrorCode::Internal: return TBPC_INTERNAL_ERROR;
    }
    return TBPC_INTERNAL_ERROR;
}

template <class F>
tbpc_status guarded(F&& body) {
    try {
        body();
        last_error.clear();
        return TBPC_OK;
    } catch (const tbpc::Error& e) {
        last_error = e.what();
        return status_of(e.code());
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return TBPC_INTERNAL_ERROR;
    } catch (const std::exception& e) {
        last_error = e.what();
        return TBPC_INTERNAL_ERROR;
    }
}

tbpc_status null_argument(const char* what) {
    last_error = std::string("null argument: ") + what;
    return TBPC_INVALID_ARGUMENT;
}

tbpc::ModelParams to_cpp(const tbpc_params& p) {
    return tbpc::ModelParams{p.eta, p.delta, p.rho, p.theta, p.horizon, p.diffusivity};
}

tbpc_params to_c(const tbpc::ModelParams& p) {
    return tbpc_params{p.eta, p.delta, p.rho, p.theta, p.horizon, p.diffusivity};
}

tbpc_result* wrap(const tbpc::cli::RunSummary& s) {
    auto* r = new tbpc_result;
    r->exit_code = s.exit_code;
    r->directory = s.directory.string();
    r->files = s.files;
    r->failures = s.failures;
    for (const auto& rep : s.reports) {
        r->lines.push_back(rep.to_line());
        r->flags.emplace_back(rep.holds, rep.asserted);
    }
    return r;
}

}  // namespace

extern "C" {

const char* tbpc_last_error(void) { return last_error.c_str(); }

const char* tbpc_status_string(tbpc_status status) {
    switch (status) {
        case TBPC_OK: return "ok";
        case TBPC_INVALID_ARGUMENT: return "invalid argument";
        case TBPC_PARSE_ERROR: return "parse error";
        case TBPC_IO_ERROR: return "i/o error";
        case TBPC_DEGENERATE_COUPLING: return "degenerate terminal coupling";
        case TBPC_NOT_CONVERGED: return "not converged";
        case TBPC_QUADRATURE_ERROR: return "quadrature error";
        case TBPC_INTERNAL_ERROR: return "internal error";
    }
    return "unknown status";
}

const char* tbpc_version(void) { return "1.0.0"; }

tbpc_status tbpc_params_preset(const char* name, tbpc_params* out) {
    if (!name || !out) return null_argument("name/out");
    return guarded([&] {
        if (std::string(name) != "paper-2015") tbpc::fail(tbpc::ErrorCode::InvalidArgument, "unknown preset '" + std::string(name) + "'");
        *out = to_c(tbpc::ModelParams::paper_2015());
    });
}

tbpc_status tbpc_params_validate(const tbpc_params* params) {
    if (!params) return null_argument("params");
    return guarded([&] { to_cpp(*params).validate(); });
}

tbpc_status tbpc_tau_star(const tbpc_params* params, double t, double* out) {
    if (!params || !out) return null_argument("params/out");
    return guarded([&] {
        const auto p = to_cpp(*params);
        p.validate();
        *out = tbpc::aspatial::tau_star(p, t);
    });
}

tbpc_status tbpc_terminal_coupling(const tbpc_params* params, double* out) {
    if (!params || !out) return null_argument("params/out");
    return guarded([&] {
        const auto p = to_cpp(*params);
        p.validate();
        *out = tbpc::terminal_coupling(p);
    });
}

tbpc_status tbpc_scenario_load(const char* path, tbpc_scenario** out) {
    if (!path || !out) return null_argument("path/out");
    *out = nullptr;
    return guarded([&] { *out = new tbpc_scenario{tbpc::cli::load_scenario(path)}; });
}

tbpc_status tbpc_scenario_parse(const char* text, tbpc_scenario** out) {
    if (!text || !out) return null_argument("text/out");
    *out = nullptr;
    return guarded([&] { *out = new tbpc_scenario{tbpc::cli::parse_scenario(text)}; });
}

tbpc_status tbpc_scenario_preset(const char* name, tbpc_scenario** out) {
    if (!name || !out) return null_argument("name/out");
    *out = nullptr;
    return guarded([&] { *out = new tbpc_scenario{tbpc::cli::preset_scenario(name)}; });
}

tbpc_status tbpc_scenario_figure(const char* name, tbpc_scenario** out) {
    if (!name || !out) return null_argument("name/out");
    *out = nullptr;
    return guarded([&] {
        const auto fig = tbpc::cli::figure_from_name(name);
        if (!fig) tbpc::fail(tbpc::ErrorCode::InvalidArgument, "unknown figure '" + std::string(name) + "'");
        *out = new tbpc_scenario{tbpc::cli::figure_scenario(*fig)};
    });
}

tbpc_status tbpc_scenario_apply_preset(tbpc_scenario* scenario, const char* preset) {
    if (!scenario || !preset) return null_argument("scenario/preset");
    return guarded([&] { scenario->value.params = tbpc::cli::preset_scenario(preset).params; });
}

tbpc_status tbpc_scenario_params(const tbpc_scenario* scenario, tbpc_params* out) {
    if (!scenario || !out) return null_argument("scenario/out");
    *out = to_c(scenario->value.params);
    return TBPC_OK;
}

const char* tbpc_scenario_name(const tbpc_scenario* scenario) { return scenario ? scenario->value.name.c_str() : ""; }

void tbpc_scenario_free(tbpc_scenario* scenario) { delete scenario; }

tbpc_status tbpc_run(const tbpc_scenario* scenario, const tbpc_run_options* options, tbpc_result** out) {
    if (!scenario || !out) return null_argument("scenario/out");
    *out = nullptr;
    return guarded([&] {
        tbpc::cli::RunOptions o;
        if (options) {
            if (options->output_dir) o.output_dir = options->output_dir;
            if (options->has_seed) o.seed = options->seed;
            if (options->parallel >= 0) o.parallel = options->parallel != 0;
        }
        *out = wrap(tbpc::cli::run_scenario(scenario->value, o));
    });
}

tbpc_status tbpc_check(const tbpc_scenario* scenario, const char* check, tbpc_result** out) {
    if (!scenario || !check || !out) return null_argument("scenario/check/out");
    *out = nullptr;
    return guarded([&] {
        tbpc::cli::RunSummary s;
        s.reports = tbpc::cli::run_check(scenario->value, check);
        for (const auto& r : s.reports)
            if (r.asserted && !r.holds) s.exit_code = 1;
        *out = wrap(s);
    });
}

tbpc_status tbpc_emit_figure(const tbpc_scenario* scenario, const char* figure, const char* out_dir, tbpc_result** out) {
    if (!scenario || !figure || !out_dir || !out) return null_argument("scenario/figure/out_dir/out");
    *out = nullptr;
    return guarded([&] {
        const auto fig = tbpc::cli::figure_from_name(figure);
        if (!fig) tbpc::fail(tbpc::ErrorCode::InvalidArgument, "unknown figure '" + std::string(figure) + "'");
        *out = wrap(tbpc::cli::emit_figure_data(scenario->value, *fig, out_dir));
    });
}

int tbpc_result_exit_code(const tbpc_result* r) { return r ? r->exit_code : 1; }
const char* tbpc_result_directory(const tbpc_result* r) { return r ? r->directory.c_str() : ""; }
size_t tbpc_result_file_count(const tbpc_result* r) { return r ? r->files.size() : 0; }
const char* tbpc_result_file(const tbpc_result* r, size_t i) {
    return r && i < r->files.size() ? r->files[i].c_str() : nullptr;
}
size_t tbpc_result_failure_count(const tbpc_result* r) { return r ? r->failures.size() : 0; }
const char* tbpc_result_failure(const tbpc_result* r, size_t i) {
    return r && i < r->failures.size() ? r->failures[i].c_str() : nullptr;
}
size_t tbpc_result_report_count(const tbpc_result* r) { return r ? r->lines.size() : 0; }
const char* tbpc_result_report(const tbpc_result* r, size_t i) {
    return r && i < r->lines.size() ? r->lines[i].c_str() : nullptr;
}

tbpc_status tbpc_result_report_flags(const tbpc_result* r, size_t i, int* holds, int* asserted) {
    if (!r || i >= r->flags.size()) return null_argument("result/index");
    if (holds) *holds = r->flags[i].first ? 1 : 0;
    if (asserted) *asserted = r->flags[i].second ? 1 : 0;
    return TBPC_OK;
}

void tbpc_result_free(tbpc_result* r) { delete r; }

}  // extern "C"
