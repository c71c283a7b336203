/* C interface of the transboundary pollution control library. */
#ifndef TBPC_H
#define TBPC_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define TBPC_API __attribute__((visibility("default")))
#else
#define TBPC_API
#endif

typedef enum tbpc_status {
    TBPC_OK = 0,
    TBPC_INVALID_ARGUMENT = 1,
    TBPC_PARSE_ERROR = 2,
    TBPC_IO_ERROR = 3,
    TBPC_DEGENERATE_COUPLING = 4,
    TBPC_NOT_CONVERGED = 5,
    TBPC_QUADRATURE_ERROR = 6,
    TBPC_INTERNAL_ERROR = 7
} tbpc_status;

typedef struct tbpc_params {
    double eta;
    double delta;
    double rho;
    double theta;
    double horizon;
    double diffusivity;
} tbpc_params;

typedef struct tbpc_scenario tbpc_scenario;
typedef struct tbpc_result tbpc_result;

typedef struct tbpc_run_options {
    const char* output_dir; /* NULL keeps the scenario's directory */
    int has_seed;
    uint64_t seed;
    int parallel; /* -1 keeps the scenario setting, 0 off, 1 on */
} tbpc_run_options;

/* Message of the last failed call on this thread ("" if none). */
TBPC_API const char* tbpc_last_error(void);
TBPC_API const char* tbpc_status_string(tbpc_status status);
TBPC_API const char* tbpc_version(void);

TBPC_API tbpc_status tbpc_params_preset(const char* name, tbpc_params* out);
TBPC_API tbpc_status tbpc_params_validate(const tbpc_params* params);
TBPC_API tbpc_status tbpc_tau_star(const tbpc_params* params, double t, double* out);
TBPC_API tbpc_status tbpc_terminal_coupling(const tbpc_params* params, double* out);

TBPC_API tbpc_status tbpc_scenario_load(const char* path, tbpc_scenario** out);
TBPC_API tbpc_status tbpc_scenario_parse(const char* text, tbpc_scenario** out);
TBPC_API tbpc_status tbpc_scenario_preset(const char* name, tbpc_scenario** out);
/* name: "fig1", "fig2" or "fig_unbounded" */
TBPC_API tbpc_status tbpc_scenario_figure(const char* name, tbpc_scenario** out);
/* Replaces the model parameters by a named preset. */
TBPC_API tbpc_status tbpc_scenario_apply_preset(tbpc_scenario* scenario, const char* preset);
TBPC_API tbpc_status tbpc_scenario_params(const tbpc_scenario* scenario, tbpc_params* out);
TBPC_API const char* tbpc_scenario_name(const tbpc_scenario* scenario);
TBPC_API void tbpc_scenario_free(tbpc_scenario* scenario);

/* Solver failures are not call failures: they are listed in the result and
   reflected in tbpc_result_exit_code. */
TBPC_API tbpc_status tbpc_run(const tbpc_scenario* scenario, const tbpc_run_options* options, tbpc_result** out);
TBPC_API tbpc_status tbpc_check(const tbpc_scenario* scenario, const char* check, tbpc_result** out);
TBPC_API tbpc_status tbpc_emit_figure(const tbpc_scenario* scenario, const char* figure, const char* out_dir,
                                      tbpc_result** out);

TBPC_API int tbpc_result_exit_code(const tbpc_result* result);
TBPC_API const char* tbpc_result_directory(const tbpc_result* result);
TBPC_API size_t tbpc_result_file_count(const tbpc_result* result);
TBPC_API const char* tbpc_result_file(const tbpc_result* result, size_t index);
TBPC_API size_t tbpc_result_failure_count(const tbpc_result* result);
TBPC_API const char* tbpc_result_failure(const tbpc_result* result, size_t index);
TBPC_API size_t tbpc_result_report_count(const tbpc_result* result);
/* One-line proposition record. */
TBPC_API const char* tbpc_result_report(const tbpc_result* result, size_t index);
/* holds / asserted flags of a report; returns TBPC_INVALID_ARGUMENT for a bad index. */
TBPC_API tbpc_status tbpc_result_report_flags(const tbpc_result* result, size_t index, int* holds, int* asserted);
TBPC_API void tbpc_result_free(tbpc_result* result);

#ifdef __cplusplus
}
#endif

#endif
