/* Copyright (c) troprelu contributors.
 * SPDX-License-Identifier: Apache-2.0 */
#ifndef TROPRELU_H
#define TROPRELU_H

#include <stddef.h>

#if defined(_WIN32)
#if defined(TROPRELU_BUILD)
#define TROPRELU_API __declspec(dllexport)
#else
#define TROPRELU_API __declspec(dllimport)
#endif
#else
#define TROPRELU_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct troprelu_network troprelu_network;
typedef struct troprelu_spec troprelu_spec;
typedef struct troprelu_report troprelu_report;

typedef enum troprelu_status {
    TROPRELU_OK = 0,
    TROPRELU_ERR_INVALID_ARGUMENT = 1,
    TROPRELU_ERR_DIMENSION = 2,
    TROPRELU_ERR_EMPTY = 3,
    TROPRELU_ERR_UNBOUNDED = 4,
    TROPRELU_ERR_BUDGET = 5,
    TROPRELU_ERR_IO = 6,
    TROPRELU_ERR_PARSE = 7,
    TROPRELU_ERR_INTERNAL = 8
} troprelu_status;

typedef enum troprelu_mode { TROPRELU_MODE_BOX = 0, TROPRELU_MODE_ZONE = 1, TROPRELU_MODE_EXTERNAL = 2 } troprelu_mode;
typedef enum troprelu_domain { TROPRELU_DOMAIN_ZONE = 0, TROPRELU_DOMAIN_OCTAGON = 1 } troprelu_domain;
typedef enum troprelu_track { TROPRELU_TRACK_IO = 0, TROPRELU_TRACK_ALL = 1 } troprelu_track;

typedef struct troprelu_options {
    troprelu_mode mode;
    troprelu_domain domain;
    troprelu_track track;
    double eps;
    /* "x1:4,x2:2" or NULL for no subdivision */
    const char* subdivision;
    size_t cell_budget;
    size_t max_subset_size;
} troprelu_options;

TROPRELU_API void troprelu_options_init(troprelu_options* opts);

/* Message of the last failed call on this thread; never NULL. */
TROPRELU_API const char* troprelu_last_error(void);
TROPRELU_API const char* troprelu_version(void);

/* output_relu: -1 keeps what the file declares, 0 forces off, 1 forces on. */
TROPRELU_API troprelu_status troprelu_network_load(const char* path, int strict, int output_relu,
                                                   troprelu_network** out);
TROPRELU_API void troprelu_network_free(troprelu_network* net);
TROPRELU_API size_t troprelu_network_num_inputs(const troprelu_network* net);
TROPRELU_API size_t troprelu_network_num_outputs(const troprelu_network* net);
TROPRELU_API troprelu_status troprelu_network_evaluate(const troprelu_network* net, const double* x, double* y);

TROPRELU_API troprelu_status troprelu_spec_load(const char* path, troprelu_spec** out);
/* Input box only, no assertions. lo and hi have `dim` entries. */
TROPRELU_API troprelu_status troprelu_spec_from_box(const double* lo, const double* hi, size_t dim,
                                                    troprelu_spec** out);
TROPRELU_API void troprelu_spec_free(troprelu_spec* spec);
TROPRELU_API size_t troprelu_spec_num_assertions(const troprelu_spec* spec);

TROPRELU_API troprelu_status troprelu_run(const troprelu_network* net, const troprelu_spec* spec,
                                          const troprelu_options* opts, troprelu_report** out);
TROPRELU_API void troprelu_report_free(troprelu_report* report);
/* JSON text owned by the report, valid until troprelu_report_free. */
TROPRELU_API const char* troprelu_report_json(troprelu_report* report, int with_timings);
/* dims: comma separated variable names, e.g. "x1,y1". */
TROPRELU_API troprelu_status troprelu_report_write_csv(const troprelu_report* report, const char* dims,
                                                       const char* path);
TROPRELU_API troprelu_status troprelu_report_write_json(troprelu_report* report, const char* path);
TROPRELU_API size_t troprelu_report_num_assertions(const troprelu_report* report);
TROPRELU_API size_t troprelu_report_num_unknown(const troprelu_report* report);
/* verified: 1 or 0; minimum may be +inf for a vacuous check. */
TROPRELU_API troprelu_status troprelu_report_assertion(const troprelu_report* report, size_t index,
                                                       int* verified, double* minimum);
TROPRELU_API const char* troprelu_report_assertion_name(const troprelu_report* report, size_t index);
TROPRELU_API troprelu_status troprelu_report_output_bounds(const troprelu_report* report, size_t index, double* lo,
                                                           double* hi);

#ifdef __cplusplus
}
#endif

#endif
