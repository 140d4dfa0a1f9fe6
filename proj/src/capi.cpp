// Copyright (c) troprelu contributors.
// SPDX-License-Identifier: Apache-2.0
#include "troprelu.h"

#include <cmath>
#include <new>
#include <string>

#include "troprelu/io.hpp"
#include "troprelu/version.hpp"

struct troprelu_network {
    std::string path;
    troprelu::Network net;
};

struct troprelu_spec {
    troprelu::SpecFile spec;
};

struct troprelu_report {
    troprelu::RunOutcome run;
    std::string json;
};

namespace {

thread_local std::string g_last_error;

troprelu_status status_of(troprelu::ErrorCode code) {
    using troprelu::ErrorCode;
    switch (code) {
    case ErrorCode::invalid_argument:
    case ErrorCode::bad_index:
    case ErrorCode::not_closed:
    case ErrorCode::infinite_entry: return TROPRELU_ERR_INVALID_ARGUMENT;
    case ErrorCode::dimension_mismatch: return TROPRELU_ERR_DIMENSION;
    case ErrorCode::empty_input:
    case ErrorCode::empty_abstraction:
    case ErrorCode::empty_feasible_set: return TROPRELU_ERR_EMPTY;
    case ErrorCode::unbounded_variable:
    case ErrorCode::unbounded: return TROPRELU_ERR_UNBOUNDED;
    case ErrorCode::budget_exceeded: return TROPRELU_ERR_BUDGET;
    case ErrorCode::io: return TROPRELU_ERR_IO;
    case ErrorCode::malformed: return TROPRELU_ERR_PARSE;
    case ErrorCode::internal: break;
    }
    return TROPRELU_ERR_INTERNAL;
}

template <class F>
troprelu_status guarded(F&& f) {
    try {
        f();
        g_last_error.clear();
        return TROPRELU_OK;
    } catch (const troprelu::Error& e) {
        g_last_error = e.what();
        return status_of(e.code());
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
    } catch (const std::exception& e) {
        g_last_error = e.what();
    } catch (...) {
        g_last_error = "unknown error";
    }
    return TROPRELU_ERR_INTERNAL;
}

troprelu_status null_arg(const char* what) {
    g_last_error = std::string(what) + " is NULL";
    return TROPRELU_ERR_INVALID_ARGUMENT;
}

} // namespace

extern "C" {

void troprelu_options_init(troprelu_options* opts) {
    if (opts == nullptr) {
        return;
    }
    const troprelu::AnalysisOptions d;
    opts->mode = TROPRELU_MODE_ZONE;
    opts->domain = TROPRELU_DOMAIN_ZONE;
    opts->track = TROPRELU_TRACK_IO;
    opts->eps = d.eps;
    opts->subdivision = nullptr;
    opts->cell_budget = d.subdivision_config.cell_budget;
    opts->max_subset_size = d.subdivision_config.max_subset_size;
}

const char* troprelu_last_error(void) { return g_last_error.c_str(); }

const char* troprelu_version(void) { return troprelu::kVersion; }

troprelu_status troprelu_network_load(const char* path, int strict, int output_relu, troprelu_network** out) {
    if (path == nullptr || out == nullptr) {
        return null_arg("path or out");
    }
    *out = nullptr;
    return guarded([&] {
        troprelu::Network net = troprelu::parse_sherlock(path, strict != 0);
        if (output_relu >= 0) {
            std::vector<troprelu::DenseLayer> layers = net.layers();
            layers.back().relu = output_relu != 0;
            net = troprelu::Network(net.inputs(), std::move(layers));
        }
        *out = new troprelu_network{path, std::move(net)};
    });
}

void troprelu_network_free(troprelu_network* net) { delete net; }

size_t troprelu_network_num_inputs(const troprelu_network* net) { return net ? net->net.inputs() : 0; }

size_t troprelu_network_num_outputs(const troprelu_network* net) { return net ? net->net.outputs() : 0; }

troprelu_status troprelu_network_evaluate(const troprelu_network* net, const double* x, double* y) {
    if (net == nullptr || x == nullptr || y == nullptr) {
        return null_arg("net, x or y");
    }
    return guarded([&] {
        const troprelu::Point out = net->net.evaluate(troprelu::Point(x, x + net->net.inputs()));
        std::copy(out.begin(), out.end(), y);
    });
}

troprelu_status troprelu_spec_load(const char* path, troprelu_spec** out) {
    if (path == nullptr || out == nullptr) {
        return null_arg("path or out");
    }
    *out = nullptr;
    return guarded([&] { *out = new troprelu_spec{troprelu::parse_spec(path)}; });
}

troprelu_status troprelu_spec_from_box(const double* lo, const double* hi, size_t dim, troprelu_spec** out) {
    if (lo == nullptr || hi == nullptr || out == nullptr) {
        return null_arg("lo, hi or out");
    }
    *out = nullptr;
    return guarded([&] {
        troprelu::require(dim > 0, troprelu::ErrorCode::empty_input, "input box has no dimensions");
        troprelu::SpecFile s;
        for (size_t k = 0; k < dim; ++k) {
            troprelu::require(std::isfinite(lo[k]) && std::isfinite(hi[k]) && lo[k] <= hi[k],
                              troprelu::ErrorCode::invalid_argument, "input box needs finite lo <= hi");
            s.input_box.dims.push_back({lo[k], hi[k]});
        }
        *out = new troprelu_spec{std::move(s)};
    });
}

void troprelu_spec_free(troprelu_spec* spec) { delete spec; }

size_t troprelu_spec_num_assertions(const troprelu_spec* spec) { return spec ? spec->spec.assertions.size() : 0; }

troprelu_status troprelu_run(const troprelu_network* net, const troprelu_spec* spec, const troprelu_options* opts,
                             troprelu_report** out) {
    if (net == nullptr || spec == nullptr || out == nullptr) {
        return null_arg("net, spec or out");
    }
    *out = nullptr;
    troprelu_options o;
    troprelu_options_init(&o);
    if (opts != nullptr) {
        o = *opts;
    }
    return guarded([&] {
        troprelu::AnalysisOptions a;
        switch (o.mode) {
        case TROPRELU_MODE_BOX: a.mode = troprelu::ChainMode::box; break;
        case TROPRELU_MODE_ZONE: a.mode = troprelu::ChainMode::zone; break;
        case TROPRELU_MODE_EXTERNAL: a.mode = troprelu::ChainMode::external; break;
        default: throw troprelu::Error(troprelu::ErrorCode::invalid_argument, "unknown mode");
        }
        switch (o.domain) {
        case TROPRELU_DOMAIN_ZONE: a.domain = troprelu::Domain::zone; break;
        case TROPRELU_DOMAIN_OCTAGON: a.domain = troprelu::Domain::octagon; break;
        default: throw troprelu::Error(troprelu::ErrorCode::invalid_argument, "unknown domain");
        }
        switch (o.track) {
        case TROPRELU_TRACK_IO: a.track = troprelu::Track::io; break;
        case TROPRELU_TRACK_ALL: a.track = troprelu::Track::all; break;
        default: throw troprelu::Error(troprelu::ErrorCode::invalid_argument, "unknown track");
        }
        troprelu::require(o.eps >= 0 && std::isfinite(o.eps), troprelu::ErrorCode::invalid_argument,
                          "eps must be finite and non-negative");
        a.eps = o.eps;
        a.subdivision_config.eps = o.eps;
        a.subdivision_config.cell_budget = o.cell_budget;
        a.subdivision_config.max_subset_size = o.max_subset_size;
        if (o.subdivision != nullptr && *o.subdivision != '\0') {
            a.subdivision = troprelu::parse_subdivision(o.subdivision, spec->spec.input_box);
        }
        auto* r = new troprelu_report{troprelu::run_analysis(net->net, spec->spec, a), {}};
        r->run.network_path = net->path;
        *out = r;
    });
}

void troprelu_report_free(troprelu_report* report) { delete report; }

const char* troprelu_report_json(troprelu_report* report, int with_timings) {
    if (report == nullptr) {
        null_arg("report");
        return nullptr;
    }
    const troprelu_status s = guarded([&] { report->json = troprelu::report_json(report->run, with_timings != 0); });
    return s == TROPRELU_OK ? report->json.c_str() : nullptr;
}

troprelu_status troprelu_report_write_json(troprelu_report* report, const char* path) {
    if (report == nullptr || path == nullptr) {
        return null_arg("report or path");
    }
    return guarded([&] { troprelu::write_text_file(path, troprelu::report_json(report->run, true)); });
}

troprelu_status troprelu_report_write_csv(const troprelu_report* report, const char* dims, const char* path) {
    if (report == nullptr || dims == nullptr || path == nullptr) {
        return null_arg("report, dims or path");
    }
    return guarded([&] {
        std::vector<std::string> names;
        std::string cur;
        for (const char* p = dims;; ++p) {
            if (*p == ',' || *p == '\0') {
                if (!cur.empty()) {
                    names.push_back(cur);
                }
                cur.clear();
                if (*p == '\0') {
                    break;
                }
            } else if (*p != ' ') {
                cur += *p;
            }
        }
        troprelu::write_text_file(path, troprelu::csv_text(report->run, names));
    });
}

size_t troprelu_report_num_assertions(const troprelu_report* report) {
    return report ? report->run.verdicts.size() : 0;
}

size_t troprelu_report_num_unknown(const troprelu_report* report) { return report ? report->run.unknown_count() : 0; }

troprelu_status troprelu_report_assertion(const troprelu_report* report, size_t index, int* verified,
                                          double* minimum) {
    if (report == nullptr) {
        return null_arg("report");
    }
    if (index >= report->run.verdicts.size()) {
        g_last_error = "assertion index out of range";
        return TROPRELU_ERR_INVALID_ARGUMENT;
    }
    const troprelu::Verdict& v = report->run.verdicts[index];
    if (verified != nullptr) {
        *verified = v.status == troprelu::VerdictStatus::verified ? 1 : 0;
    }
    if (minimum != nullptr) {
        *minimum = v.minimum;
    }
    return TROPRELU_OK;
}

const char* troprelu_report_assertion_name(const troprelu_report* report, size_t index) {
    if (report == nullptr || index >= report->run.spec.assertions.size()) {
        return nullptr;
    }
    return report->run.spec.assertions[index].name.c_str();
}

troprelu_status troprelu_report_output_bounds(const troprelu_report* report, size_t index, double* lo, double* hi) {
    if (report == nullptr || lo == nullptr || hi == nullptr) {
        return null_arg("report, lo or hi");
    }
    const auto& out = report->run.result.bounds.back().post;
    if (index >= out.size()) {
        g_last_error = "output index out of range";
        return TROPRELU_ERR_INVALID_ARGUMENT;
    }
    *lo = out[index].lo;
    *hi = out[index].hi;
    return TROPRELU_OK;
}

} // extern "C"
