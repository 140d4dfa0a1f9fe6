// Copyright (c) troprelu contributors.
// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "troprelu.h"

namespace {

constexpr int kExitVerified = 0;
constexpr int kExitError = 1;
constexpr int kExitUnknown = 2;

int fail(const char* what) {
    std::fprintf(stderr, "troprelu: %s: %s\n", what, troprelu_last_error());
    return kExitError;
}

std::string fmt(double v) {
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v + 0.0);
    return buf;
}

// Parses "lo:hi,lo:hi".
bool parse_box(const std::string& text, std::vector<double>& lo, std::vector<double>& hi) {
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find(',', start);
        if (end == std::string::npos) {
            end = text.size();
        }
        const std::string item = text.substr(start, end - start);
        start = end + 1;
        const auto colon = item.find(':');
        if (colon == std::string::npos) {
            return false;
        }
        try {
            std::size_t p1 = 0;
            std::size_t p2 = 0;
            const std::string a = item.substr(0, colon);
            const std::string b = item.substr(colon + 1);
            lo.push_back(std::stod(a, &p1));
            hi.push_back(std::stod(b, &p2));
            if (p1 != a.size() || p2 != b.size()) {
                return false;
            }
        } catch (const std::exception&) {
            return false;
        }
    }
    return !lo.empty();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tropical abstract interpretation of piecewise-linear ReLU networks"};
    app.set_version_flag("--version", std::string(troprelu_version()));

    std::string network_path;
    std::string spec_path;
    std::string box_text;
    std::string mode = "zone";
    std::string domain = "zone";
    std::string track = "io";
    std::string subdiv;
    std::string report_path;
    std::string csv_arg;
    std::string output_relu = "file";
    double eps = 1e-9;
    std::size_t cell_budget = 1024;
    std::size_t max_subset = 2;
    bool lenient = false;
    bool quiet = false;

    app.add_option("-n,--network", network_path, "network in Sherlock text format")->required()->check(CLI::ExistingFile);
    auto* spec_opt = app.add_option("-s,--spec", spec_path, "JSON file with input_box and assertions")
                         ->check(CLI::ExistingFile);
    auto* box_opt = app.add_option("--box", box_text, "input box as lo:hi,lo:hi (no assertions)");
    spec_opt->excludes(box_opt);
    app.add_option("-m,--mode", mode, "layer chaining")->check(CLI::IsMember({"box", "zone", "external"}));
    app.add_option("-d,--domain", domain, "enclosing domain")->check(CLI::IsMember({"zone", "octagon"}));
    app.add_option("-t,--track", track, "tracked variables")->check(CLI::IsMember({"io", "all"}));
    app.add_option("--subdiv", subdiv, "input cuts, e.g. x1:4,x2:2");
    app.add_option("--cell-budget", cell_budget, "maximum number of cells")->check(CLI::PositiveNumber);
    app.add_option("--max-subset", max_subset, "largest input group for cross rows")->check(CLI::PositiveNumber);
    app.add_option("--eps", eps, "numeric tolerance")->check(CLI::NonNegativeNumber);
    app.add_option("-r,--report", report_path, "write the JSON report here ('-' for stdout)");
    app.add_option("--csv", csv_arg, "dims:path, e.g. x1,y1:out.csv");
    app.add_option("--output-relu", output_relu, "ReLU on the output layer")
        ->check(CLI::IsMember({"file", "on", "off"}));
    app.add_flag("--lenient", lenient, "ignore trailing tokens in the network file");
    app.add_flag("-q,--quiet", quiet, "no summary on stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitError;
    }
    if (spec_path.empty() && box_text.empty()) {
        std::fprintf(stderr, "troprelu: one of --spec or --box is required\n");
        return kExitError;
    }

    const int relu_flag = output_relu == "on" ? 1 : output_relu == "off" ? 0 : -1;
    troprelu_network* net = nullptr;
    if (troprelu_network_load(network_path.c_str(), lenient ? 0 : 1, relu_flag, &net) != TROPRELU_OK) {
        return fail("loading network");
    }
    troprelu_spec* spec = nullptr;
    troprelu_status st = TROPRELU_OK;
    if (!spec_path.empty()) {
        st = troprelu_spec_load(spec_path.c_str(), &spec);
    } else {
        std::vector<double> lo;
        std::vector<double> hi;
        if (!parse_box(box_text, lo, hi)) {
            troprelu_network_free(net);
            std::fprintf(stderr, "troprelu: --box must look like lo:hi,lo:hi\n");
            return kExitError;
        }
        st = troprelu_spec_from_box(lo.data(), hi.data(), lo.size(), &spec);
    }
    if (st != TROPRELU_OK) {
        troprelu_network_free(net);
        return fail("loading spec");
    }

    static const std::map<std::string, troprelu_mode> modes{
        {"box", TROPRELU_MODE_BOX}, {"zone", TROPRELU_MODE_ZONE}, {"external", TROPRELU_MODE_EXTERNAL}};
    troprelu_options opts;
    troprelu_options_init(&opts);
    opts.mode = modes.at(mode);
    opts.domain = domain == "octagon" ? TROPRELU_DOMAIN_OCTAGON : TROPRELU_DOMAIN_ZONE;
    opts.track = track == "all" ? TROPRELU_TRACK_ALL : TROPRELU_TRACK_IO;
    opts.eps = eps;
    opts.subdivision = subdiv.empty() ? nullptr : subdiv.c_str();
    opts.cell_budget = cell_budget;
    opts.max_subset_size = max_subset;

    troprelu_report* report = nullptr;
    st = troprelu_run(net, spec, &opts, &report);
    troprelu_spec_free(spec);
    if (st != TROPRELU_OK) {
        troprelu_network_free(net);
        return fail("analysis");
    }

    int rc = troprelu_report_num_unknown(report) == 0 ? kExitVerified : kExitUnknown;
    if (!report_path.empty()) {
        if (report_path == "-") {
            const char* json = troprelu_report_json(report, 1);
            if (json == nullptr) {
                rc = fail("report");
            } else {
                std::fputs(json, stdout);
            }
        } else if (troprelu_report_write_json(report, report_path.c_str()) != TROPRELU_OK) {
            rc = fail("writing report");
        }
    }
    if (!csv_arg.empty()) {
        const auto colon = csv_arg.rfind(':');
        if (colon == std::string::npos) {
            std::fprintf(stderr, "troprelu: --csv must look like dims:path\n");
            rc = kExitError;
        } else if (troprelu_report_write_csv(report, csv_arg.substr(0, colon).c_str(),
                                             csv_arg.substr(colon + 1).c_str()) != TROPRELU_OK) {
            rc = fail("writing csv");
        }
    }
    if (!quiet && report_path != "-") {
        const std::size_t outs = troprelu_network_num_outputs(net);
        for (std::size_t k = 0; k < outs; ++k) {
            double lo = 0;
            double hi = 0;
            troprelu_report_output_bounds(report, k, &lo, &hi);
            std::printf("y%zu in [%s, %s]\n", k + 1, fmt(lo).c_str(), fmt(hi).c_str());
        }
        for (std::size_t k = 0; k < troprelu_report_num_assertions(report); ++k) {
            int verified = 0;
            double minimum = 0;
            troprelu_report_assertion(report, k, &verified, &minimum);
            std::printf("%s: %s (min %s)\n", troprelu_report_assertion_name(report, k),
                        verified ? "verified" : "unknown", fmt(minimum).c_str());
        }
    }
    troprelu_report_free(report);
    troprelu_network_free(net);
    return rc;
}
