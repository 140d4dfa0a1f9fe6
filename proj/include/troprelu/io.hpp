// Copyright (c) troprelu contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "troprelu/network.hpp"
#include "troprelu/spec_check.hpp"

namespace troprelu {

// Sherlock text format: input count, output count, hidden layer count, hidden sizes, then
// for each layer and neuron its incoming weights followed by its bias. Hidden layers use
// ReLU; the output layer does when the file carries a "# output-relu" line. Other lines
// starting with '#' are ignored. In strict mode trailing tokens are an error.
Network parse_sherlock_text(std::string_view text, bool strict = true);
Network parse_sherlock(const std::string& path, bool strict = true);
std::string serialize_sherlock(const Network& net);

struct SpecFile {
    Box input_box;
    std::vector<LinearAssertion> assertions;
};

SpecFile parse_spec_text(std::string_view text);
SpecFile parse_spec(const std::string& path);

// "x1:2,x3:4" (or "1:2,3:4"): cells per listed input, 1 elsewhere.
SubdivisionGrid parse_subdivision(std::string_view text, const Box& box);

struct RunOutcome {
    std::string network_path;
    Network network;
    SpecFile spec;
    AnalysisOptions options;
    AnalysisResult result;
    std::vector<Verdict> verdicts;
    double analysis_ms{0};
    double check_ms{0};

    [[nodiscard]] std::size_t unknown_count() const;
};

RunOutcome run_analysis(const Network& net, const SpecFile& spec, const AnalysisOptions& opts);
// Report with a stable key order; only the "timings" member depends on the run.
std::string report_json(const RunOutcome& run, bool with_timings = true);
// Generators projected on `dims`, then the corners of the projected enclosing zone (two dims only).
std::string csv_text(const RunOutcome& run, const std::vector<std::string>& dims);
void write_text_file(const std::string& path, const std::string& text);

} // namespace troprelu
