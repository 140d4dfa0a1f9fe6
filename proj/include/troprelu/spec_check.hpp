// Copyright (c) troprelu contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "troprelu/network.hpp"

namespace troprelu {

// in . x + out . y + constant >= 0 for every input in the (optionally restricted) box.
struct LinearAssertion {
    std::string name;
    std::vector<double> in_coeffs;
    std::vector<double> out_coeffs;
    double constant{0};
    std::optional<Box> restrict_box;

    void validate(std::size_t inputs, std::size_t outputs) const;
};

enum class VerdictStatus { verified, unknown };
const char* to_string(VerdictStatus s);

struct Verdict {
    VerdictStatus status{VerdictStatus::unknown};
    double minimum{0};  // lower bound of the asserted expression; +inf when vacuous
    std::string method;
    std::size_t cells{1};
};

// Minimum of coeffs . v + constant over the zone, with the leading variables further
// restricted to `restriction`. Returns -inf when unbounded.
double min_over_zone(const Dbm& zone, const std::optional<Box>& restriction, std::span<const double> coeffs,
                     double constant);
// Same over a zone laid out as (inputs, outputs).
double min_over_zone(const Dbm& zone, const std::optional<Box>& restriction, const LinearAssertion& a);
double min_over_octagon(const OctDbm& oct, const std::optional<Box>& restriction, std::span<const double> coeffs,
                        double constant);

Verdict check(const LinearAssertion& a, const AnalysisResult& result, double eps = kDefaultEps);
Verdict check_with_subdivision(const LinearAssertion& a, const Network& net, const Box& input_box,
                               const SubdivisionGrid& grid, const AnalysisOptions& opts = {});

} // namespace troprelu
