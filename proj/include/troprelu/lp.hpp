// Copyright (c) troprelu contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <utility>
#include <vector>

#include "troprelu/common.hpp"

namespace troprelu {

// sum_k coeff_k x_{var_k} <= rhs
struct LinearConstraint {
    std::vector<std::pair<std::size_t, double>> terms;
    double rhs{0};
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
    LpStatus status{LpStatus::optimal};
    double value{0};
    std::size_t pivots{0};
};

// Minimises objective . x over free x subject to the rows. Dense two-phase simplex with
// Bland's rule, run on the dual (equality form, one row per variable).
LpResult lp_minimize(std::span<const double> objective, const std::vector<LinearConstraint>& rows,
                     double eps = kDefaultEps);

} // namespace troprelu
