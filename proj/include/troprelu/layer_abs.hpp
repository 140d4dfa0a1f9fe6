// Copyright (c) troprelu contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "troprelu/common.hpp"
#include "troprelu/dbm.hpp"
#include "troprelu/tropical.hpp"

namespace troprelu {

// y = W x + b for x in `input_box`; W is outputs x inputs.
struct AffineLayer {
    Matrix weights;
    std::vector<double> bias;
    Box input_box;

    [[nodiscard]] std::size_t inputs() const { return weights.cols(); }
    [[nodiscard]] std::size_t outputs() const { return weights.rows(); }
    void validate() const;
};

// Constants of the tightest zone around the graph of an affine layer over a box.
struct ZoneAbsConstants {
    Box input_box;
    std::vector<double> y_lo;  // m_i
    std::vector<double> y_hi;  // M_i
    Matrix diff;               // Delta(i1, i2): upper bound of y_i1 - y_i2
    Matrix delta;              // delta(i, j), outputs x inputs
    Matrix d;                  // d(i1, i2) = Delta(i1, i2) + m_i2
    Matrix c;                  // c(i1, i2) = M_i1 - Delta(i1, i2)

    [[nodiscard]] std::size_t inputs() const { return input_box.size(); }
    [[nodiscard]] std::size_t outputs() const { return y_lo.size(); }
};

struct OctAbsConstants {
    ZoneAbsConstants zone;
    Matrix sum_hi;  // Gamma(i1, i2): upper bound of y_i1 + y_i2
    Matrix sum_lo;  // L(i1, i2): lower bound of y_i1 + y_i2
    Matrix gamma;   // gamma(i, j), outputs x inputs
};

ZoneAbsConstants zone_constants(const AffineLayer& layer);
// Closed DBM over (x_1..x_m, y_1..y_n).
Dbm zone_dbm(const ZoneAbsConstants& k);
TropExternal zone_external(const ZoneAbsConstants& k);
TropInternal zone_internal(const ZoneAbsConstants& k, double eps = kDefaultEps);

OctAbsConstants oct_constants(const AffineLayer& layer);
// Closed octagon over (x_1..x_m, y_1..y_n).
OctDbm oct_dbm(const OctAbsConstants& k);
// Generators over the signed coordinates (x+, y+, x-, y-), derived from the octagon's doubled zone.
TropInternal oct_internal(const OctAbsConstants& k, double eps = kDefaultEps);
// Points given by the closed-form generator formulas for the octagon, unfiltered,
// ordered A, B+_1..m, B-_1..m, C+_1..n, C-_1..n.
std::vector<Point> oct_internal_formula(const OctAbsConstants& k);

} // namespace troprelu
