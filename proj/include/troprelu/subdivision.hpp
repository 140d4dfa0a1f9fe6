// Copyright (c) troprelu contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "troprelu/layer_abs.hpp"

namespace troprelu {

// Per-input cut points a = c_0 < c_1 < ... < c_N = b.
struct SubdivisionGrid {
    std::vector<std::vector<double>> cuts;

    static SubdivisionGrid uniform(const Box& box, std::span<const std::size_t> cells_per_dim);
    static SubdivisionGrid uniform(const Box& box, std::size_t cells_per_dim);

    [[nodiscard]] std::size_t dims() const { return cuts.size(); }
    [[nodiscard]] std::size_t cells_along(std::size_t i) const { return cuts[i].size() - 1; }
    [[nodiscard]] std::size_t cell_count() const;
    // Cells in lexicographic order, the last input varying fastest.
    [[nodiscard]] std::vector<Box> cells(std::size_t budget) const;
    [[nodiscard]] Box bounding_box() const;
    void validate() const;
};

struct SubdivisionConfig {
    std::size_t max_subset_size = 2;
    std::size_t cell_budget = 1024;
    double eps = kDefaultEps;
};

struct ScalarSubdivision {
    TropExternal external;
    TropInternal internal;
};

// y = lambda x + bias over [a, b] cut into `cells` equal pieces, over (x, y).
ScalarSubdivision subdivide_scalar(double lambda, double bias, Interval domain, std::size_t cells);
// Extra rows over (x_1..x_m, y_1..y_n) refining the zone of `layer` for the given cuts.
TropExternal subdivide_constraints(const AffineLayer& layer, const SubdivisionGrid& grid,
                                   const SubdivisionConfig& cfg = {});
// Union of the per-cell layer zones, with ReLU on the outputs when asked.
TropInternal analyze_cellwise(const AffineLayer& layer, const SubdivisionGrid& grid, bool apply_relu,
                              const SubdivisionConfig& cfg = {});

} // namespace troprelu
