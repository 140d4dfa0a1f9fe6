// Copyright (c) troprelu contributors.
// SPDX-License-Identifier: Apache-2.0
#include "troprelu/subdivision.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "troprelu/network.hpp"

namespace troprelu {

namespace {

constexpr double kUnitSumTol = 1e-12;

std::vector<double> uniform_cuts(Interval iv, std::size_t n) {
    require(n >= 1, ErrorCode::invalid_argument, "subdivision needs at least one cell per input");
    std::vector<double> c(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        c[k] = iv.lo + (iv.hi - iv.lo) * static_cast<double>(k) / static_cast<double>(n);
    }
    c[n] = iv.hi;
    return c;
}

} // namespace

SubdivisionGrid SubdivisionGrid::uniform(const Box& box, std::span<const std::size_t> cells_per_dim) {
    require(cells_per_dim.size() == box.size(), ErrorCode::dimension_mismatch, "grid: one cell count per input");
    SubdivisionGrid g;
    for (std::size_t i = 0; i < box.size(); ++i) {
        g.cuts.push_back(uniform_cuts(box[i], cells_per_dim[i]));
    }
    return g;
}

SubdivisionGrid SubdivisionGrid::uniform(const Box& box, std::size_t cells_per_dim) {
    const std::vector<std::size_t> counts(box.size(), cells_per_dim);
    return uniform(box, counts);
}

void SubdivisionGrid::validate() const {
    for (const auto& c : cuts) {
        require(c.size() >= 2, ErrorCode::invalid_argument, "grid: each input needs both endpoints");
        for (std::size_t k = 1; k < c.size(); ++k) {
            require(c[k - 1] <= c[k], ErrorCode::invalid_argument, "grid: cut points must be non-decreasing");
        }
    }
}

std::size_t SubdivisionGrid::cell_count() const {
    std::size_t total = 1;
    for (std::size_t i = 0; i < dims(); ++i) {
        const std::size_t along = cells_along(i);
        if (total > std::numeric_limits<std::size_t>::max() / std::max<std::size_t>(along, 1)) {
            return std::numeric_limits<std::size_t>::max();
        }
        total *= along;
    }
    return total;
}

std::vector<Box> SubdivisionGrid::cells(std::size_t budget) const {
    validate();
    const std::size_t count = cell_count();
    require(count <= budget, ErrorCode::budget_exceeded,
            "subdivision has " + std::to_string(count) + " cells, budget is " + std::to_string(budget));
    std::vector<Box> out;
    out.reserve(count);
    std::vector<std::size_t> idx(dims(), 0);
    for (std::size_t c = 0; c < count; ++c) {
        Box cell;
        for (std::size_t i = 0; i < dims(); ++i) {
            cell.dims.push_back({cuts[i][idx[i]], cuts[i][idx[i] + 1]});
        }
        out.push_back(std::move(cell));
        for (std::size_t i = dims(); i-- > 0;) {
            if (++idx[i] < cells_along(i)) {
                break;
            }
            idx[i] = 0;
        }
    }
    return out;
}

Box SubdivisionGrid::bounding_box() const {
    Box b;
    for (const auto& c : cuts) {
        b.dims.push_back({c.front(), c.back()});
    }
    return b;
}

ScalarSubdivision subdivide_scalar(double lambda, double bias, Interval domain, std::size_t cells) {
    require(std::isfinite(lambda) && std::isfinite(bias), ErrorCode::invalid_argument, "subdivide_scalar: non-finite");
    AffineLayer layer{Matrix(1, 1, lambda), {bias}, Box({domain})};
    const std::vector<double> c = uniform_cuts(domain, cells);
    auto f = [&](double x) { return lambda * x + bias; };

    TropExternal ext = zone_external(zone_constants(layer));
    for (std::size_t k = 1; k < cells; ++k) {
        TropRow row = TropRow::empty(2);
        if (lambda <= 0) {
            row.lhs[0] = MaxPlus::one();
            row.rhs[1] = MaxPlus(-c[k]);
            row.rhs[2] = MaxPlus(-f(c[k]));
        } else if (lambda <= 1) {
            row.lhs[2] = MaxPlus(-f(c[k]));
            row.rhs[0] = MaxPlus::one();
            row.rhs[1] = MaxPlus(-c[k]);
        } else {
            row.lhs[1] = MaxPlus(-c[k]);
            row.rhs[0] = MaxPlus::one();
            row.rhs[2] = MaxPlus(-f(c[k]));
        }
        ext.add(std::move(row));
    }

    std::vector<Point> gens{{domain.lo, f(domain.lo)}, {domain.hi, f(domain.hi)}};
    for (std::size_t i = 1; i <= cells; ++i) {
        if (lambda <= 0) {
            gens.push_back({c[i - 1], f(c[i])});
        } else if (lambda <= 1) {
            gens.push_back({c[i - 1] + f(c[i]) - f(c[i - 1]), f(c[i])});
        } else {
            gens.push_back({c[i], f(c[i - 1]) + c[i] - c[i - 1]});
        }
    }
    return {std::move(ext), extreme_filter(TropInternal(2, std::move(gens)))};
}

TropExternal subdivide_constraints(const AffineLayer& layer, const SubdivisionGrid& grid,
                                   const SubdivisionConfig& cfg) {
    layer.validate();
    grid.validate();
    const std::size_t m = layer.inputs();
    const std::size_t n = layer.outputs();
    require(grid.dims() == m, ErrorCode::dimension_mismatch, "subdivide_constraints: grid dimension");
    const ZoneAbsConstants k = zone_constants(layer);
    const Box& box = layer.input_box;
    auto lambda = [&](std::size_t i, std::size_t j) { return layer.weights(j, i); };
    auto x = [](std::size_t i) { return i + 1; };
    auto y = [m](std::size_t j) { return m + j + 1; };
    TropExternal ext(m + n);

    std::size_t max_cells = 1;
    for (std::size_t i = 0; i < m; ++i) {
        max_cells = std::max(max_cells, grid.cells_along(i));
    }

    for (std::size_t j = 0; j < n; ++j) {
        // Per-input rows.
        for (std::size_t i = 0; i < m; ++i) {
            const double l = lambda(i, j);
            if (l == 0) {
                continue;
            }
            for (std::size_t kk = 1; kk < grid.cells_along(i); ++kk) {
                const double c = grid.cuts[i][kk];
                TropRow row = TropRow::empty(m + n);
                if (l < 0) {
                    row.lhs[0] = MaxPlus::one();
                    row.rhs[x(i)] = MaxPlus(-c);
                    row.rhs[y(j)] = MaxPlus(-k.y_lo[j] + l * (box[i].hi - c));
                } else if (l <= 1) {
                    row.lhs[y(j)] = MaxPlus(-k.y_hi[j] + l * (box[i].hi - c));
                    if (std::abs(l - 1) > kUnitSumTol) {
                        row.rhs[0] = MaxPlus::one();
                    }
                    row.rhs[x(i)] = MaxPlus(-c);
                } else {
                    row.lhs[x(i)] = MaxPlus(-c);
                    row.rhs[0] = MaxPlus::one();
                    row.rhs[y(j)] = MaxPlus(-k.y_lo[j] - l * (c - box[i].lo));
                }
                ext.add(std::move(row));
            }
        }

        // Aggregated rows, one per interior cut index.
        for (std::size_t kk = 1; kk < max_cells; ++kk) {
            std::vector<std::size_t> negative;
            std::vector<std::size_t> unit;
            for (std::size_t i = 0; i < m; ++i) {
                if (kk >= grid.cells_along(i)) {
                    continue;
                }
                const double l = lambda(i, j);
                if (l < 0) {
                    negative.push_back(i);
                } else if (l > 0 && l <= 1) {
                    unit.push_back(i);
                }
            }
            if (negative.size() >= 2) {
                double sigma = 0;
                TropRow row = TropRow::empty(m + n);
                row.lhs[0] = MaxPlus::one();
                for (std::size_t i : negative) {
                    const double c = grid.cuts[i][kk];
                    sigma += lambda(i, j) * (box[i].hi - c);
                    row.rhs[x(i)] = MaxPlus(-c);
                }
                row.rhs[y(j)] = MaxPlus(-k.y_lo[j] + sigma);
                ext.add(std::move(row));
            }
            std::stable_sort(unit.begin(), unit.end(),
                             [&](std::size_t a, std::size_t b) { return lambda(a, j) < lambda(b, j); });
            std::vector<std::size_t> chosen;
            double total = 0;
            for (std::size_t i : unit) {
                if (total + lambda(i, j) <= 1 + kUnitSumTol) {
                    total += lambda(i, j);
                    chosen.push_back(i);
                }
            }
            if (chosen.size() >= 2) {
                double sigma = 0;
                TropRow row = TropRow::empty(m + n);
                for (std::size_t i : chosen) {
                    const double c = grid.cuts[i][kk];
                    sigma += lambda(i, j) * (box[i].hi - c);
                    row.rhs[x(i)] = MaxPlus(-c);
                }
                // A convex combination of the x_i - c_i is below their max, so 0 can go.
                if (std::abs(total - 1) > kUnitSumTol) {
                    row.rhs[0] = MaxPlus::one();
                }
                row.lhs[y(j)] = MaxPlus(-k.y_hi[j] + sigma);
                ext.add(std::move(row));
            }
        }
    }

    // Rows on groups of outputs whose sum is bounded below more tightly than the sum of bounds.
    const std::size_t max_size = std::min(cfg.max_subset_size, n);
    for (std::size_t size = 2; size <= max_size; ++size) {
        std::vector<bool> pick(n, false);
        std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(size), true);
        do {
            std::vector<std::size_t> group;
            for (std::size_t j = 0; j < n; ++j) {
                if (pick[j]) {
                    group.push_back(j);
                }
            }
            double sum_lo = 0;
            double width = 0;
            double m_group = 0;
            for (std::size_t j : group) {
                sum_lo += k.y_lo[j];
                width += k.y_hi[j] - k.y_lo[j];
                m_group += layer.bias[j];
            }
            for (std::size_t i = 0; i < m; ++i) {
                double s = 0;
                for (std::size_t j : group) {
                    s += lambda(i, j);
                }
                m_group += s < 0 ? s * box[i].hi : s * box[i].lo;
            }
            const double excess = m_group - sum_lo;
            if (excess > cfg.eps * (1 + std::abs(m_group))) {
                TropRow row = TropRow::empty(m + n);
                row.lhs[0] = MaxPlus::one();
                for (std::size_t j : group) {
                    const double share = width > 0 ? (k.y_hi[j] - k.y_lo[j]) / width : 1.0 / static_cast<double>(size);
                    row.rhs[y(j)] = MaxPlus(-(k.y_lo[j] + excess * share));
                }
                ext.add(std::move(row));
            }
        } while (std::prev_permutation(pick.begin(), pick.end()));
    }
    return ext;
}

TropInternal analyze_cellwise(const AffineLayer& layer, const SubdivisionGrid& grid, bool apply_relu,
                              const SubdivisionConfig& cfg) {
    layer.validate();
    require(grid.dims() == layer.inputs(), ErrorCode::dimension_mismatch, "analyze_cellwise: grid dimension");
    const std::size_t m = layer.inputs();
    const std::size_t n = layer.outputs();
    std::vector<std::size_t> outs(n);
    std::iota(outs.begin(), outs.end(), m);
    std::vector<Point> gens;
    for (const Box& cell : grid.cells(cfg.cell_budget)) {
        AffineLayer piece{layer.weights, layer.bias, cell};
        TropInternal part = zone_internal(zone_constants(piece), cfg.eps);
        if (apply_relu) {
            part = relu_internal(part, outs, cfg.eps);
        }
        gens.insert(gens.end(), part.generators().begin(), part.generators().end());
    }
    return extreme_filter(TropInternal(m + n, std::move(gens)), cfg.eps);
}

} // namespace troprelu
