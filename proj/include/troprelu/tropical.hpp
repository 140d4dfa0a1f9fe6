// Copyright (c) troprelu contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "troprelu/common.hpp"
#include "troprelu/dbm.hpp"
#include "troprelu/maxplus.hpp"

namespace troprelu {

// Tropical polyhedron as the max-plus affine hull of finitely many points:
// { max_j (l_j + g_j) : max_j l_j = 0 }.
class TropInternal {
  public:
    TropInternal() = default;
    TropInternal(std::size_t dim, std::vector<Point> generators);

    [[nodiscard]] std::size_t dim() const { return dim_; }
    [[nodiscard]] const std::vector<Point>& generators() const { return generators_; }
    [[nodiscard]] std::size_t size() const { return generators_.size(); }

  private:
    std::size_t dim_{0};
    std::vector<Point> generators_;
};

// One max-plus inequality. Slot 0 holds the constant, slot k+1 the coefficient of x_k;
// the row reads max(lhs[0], lhs[k+1] + x_k) <= max(rhs[0], rhs[k+1] + x_k).
struct TropRow {
    std::vector<MaxPlus> lhs;
    std::vector<MaxPlus> rhs;

    static TropRow empty(std::size_t dim);
    bool operator==(const TropRow&) const = default;
};

class TropExternal {
  public:
    TropExternal() = default;
    explicit TropExternal(std::size_t dim, std::vector<TropRow> rows = {});

    [[nodiscard]] std::size_t dim() const { return dim_; }
    [[nodiscard]] const std::vector<TropRow>& rows() const { return rows_; }
    void add(TropRow row);

  private:
    std::size_t dim_{0};
    std::vector<TropRow> rows_;
};

MaxPlus evaluate(std::span<const MaxPlus> form, std::span<const double> x);
bool external_membership(const TropExternal& ext, std::span<const double> p, double eps = kDefaultEps);
bool internal_membership(const TropInternal& hull, std::span<const double> p, double eps = kDefaultEps);
// Membership against an explicit generator list, skipping index `skip`.
bool in_hull(const std::vector<Point>& generators, std::span<const double> p, double eps,
             std::size_t skip = static_cast<std::size_t>(-1));

// Extreme points of a closed zone (n+1 generators before filtering).
TropInternal zone_to_internal(const Dbm& d, double eps = kDefaultEps);
// Least zone containing the hull, by residuation of the generator matrix.
Dbm internal_to_zone(const TropInternal& hull);
// Drops generators that belong to the hull of the others; of equal ones the first is kept.
TropInternal extreme_filter(const TropInternal& hull, double eps = kDefaultEps);
TropInternal union_internal(const TropInternal& a, const TropInternal& b, double eps = kDefaultEps);
TropExternal intersect_external(const TropExternal& a, const TropExternal& b);

// New coordinate ranging over `range`, inserted before coordinate `position`.
TropInternal emb_internal(const TropInternal& hull, Interval range, std::size_t position);
// Repeated emb_internal: new coordinate t ranges over ranges[t] and ends at index positions[t]
// of the result. Positions must be strictly increasing.
TropInternal emb_internal_box(const TropInternal& hull, std::span<const Interval> ranges,
                              std::span<const std::size_t> positions);
// Inserts `count` unconstrained coordinates before coordinate `position`.
TropExternal emb_external(const TropExternal& ext, std::size_t count, std::size_t position);
TropInternal proj_internal(const TropInternal& hull, std::span<const std::size_t> keep, double eps = kDefaultEps);

} // namespace troprelu
