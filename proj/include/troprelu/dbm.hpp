// Copyright (c) troprelu contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>
#include <vector>

#include "troprelu/common.hpp"

namespace troprelu {

// Difference-bound matrix over n variables plus the constant slot 0.
// Entry (i, j) bounds x_i - x_j, with x_0 = 0. Variables occupy slots 1..n.
class Dbm {
  public:
    Dbm() = default;
    static Dbm top(std::size_t dim);
    static Dbm from_rows(const std::vector<std::vector<double>>& rows);
    static Dbm from_box(const Box& box);

    [[nodiscard]] std::size_t dim() const { return dim_; }
    [[nodiscard]] std::size_t slots() const { return dim_ + 1; }
    double operator()(std::size_t i, std::size_t j) const { return m_[i * slots() + j]; }
    double& operator()(std::size_t i, std::size_t j) { return m_[i * slots() + j]; }
    void tighten(std::size_t i, std::size_t j, double c);

    // Bounds of variable k (0-based).
    [[nodiscard]] double upper(std::size_t k) const { return (*this)(k + 1, 0); }
    [[nodiscard]] double lower(std::size_t k) const { return -(*this)(0, k + 1); }

    [[nodiscard]] std::vector<std::vector<double>> to_rows() const;
    bool operator==(const Dbm&) const = default;

  private:
    std::size_t dim_{0};
    std::vector<double> m_;
};

// Floyd-Warshall closure; nullopt when the zone is empty.
std::optional<Dbm> dbm_close(Dbm d);
bool dbm_is_closed(const Dbm& d, double eps = kDefaultEps);
std::optional<Dbm> dbm_intersect(const Dbm& a, const Dbm& b);
// Entrywise max; the least zone containing both when inputs are closed.
Dbm dbm_join(const Dbm& a, const Dbm& b);
Box dbm_box(const Dbm& d);
bool dbm_contains(const Dbm& d, std::span<const double> p, double eps = kDefaultEps);
Dbm best_zone_of_points(std::span<const Point> points);
// Variable k of `d` goes to variable slot_of[k] of a dim-`new_dim` DBM; the rest is unconstrained.
Dbm dbm_embed(const Dbm& d, std::size_t new_dim, std::span<const std::size_t> slot_of);
// Restriction to the listed variables, in order. Exact on closed DBMs.
Dbm dbm_project(const Dbm& d, std::span<const std::size_t> keep);
// All difference entries relaxed; only bounds remain.
Dbm dbm_box_only(const Dbm& d);

// Octagon stored as a coherent DBM over the 2n signed variables
// (+x_1, ..., +x_n, -x_1, ..., -x_n), without a constant slot.
class OctDbm {
  public:
    OctDbm() = default;
    static OctDbm top(std::size_t n);
    static OctDbm from_box(const Box& box);
    static OctDbm from_zone(const Dbm& d);

    [[nodiscard]] std::size_t dim() const { return n_; }
    [[nodiscard]] std::size_t pos(std::size_t k) const { return k; }
    [[nodiscard]] std::size_t neg(std::size_t k) const { return k + n_; }
    [[nodiscard]] std::size_t bar(std::size_t p) const { return p < n_ ? p + n_ : p - n_; }

    // Bound of V_p - V_q on signed slots.
    double operator()(std::size_t p, std::size_t q) const { return m_[p * 2 * n_ + q]; }
    double& operator()(std::size_t p, std::size_t q) { return m_[p * 2 * n_ + q]; }
    // Tightens V_p - V_q <= c together with its coherent mirror.
    void tighten(std::size_t p, std::size_t q, double c);

    [[nodiscard]] double upper(std::size_t k) const { return (*this)(pos(k), neg(k)) / 2; }
    [[nodiscard]] double lower(std::size_t k) const { return -(*this)(neg(k), pos(k)) / 2; }
    void tighten_upper(std::size_t k, double c) { tighten(pos(k), neg(k), 2 * c); }
    void tighten_lower(std::size_t k, double c) { tighten(neg(k), pos(k), -2 * c); }
    bool operator==(const OctDbm&) const = default;

  private:
    std::size_t n_{0};
    std::vector<double> m_;
};

// Floyd-Warshall on the signed graph followed by one strengthening pass.
std::optional<OctDbm> oct_close(OctDbm o);
std::optional<OctDbm> oct_intersect(const OctDbm& a, const OctDbm& b);
OctDbm oct_join(const OctDbm& a, const OctDbm& b);
OctDbm oct_embed(const OctDbm& o, std::size_t new_dim, std::span<const std::size_t> slot_of);
OctDbm oct_project(const OctDbm& o, std::span<const std::size_t> keep);
OctDbm oct_box_only(const OctDbm& o);
Box oct_box(const OctDbm& o);
bool oct_contains(const OctDbm& o, std::span<const double> p, double eps = kDefaultEps);
// Difference and bound constraints of the octagon.
Dbm oct_zone_part(const OctDbm& o);
// The octagon as a zone over the 2n signed variables, with a constant slot.
Dbm oct_doubled_zone(const OctDbm& o);

} // namespace troprelu
