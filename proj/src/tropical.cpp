// Copyright (c) troprelu contributors.
// SPDX-License-Identifier: Apache-2.0
#include "troprelu/tropical.hpp"

#include <algorithm>
#include <cmath>

namespace troprelu {

TropInternal::TropInternal(std::size_t dim, std::vector<Point> generators)
    : dim_(dim), generators_(std::move(generators)) {
    for (const Point& g : generators_) {
        require(g.size() == dim_, ErrorCode::dimension_mismatch, "generator dimension differs from polyhedron");
        for (double v : g) {
            require(std::isfinite(v), ErrorCode::invalid_argument, "generators must be finite");
        }
    }
}

TropRow TropRow::empty(std::size_t dim) {
    return TropRow{std::vector<MaxPlus>(dim + 1, MaxPlus::zero()), std::vector<MaxPlus>(dim + 1, MaxPlus::zero())};
}

TropExternal::TropExternal(std::size_t dim, std::vector<TropRow> rows) : dim_(dim) {
    for (TropRow& r : rows) {
        add(std::move(r));
    }
}

void TropExternal::add(TropRow row) {
    require(row.lhs.size() == dim_ + 1 && row.rhs.size() == dim_ + 1, ErrorCode::dimension_mismatch,
            "row width differs from system dimension");
    rows_.push_back(std::move(row));
}

MaxPlus evaluate(std::span<const MaxPlus> form, std::span<const double> x) {
    MaxPlus acc = form[0];
    for (std::size_t k = 0; k < x.size(); ++k) {
        acc = oplus(acc, otimes(form[k + 1], MaxPlus(x[k])));
    }
    return acc;
}

bool external_membership(const TropExternal& ext, std::span<const double> p, double eps) {
    require(p.size() == ext.dim(), ErrorCode::dimension_mismatch, "external_membership: point dimension");
    for (const TropRow& row : ext.rows()) {
        const MaxPlus l = evaluate(row.lhs, p);
        const MaxPlus r = evaluate(row.rhs, p);
        if (l.is_zero()) {
            continue;
        }
        if (r.is_zero() || l.value() > r.value() + eps) {
            return false;
        }
    }
    return true;
}

bool in_hull(const std::vector<Point>& generators, std::span<const double> p, double eps, std::size_t skip) {
    const std::size_t n = p.size();
    Point q(n, -kInf);
    double lambda_max = -kInf;
    for (std::size_t j = 0; j < generators.size(); ++j) {
        if (j == skip) {
            continue;
        }
        const Point& g = generators[j];
        double lambda = 0;
        for (std::size_t k = 0; k < n; ++k) {
            lambda = std::min(lambda, p[k] - g[k]);
        }
        lambda_max = std::max(lambda_max, lambda);
        for (std::size_t k = 0; k < n; ++k) {
            q[k] = std::max(q[k], lambda + g[k]);
        }
    }
    if (lambda_max < -eps) {
        return false;
    }
    for (std::size_t k = 0; k < n; ++k) {
        if (p[k] - q[k] > eps) {
            return false;
        }
    }
    return true;
}

bool internal_membership(const TropInternal& hull, std::span<const double> p, double eps) {
    require(p.size() == hull.dim(), ErrorCode::dimension_mismatch, "internal_membership: point dimension");
    return in_hull(hull.generators(), p, eps);
}

TropInternal zone_to_internal(const Dbm& d, double eps) {
    for (std::size_t i = 0; i < d.slots(); ++i) {
        for (std::size_t j = 0; j < d.slots(); ++j) {
            require(std::isfinite(d(i, j)), ErrorCode::infinite_entry, "zone_to_internal: unbounded zone");
        }
    }
    require(dbm_is_closed(d, eps), ErrorCode::not_closed, "zone_to_internal: DBM is not closed");
    const std::size_t n = d.dim();
    std::vector<Point> gens;
    gens.reserve(n + 1);
    Point a(n);
    for (std::size_t j = 0; j < n; ++j) {
        a[j] = -d(0, j + 1);
    }
    gens.push_back(std::move(a));
    for (std::size_t k = 1; k <= n; ++k) {
        Point b(n);
        for (std::size_t j = 0; j < n; ++j) {
            b[j] = d(k, 0) - d(k, j + 1);
        }
        gens.push_back(std::move(b));
    }
    return extreme_filter(TropInternal(n, std::move(gens)), eps);
}

Dbm internal_to_zone(const TropInternal& hull) {
    require(hull.size() > 0, ErrorCode::empty_input, "internal_to_zone: no generators");
    const std::size_t n = hull.dim();
    // Homogenised generator matrix: coordinate n is the constant 0.
    auto coord = [&](const Point& g, std::size_t i) { return i == n ? 0.0 : g[i]; };
    // Residual (A/A)_{ij} = min_k (a_ik - a_jk); the zone reads x_i - x_j >= (A/A)_{ij}.
    std::vector<double> res((n + 1) * (n + 1), kInf);
    for (const Point& g : hull.generators()) {
        for (std::size_t i = 0; i <= n; ++i) {
            for (std::size_t j = 0; j <= n; ++j) {
                double& r = res[i * (n + 1) + j];
                r = std::min(r, coord(g, i) - coord(g, j));
            }
        }
    }
    auto slot = [&](std::size_t i) { return i == n ? std::size_t{0} : i + 1; };
    Dbm d = Dbm::top(n);
    for (std::size_t i = 0; i <= n; ++i) {
        for (std::size_t j = 0; j <= n; ++j) {
            if (i != j) {
                d(slot(j), slot(i)) = -res[i * (n + 1) + j];
            }
        }
    }
    return d;
}

TropInternal extreme_filter(const TropInternal& hull, double eps) {
    std::vector<Point> gens = hull.generators();
    // Walking backwards removes later copies of duplicated points first.
    for (std::size_t i = gens.size(); i-- > 0;) {
        if (gens.size() > 1 && in_hull(gens, gens[i], eps, i)) {
            gens.erase(gens.begin() + static_cast<std::ptrdiff_t>(i));
        }
    }
    return TropInternal(hull.dim(), std::move(gens));
}

TropInternal union_internal(const TropInternal& a, const TropInternal& b, double eps) {
    require(a.dim() == b.dim(), ErrorCode::dimension_mismatch, "union_internal: dimensions differ");
    std::vector<Point> gens = a.generators();
    gens.insert(gens.end(), b.generators().begin(), b.generators().end());
    return extreme_filter(TropInternal(a.dim(), std::move(gens)), eps);
}

TropExternal intersect_external(const TropExternal& a, const TropExternal& b) {
    require(a.dim() == b.dim(), ErrorCode::dimension_mismatch, "intersect_external: dimensions differ");
    TropExternal r = a;
    for (const TropRow& row : b.rows()) {
        r.add(row);
    }
    return r;
}

namespace {

// Indices of generators with no other generator below them; of equal ones the first counts.
std::vector<std::size_t> minimal_generators(const std::vector<Point>& gens) {
    auto leq = [](const Point& a, const Point& b) {
        for (std::size_t k = 0; k < a.size(); ++k) {
            if (a[k] > b[k]) {
                return false;
            }
        }
        return true;
    };
    std::vector<std::size_t> minimal;
    for (std::size_t i = 0; i < gens.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < gens.size() && !dominated; ++j) {
            if (j != i && leq(gens[j], gens[i]) && (!leq(gens[i], gens[j]) || j < i)) {
                dominated = true;
            }
        }
        if (!dominated) {
            minimal.push_back(i);
        }
    }
    return minimal;
}

} // namespace

TropInternal emb_internal(const TropInternal& hull, Interval range, std::size_t position) {
    const Interval ranges[] = {range};
    const std::size_t positions[] = {position};
    return emb_internal_box(hull, ranges, positions);
}

TropInternal emb_internal_box(const TropInternal& hull, std::span<const Interval> ranges,
                              std::span<const std::size_t> positions) {
    require(ranges.size() == positions.size(), ErrorCode::dimension_mismatch, "emb_internal: ranges/positions");
    const std::size_t new_dim = hull.dim() + ranges.size();
    for (std::size_t t = 0; t < positions.size(); ++t) {
        require(positions[t] < new_dim && (t == 0 || positions[t] > positions[t - 1]), ErrorCode::bad_index,
                "emb_internal: positions must be increasing and in range");
        require(ranges[t].lo <= ranges[t].hi && std::isfinite(ranges[t].lo) && std::isfinite(ranges[t].hi),
                ErrorCode::invalid_argument, "emb_internal: bad interval");
    }
    auto lift = [&](const Point& p, std::size_t raised) {
        Point out(new_dim);
        std::size_t src = 0;
        std::size_t t = 0;
        for (std::size_t k = 0; k < new_dim; ++k) {
            if (t < positions.size() && positions[t] == k) {
                out[k] = t == raised ? ranges[t].hi : ranges[t].lo;
                ++t;
            } else {
                out[k] = p[src++];
            }
        }
        return out;
    };
    const auto& gens = hull.generators();
    std::vector<Point> out;
    out.reserve(gens.size() * (1 + ranges.size()));
    for (const Point& p : gens) {
        out.push_back(lift(p, ranges.size()));
    }
    const std::vector<std::size_t> minimal = minimal_generators(gens);
    for (std::size_t t = 0; t < ranges.size(); ++t) {
        for (std::size_t i : minimal) {
            out.push_back(lift(gens[i], t));
        }
    }
    return TropInternal(new_dim, std::move(out));
}

TropExternal emb_external(const TropExternal& ext, std::size_t count, std::size_t position) {
    require(position <= ext.dim(), ErrorCode::bad_index, "emb_external: position out of range");
    TropExternal r(ext.dim() + count);
    for (TropRow row : ext.rows()) {
        const auto at = static_cast<std::ptrdiff_t>(position + 1);
        row.lhs.insert(row.lhs.begin() + at, count, MaxPlus::zero());
        row.rhs.insert(row.rhs.begin() + at, count, MaxPlus::zero());
        r.add(std::move(row));
    }
    return r;
}

TropInternal proj_internal(const TropInternal& hull, std::span<const std::size_t> keep, double eps) {
    for (std::size_t k : keep) {
        require(k < hull.dim(), ErrorCode::bad_index, "proj_internal: index out of range");
    }
    std::vector<Point> gens;
    gens.reserve(hull.size());
    for (const Point& g : hull.generators()) {
        Point p(keep.size());
        for (std::size_t t = 0; t < keep.size(); ++t) {
            p[t] = g[keep[t]];
        }
        gens.push_back(std::move(p));
    }
    return extreme_filter(TropInternal(keep.size(), std::move(gens)), eps);
}

} // namespace troprelu
