// Copyright (c) troprelu contributors.
// SPDX-License-Identifier: Apache-2.0
#include "troprelu/dbm.hpp"

#include <algorithm>
#include <cmath>

namespace troprelu {

namespace {

// Tolerance for declaring a negative cycle; rounding must not make a point zone empty.
double empty_tolerance(const std::vector<double>& m) {
    double scale = 0;
    for (double v : m) {
        if (std::isfinite(v)) {
            scale = std::max(scale, std::abs(v));
        }
    }
    return 1e-9 * (1 + scale);
}

void floyd_warshall(std::vector<double>& m, std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
        const double* row_k = &m[k * n];
        for (std::size_t i = 0; i < n; ++i) {
            const double ik = m[i * n + k];
            if (ik == kInf) {
                continue;
            }
            double* row_i = &m[i * n];
            for (std::size_t j = 0; j < n; ++j) {
                const double cand = ik + row_k[j];
                if (cand < row_i[j]) {
                    row_i[j] = cand;
                }
            }
        }
    }
}

} // namespace

Dbm Dbm::top(std::size_t dim) {
    Dbm d;
    d.dim_ = dim;
    d.m_.assign((dim + 1) * (dim + 1), kInf);
    for (std::size_t i = 0; i <= dim; ++i) {
        d(i, i) = 0;
    }
    return d;
}

Dbm Dbm::from_rows(const std::vector<std::vector<double>>& rows) {
    require(!rows.empty(), ErrorCode::empty_input, "DBM needs at least the constant slot");
    Dbm d = top(rows.size() - 1);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        require(rows[i].size() == rows.size(), ErrorCode::dimension_mismatch, "DBM must be square");
        for (std::size_t j = 0; j < rows.size(); ++j) {
            d(i, j) = rows[i][j];
        }
    }
    return d;
}

Dbm Dbm::from_box(const Box& box) {
    Dbm d = top(box.size());
    for (std::size_t k = 0; k < box.size(); ++k) {
        d(k + 1, 0) = box[k].hi;
        d(0, k + 1) = -box[k].lo;
    }
    return d;
}

void Dbm::tighten(std::size_t i, std::size_t j, double c) {
    double& e = (*this)(i, j);
    e = std::min(e, c);
}

std::vector<std::vector<double>> Dbm::to_rows() const {
    std::vector<std::vector<double>> rows(slots(), std::vector<double>(slots()));
    for (std::size_t i = 0; i < slots(); ++i) {
        for (std::size_t j = 0; j < slots(); ++j) {
            rows[i][j] = (*this)(i, j);
        }
    }
    return rows;
}

std::optional<Dbm> dbm_close(Dbm d) {
    const std::size_t n = d.slots();
    std::vector<double> m(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            m[i * n + j] = d(i, j);
        }
    }
    const double tol = empty_tolerance(m);
    floyd_warshall(m, n);
    for (std::size_t i = 0; i < n; ++i) {
        if (m[i * n + i] < -tol) {
            return std::nullopt;
        }
        m[i * n + i] = 0;
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            d(i, j) = m[i * n + j];
        }
    }
    return d;
}

bool dbm_is_closed(const Dbm& d, double eps) {
    const std::size_t n = d.slots();
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(d(i, i)) > eps) {
            return false;
        }
    }
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            if (d(i, k) == kInf) {
                continue;
            }
            for (std::size_t j = 0; j < n; ++j) {
                const double via = d(i, k) + d(k, j);
                if (d(i, j) > via + eps * (1 + std::abs(via))) {
                    return false;
                }
            }
        }
    }
    return true;
}

std::optional<Dbm> dbm_intersect(const Dbm& a, const Dbm& b) {
    require(a.dim() == b.dim(), ErrorCode::dimension_mismatch, "dbm_intersect: dimensions differ");
    Dbm r = a;
    for (std::size_t i = 0; i < a.slots(); ++i) {
        for (std::size_t j = 0; j < a.slots(); ++j) {
            r.tighten(i, j, b(i, j));
        }
    }
    return dbm_close(std::move(r));
}

Dbm dbm_join(const Dbm& a, const Dbm& b) {
    require(a.dim() == b.dim(), ErrorCode::dimension_mismatch, "dbm_join: dimensions differ");
    Dbm r = a;
    for (std::size_t i = 0; i < a.slots(); ++i) {
        for (std::size_t j = 0; j < a.slots(); ++j) {
            r(i, j) = std::max(a(i, j), b(i, j));
        }
    }
    return r;
}

Box dbm_box(const Dbm& d) {
    Box box;
    box.dims.reserve(d.dim());
    for (std::size_t k = 0; k < d.dim(); ++k) {
        const double lo = d.lower(k);
        const double hi = d.upper(k);
        require(std::isfinite(lo) && std::isfinite(hi), ErrorCode::unbounded_variable,
                "dbm_box: variable " + std::to_string(k + 1) + " is unbounded");
        box.dims.push_back({lo, hi});
    }
    return box;
}

bool dbm_contains(const Dbm& d, std::span<const double> p, double eps) {
    require(p.size() == d.dim(), ErrorCode::dimension_mismatch, "dbm_contains: point dimension");
    auto value = [&](std::size_t slot) { return slot == 0 ? 0.0 : p[slot - 1]; };
    for (std::size_t i = 0; i < d.slots(); ++i) {
        for (std::size_t j = 0; j < d.slots(); ++j) {
            if (value(i) - value(j) > d(i, j) + eps) {
                return false;
            }
        }
    }
    return true;
}

Dbm best_zone_of_points(std::span<const Point> points) {
    require(!points.empty(), ErrorCode::empty_input, "best_zone_of_points: no points");
    const std::size_t n = points.front().size();
    Dbm d = Dbm::top(n);
    for (std::size_t i = 0; i < d.slots(); ++i) {
        for (std::size_t j = 0; j < d.slots(); ++j) {
            if (i != j) {
                d(i, j) = -kInf;
            }
        }
    }
    for (const Point& p : points) {
        require(p.size() == n, ErrorCode::dimension_mismatch, "best_zone_of_points: ragged points");
        for (std::size_t i = 0; i <= n; ++i) {
            const double pi = i == 0 ? 0.0 : p[i - 1];
            for (std::size_t j = 0; j <= n; ++j) {
                if (i != j) {
                    const double pj = j == 0 ? 0.0 : p[j - 1];
                    d(i, j) = std::max(d(i, j), pi - pj);
                }
            }
        }
    }
    return d;
}

Dbm dbm_embed(const Dbm& d, std::size_t new_dim, std::span<const std::size_t> slot_of) {
    require(slot_of.size() == d.dim(), ErrorCode::dimension_mismatch, "dbm_embed: mapping size");
    Dbm r = Dbm::top(new_dim);
    auto slot = [&](std::size_t s) {
        if (s == 0) {
            return std::size_t{0};
        }
        require(slot_of[s - 1] < new_dim, ErrorCode::bad_index, "dbm_embed: target out of range");
        return slot_of[s - 1] + 1;
    };
    for (std::size_t i = 0; i < d.slots(); ++i) {
        for (std::size_t j = 0; j < d.slots(); ++j) {
            r.tighten(slot(i), slot(j), d(i, j));
        }
    }
    return r;
}

Dbm dbm_project(const Dbm& d, std::span<const std::size_t> keep) {
    Dbm r = Dbm::top(keep.size());
    auto slot = [&](std::size_t s) {
        if (s == 0) {
            return std::size_t{0};
        }
        require(keep[s - 1] < d.dim(), ErrorCode::bad_index, "dbm_project: index out of range");
        return keep[s - 1] + 1;
    };
    for (std::size_t i = 0; i < r.slots(); ++i) {
        for (std::size_t j = 0; j < r.slots(); ++j) {
            r(i, j) = i == j ? 0.0 : d(slot(i), slot(j));
        }
    }
    return r;
}

Dbm dbm_box_only(const Dbm& d) {
    Dbm r = Dbm::top(d.dim());
    for (std::size_t k = 1; k < d.slots(); ++k) {
        r(k, 0) = d(k, 0);
        r(0, k) = d(0, k);
    }
    return r;
}

OctDbm OctDbm::top(std::size_t n) {
    OctDbm o;
    o.n_ = n;
    o.m_.assign(4 * n * n, kInf);
    for (std::size_t p = 0; p < 2 * n; ++p) {
        o(p, p) = 0;
    }
    return o;
}

OctDbm OctDbm::from_box(const Box& box) {
    OctDbm o = top(box.size());
    for (std::size_t k = 0; k < box.size(); ++k) {
        o.tighten_upper(k, box[k].hi);
        o.tighten_lower(k, box[k].lo);
    }
    return o;
}

OctDbm OctDbm::from_zone(const Dbm& d) {
    OctDbm o = top(d.dim());
    for (std::size_t a = 0; a < d.dim(); ++a) {
        o.tighten_upper(a, d.upper(a));
        o.tighten_lower(a, d.lower(a));
        for (std::size_t b = 0; b < d.dim(); ++b) {
            if (a != b) {
                o.tighten(o.pos(a), o.pos(b), d(a + 1, b + 1));
            }
        }
    }
    return o;
}

void OctDbm::tighten(std::size_t p, std::size_t q, double c) {
    double& e = (*this)(p, q);
    e = std::min(e, c);
    double& mirror = (*this)(bar(q), bar(p));
    mirror = std::min(mirror, c);
}

std::optional<OctDbm> oct_close(OctDbm o) {
    const std::size_t n2 = 2 * o.dim();
    std::vector<double> m(n2 * n2);
    for (std::size_t p = 0; p < n2; ++p) {
        for (std::size_t q = 0; q < n2; ++q) {
            m[p * n2 + q] = o(p, q);
        }
    }
    const double tol = empty_tolerance(m);
    floyd_warshall(m, n2);
    for (std::size_t p = 0; p < n2; ++p) {
        if (m[p * n2 + p] < -tol) {
            return std::nullopt;
        }
    }
    for (std::size_t p = 0; p < n2; ++p) {
        for (std::size_t q = 0; q < n2; ++q) {
            const double unary = (m[p * n2 + o.bar(p)] + m[o.bar(q) * n2 + q]) / 2;
            if (unary < m[p * n2 + q]) {
                m[p * n2 + q] = unary;
            }
        }
    }
    for (std::size_t p = 0; p < n2; ++p) {
        if (m[p * n2 + p] < -tol) {
            return std::nullopt;
        }
        m[p * n2 + p] = 0;
    }
    for (std::size_t p = 0; p < n2; ++p) {
        for (std::size_t q = 0; q < n2; ++q) {
            o(p, q) = std::min(m[p * n2 + q], m[o.bar(q) * n2 + o.bar(p)]);
        }
    }
    return o;
}

std::optional<OctDbm> oct_intersect(const OctDbm& a, const OctDbm& b) {
    require(a.dim() == b.dim(), ErrorCode::dimension_mismatch, "oct_intersect: dimensions differ");
    OctDbm r = a;
    for (std::size_t p = 0; p < 2 * a.dim(); ++p) {
        for (std::size_t q = 0; q < 2 * a.dim(); ++q) {
            r(p, q) = std::min(a(p, q), b(p, q));
        }
    }
    return oct_close(std::move(r));
}

OctDbm oct_join(const OctDbm& a, const OctDbm& b) {
    require(a.dim() == b.dim(), ErrorCode::dimension_mismatch, "oct_join: dimensions differ");
    OctDbm r = a;
    for (std::size_t p = 0; p < 2 * a.dim(); ++p) {
        for (std::size_t q = 0; q < 2 * a.dim(); ++q) {
            r(p, q) = std::max(a(p, q), b(p, q));
        }
    }
    return r;
}

OctDbm oct_embed(const OctDbm& o, std::size_t new_dim, std::span<const std::size_t> slot_of) {
    require(slot_of.size() == o.dim(), ErrorCode::dimension_mismatch, "oct_embed: mapping size");
    OctDbm r = OctDbm::top(new_dim);
    auto signed_slot = [&](std::size_t p) {
        const std::size_t var = p < o.dim() ? p : p - o.dim();
        require(slot_of[var] < new_dim, ErrorCode::bad_index, "oct_embed: target out of range");
        return p < o.dim() ? r.pos(slot_of[var]) : r.neg(slot_of[var]);
    };
    for (std::size_t p = 0; p < 2 * o.dim(); ++p) {
        for (std::size_t q = 0; q < 2 * o.dim(); ++q) {
            double& e = r(signed_slot(p), signed_slot(q));
            e = std::min(e, o(p, q));
        }
    }
    return r;
}

OctDbm oct_project(const OctDbm& o, std::span<const std::size_t> keep) {
    OctDbm r = OctDbm::top(keep.size());
    auto signed_slot = [&](std::size_t p) {
        const std::size_t var = p < r.dim() ? p : p - r.dim();
        require(keep[var] < o.dim(), ErrorCode::bad_index, "oct_project: index out of range");
        return p < r.dim() ? o.pos(keep[var]) : o.neg(keep[var]);
    };
    for (std::size_t p = 0; p < 2 * r.dim(); ++p) {
        for (std::size_t q = 0; q < 2 * r.dim(); ++q) {
            r(p, q) = p == q ? 0.0 : o(signed_slot(p), signed_slot(q));
        }
    }
    return r;
}

OctDbm oct_box_only(const OctDbm& o) {
    OctDbm r = OctDbm::top(o.dim());
    for (std::size_t k = 0; k < o.dim(); ++k) {
        r(r.pos(k), r.neg(k)) = o(o.pos(k), o.neg(k));
        r(r.neg(k), r.pos(k)) = o(o.neg(k), o.pos(k));
    }
    return r;
}

Box oct_box(const OctDbm& o) {
    Box box;
    for (std::size_t k = 0; k < o.dim(); ++k) {
        require(std::isfinite(o.lower(k)) && std::isfinite(o.upper(k)), ErrorCode::unbounded_variable,
                "oct_box: variable " + std::to_string(k + 1) + " is unbounded");
        box.dims.push_back({o.lower(k), o.upper(k)});
    }
    return box;
}

bool oct_contains(const OctDbm& o, std::span<const double> p, double eps) {
    require(p.size() == o.dim(), ErrorCode::dimension_mismatch, "oct_contains: point dimension");
    auto value = [&](std::size_t s) { return s < o.dim() ? p[s] : -p[s - o.dim()]; };
    for (std::size_t a = 0; a < 2 * o.dim(); ++a) {
        for (std::size_t b = 0; b < 2 * o.dim(); ++b) {
            if (value(a) - value(b) > o(a, b) + eps) {
                return false;
            }
        }
    }
    return true;
}

Dbm oct_zone_part(const OctDbm& o) {
    Dbm d = Dbm::top(o.dim());
    for (std::size_t a = 0; a < o.dim(); ++a) {
        d(a + 1, 0) = o.upper(a);
        d(0, a + 1) = -o.lower(a);
        for (std::size_t b = 0; b < o.dim(); ++b) {
            if (a != b) {
                d(a + 1, b + 1) = o(o.pos(a), o.pos(b));
            }
        }
    }
    return d;
}

Dbm oct_doubled_zone(const OctDbm& o) {
    const std::size_t n2 = 2 * o.dim();
    Dbm d = Dbm::top(n2);
    for (std::size_t p = 0; p < n2; ++p) {
        d(p + 1, 0) = o(p, o.bar(p)) / 2;
        d(0, p + 1) = o(o.bar(p), p) / 2;
        for (std::size_t q = 0; q < n2; ++q) {
            if (p != q) {
                d(p + 1, q + 1) = o(p, q);
            }
        }
    }
    return d;
}

} // namespace troprelu
