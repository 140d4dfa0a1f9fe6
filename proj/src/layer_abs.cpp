// Copyright (c) troprelu contributors.
// SPDX-License-Identifier: Apache-2.0
#include "troprelu/layer_abs.hpp"

#include <cmath>

namespace troprelu {

void AffineLayer::validate() const {
    require(bias.size() == outputs(), ErrorCode::dimension_mismatch, "layer bias size differs from output count");
    require(input_box.size() == inputs(), ErrorCode::dimension_mismatch, "layer box size differs from input count");
    for (const Interval& iv : input_box.dims) {
        require(std::isfinite(iv.lo) && std::isfinite(iv.hi) && iv.lo <= iv.hi, ErrorCode::invalid_argument,
                "layer box must be finite and non-empty");
    }
}

namespace {

// Extremes of sum_j s_j x_j over the box.
double linear_max(const Box& box, auto&& coeff) {
    double acc = 0;
    for (std::size_t j = 0; j < box.size(); ++j) {
        const double s = coeff(j);
        acc += s > 0 ? s * box[j].hi : (s < 0 ? s * box[j].lo : 0.0);
    }
    return acc;
}

double linear_min(const Box& box, auto&& coeff) {
    double acc = 0;
    for (std::size_t j = 0; j < box.size(); ++j) {
        const double s = coeff(j);
        acc += s > 0 ? s * box[j].lo : (s < 0 ? s * box[j].hi : 0.0);
    }
    return acc;
}

double delta_of(double w, const Interval& iv) {
    if (w <= 0) {
        return 0;
    }
    if (w <= 1) {
        return w * iv.width();
    }
    return iv.width();
}

double gamma_of(double w, const Interval& iv) {
    if (w >= 0) {
        return 0;
    }
    if (w >= -1) {
        return -w * iv.width();
    }
    return iv.width();
}

} // namespace

ZoneAbsConstants zone_constants(const AffineLayer& layer) {
    layer.validate();
    const std::size_t m = layer.inputs();
    const std::size_t n = layer.outputs();
    const Matrix& w = layer.weights;
    ZoneAbsConstants k;
    k.input_box = layer.input_box;
    k.y_lo.resize(n);
    k.y_hi.resize(n);
    k.diff = Matrix(n, n);
    k.delta = Matrix(n, m);
    k.d = Matrix(n, n);
    k.c = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        k.y_lo[i] = linear_min(layer.input_box, [&](std::size_t j) { return w(i, j); }) + layer.bias[i];
        k.y_hi[i] = linear_max(layer.input_box, [&](std::size_t j) { return w(i, j); }) + layer.bias[i];
        for (std::size_t j = 0; j < m; ++j) {
            k.delta(i, j) = delta_of(w(i, j), layer.input_box[j]);
        }
    }
    for (std::size_t i1 = 0; i1 < n; ++i1) {
        for (std::size_t i2 = 0; i2 < n; ++i2) {
            if (i1 != i2) {
                k.diff(i1, i2) = linear_max(layer.input_box, [&](std::size_t j) { return w(i1, j) - w(i2, j); }) +
                                 (layer.bias[i1] - layer.bias[i2]);
            }
            k.d(i1, i2) = k.diff(i1, i2) + k.y_lo[i2];
            k.c(i1, i2) = k.y_hi[i1] - k.diff(i1, i2);
        }
    }
    return k;
}

Dbm zone_dbm(const ZoneAbsConstants& k) {
    const std::size_t m = k.inputs();
    const std::size_t n = k.outputs();
    Dbm d = Dbm::top(m + n);
    auto x = [](std::size_t j) { return j + 1; };
    auto y = [m](std::size_t i) { return m + i + 1; };
    for (std::size_t j = 0; j < m; ++j) {
        d(x(j), 0) = k.input_box[j].hi;
        d(0, x(j)) = -k.input_box[j].lo;
    }
    for (std::size_t i = 0; i < n; ++i) {
        d(y(i), 0) = k.y_hi[i];
        d(0, y(i)) = -k.y_lo[i];
        for (std::size_t j = 0; j < m; ++j) {
            d(y(i), x(j)) = k.y_hi[i] - k.input_box[j].lo - k.delta(i, j);
            d(x(j), y(i)) = -(k.y_lo[i] - k.input_box[j].hi + k.delta(i, j));
        }
        for (std::size_t i2 = 0; i2 < n; ++i2) {
            if (i2 != i) {
                d(y(i), y(i2)) = k.diff(i, i2);
            }
        }
    }
    auto closed = dbm_close(std::move(d));
    require(closed.has_value(), ErrorCode::internal, "zone_dbm: layer zone is empty");
    return *closed;
}

TropExternal zone_external(const ZoneAbsConstants& k) {
    const std::size_t m = k.inputs();
    const std::size_t n = k.outputs();
    TropExternal ext(m + n);
    auto x = [](std::size_t j) { return j + 1; };
    auto y = [m](std::size_t i) { return m + i + 1; };

    // max(x_j - xhi_j, y_i - M_i) <= 0
    TropRow upper = TropRow::empty(m + n);
    upper.rhs[0] = MaxPlus::one();
    for (std::size_t j = 0; j < m; ++j) {
        upper.lhs[x(j)] = MaxPlus(-k.input_box[j].hi);
    }
    for (std::size_t i = 0; i < n; ++i) {
        upper.lhs[y(i)] = MaxPlus(-k.y_hi[i]);
    }
    ext.add(std::move(upper));

    // max(0, y_i - M_i + delta_ij) <= x_j - xlo_j
    for (std::size_t j = 0; j < m; ++j) {
        TropRow row = TropRow::empty(m + n);
        row.lhs[0] = MaxPlus::one();
        for (std::size_t i = 0; i < n; ++i) {
            row.lhs[y(i)] = MaxPlus(-k.y_hi[i] + k.delta(i, j));
        }
        row.rhs[x(j)] = MaxPlus(-k.input_box[j].lo);
        ext.add(std::move(row));
    }

    // max(0, x_j - xhi_j + delta_ij, y_k - d_ki) <= y_i - m_i
    for (std::size_t i = 0; i < n; ++i) {
        TropRow row = TropRow::empty(m + n);
        row.lhs[0] = MaxPlus::one();
        for (std::size_t j = 0; j < m; ++j) {
            row.lhs[x(j)] = MaxPlus(-k.input_box[j].hi + k.delta(i, j));
        }
        for (std::size_t i2 = 0; i2 < n; ++i2) {
            row.lhs[y(i2)] = MaxPlus(-k.d(i2, i));
        }
        row.rhs[y(i)] = MaxPlus(-k.y_lo[i]);
        ext.add(std::move(row));
    }
    return ext;
}

TropInternal zone_internal(const ZoneAbsConstants& k, double eps) {
    const std::size_t m = k.inputs();
    const std::size_t n = k.outputs();
    std::vector<Point> gens;
    gens.reserve(1 + m + n);
    Point a(m + n);
    for (std::size_t j = 0; j < m; ++j) {
        a[j] = k.input_box[j].lo;
    }
    for (std::size_t i = 0; i < n; ++i) {
        a[m + i] = k.y_lo[i];
    }
    gens.push_back(a);
    for (std::size_t j = 0; j < m; ++j) {
        Point b = a;
        b[j] = k.input_box[j].hi;
        for (std::size_t i = 0; i < n; ++i) {
            b[m + i] = k.y_lo[i] + k.delta(i, j);
        }
        gens.push_back(std::move(b));
    }
    for (std::size_t i = 0; i < n; ++i) {
        Point c(m + n);
        for (std::size_t j = 0; j < m; ++j) {
            c[j] = k.input_box[j].lo + k.delta(i, j);
        }
        for (std::size_t i2 = 0; i2 < n; ++i2) {
            c[m + i2] = i2 == i ? k.y_hi[i] : k.c(i, i2);
        }
        gens.push_back(std::move(c));
    }
    return extreme_filter(TropInternal(m + n, std::move(gens)), eps);
}

OctAbsConstants oct_constants(const AffineLayer& layer) {
    OctAbsConstants k;
    k.zone = zone_constants(layer);
    const std::size_t m = layer.inputs();
    const std::size_t n = layer.outputs();
    const Matrix& w = layer.weights;
    k.sum_hi = Matrix(n, n);
    k.sum_lo = Matrix(n, n);
    k.gamma = Matrix(n, m);
    for (std::size_t i1 = 0; i1 < n; ++i1) {
        for (std::size_t i2 = 0; i2 < n; ++i2) {
            auto s = [&](std::size_t j) { return w(i1, j) + w(i2, j); };
            const double b = layer.bias[i1] + layer.bias[i2];
            k.sum_hi(i1, i2) = linear_max(layer.input_box, s) + b;
            k.sum_lo(i1, i2) = linear_min(layer.input_box, s) + b;
        }
        for (std::size_t j = 0; j < m; ++j) {
            k.gamma(i1, j) = gamma_of(w(i1, j), layer.input_box[j]);
        }
    }
    return k;
}

OctDbm oct_dbm(const OctAbsConstants& k) {
    const ZoneAbsConstants& z = k.zone;
    const std::size_t m = z.inputs();
    const std::size_t n = z.outputs();
    OctDbm o = OctDbm::top(m + n);
    auto y = [m](std::size_t i) { return m + i; };
    for (std::size_t j = 0; j < m; ++j) {
        o.tighten_upper(j, z.input_box[j].hi);
        o.tighten_lower(j, z.input_box[j].lo);
    }
    for (std::size_t i = 0; i < n; ++i) {
        o.tighten_upper(y(i), z.y_hi[i]);
        o.tighten_lower(y(i), z.y_lo[i]);
        for (std::size_t j = 0; j < m; ++j) {
            const Interval& xj = z.input_box[j];
            o.tighten(o.pos(y(i)), o.pos(j), z.y_hi[i] - xj.lo - z.delta(i, j));
            o.tighten(o.pos(j), o.pos(y(i)), -(z.y_lo[i] - xj.hi + z.delta(i, j)));
            o.tighten(o.pos(y(i)), o.neg(j), z.y_hi[i] + xj.hi - k.gamma(i, j));
            o.tighten(o.neg(y(i)), o.pos(j), -(z.y_lo[i] + xj.lo + k.gamma(i, j)));
        }
        for (std::size_t i2 = 0; i2 < n; ++i2) {
            if (i2 != i) {
                o.tighten(o.pos(y(i)), o.pos(y(i2)), z.diff(i, i2));
                o.tighten(o.pos(y(i)), o.neg(y(i2)), k.sum_hi(i, i2));
                o.tighten(o.neg(y(i)), o.pos(y(i2)), -k.sum_lo(i, i2));
            }
        }
    }
    auto closed = oct_close(std::move(o));
    require(closed.has_value(), ErrorCode::internal, "oct_dbm: layer octagon is empty");
    return *closed;
}

TropInternal oct_internal(const OctAbsConstants& k, double eps) {
    auto doubled = dbm_close(oct_doubled_zone(oct_dbm(k)));
    require(doubled.has_value(), ErrorCode::internal, "oct_internal: doubled zone is empty");
    return zone_to_internal(*doubled, eps);
}

std::vector<Point> oct_internal_formula(const OctAbsConstants& k) {
    const ZoneAbsConstants& z = k.zone;
    const std::size_t m = z.inputs();
    const std::size_t n = z.outputs();
    const std::size_t dim = 2 * (m + n);
    auto xp = [](std::size_t j) { return j; };
    auto yp = [m](std::size_t i) { return m + i; };
    auto xn = [m, n](std::size_t j) { return m + n + j; };
    auto yn = [m, n](std::size_t i) { return 2 * m + n + i; };
    const Box& box = z.input_box;
    std::vector<Point> pts;

    Point a(dim);
    for (std::size_t j = 0; j < m; ++j) {
        a[xp(j)] = box[j].lo;
        a[xn(j)] = -box[j].hi;
    }
    for (std::size_t i = 0; i < n; ++i) {
        a[yp(i)] = z.y_lo[i];
        a[yn(i)] = -z.y_hi[i];
    }
    pts.push_back(a);

    for (std::size_t kk = 0; kk < m; ++kk) {
        Point b(dim);
        for (std::size_t j = 0; j < m; ++j) {
            b[xp(j)] = j == kk ? box[j].hi : box[j].lo;
            b[xn(j)] = -box[j].hi;
        }
        for (std::size_t i = 0; i < n; ++i) {
            b[yp(i)] = z.y_lo[i] + z.delta(i, kk);
            b[yn(i)] = -z.y_hi[i] + k.gamma(i, kk);
        }
        pts.push_back(std::move(b));
    }
    for (std::size_t kk = 0; kk < m; ++kk) {
        Point b(dim);
        for (std::size_t j = 0; j < m; ++j) {
            b[xn(j)] = j == kk ? -box[j].lo : -box[j].hi;
            b[xp(j)] = box[j].lo;
        }
        for (std::size_t i = 0; i < n; ++i) {
            b[yn(i)] = -z.y_hi[i] + z.delta(i, kk);
            b[yp(i)] = z.y_lo[i] + k.gamma(i, kk);
        }
        pts.push_back(std::move(b));
    }
    for (std::size_t l = 0; l < n; ++l) {
        Point c(dim);
        for (std::size_t i = 0; i < n; ++i) {
            c[yp(i)] = i == l ? z.y_hi[l] : z.y_hi[l] - z.diff(l, i);
            c[yn(i)] = i == l ? -z.y_hi[l] : z.y_hi[l] - k.sum_hi(l, i);
        }
        for (std::size_t j = 0; j < m; ++j) {
            c[xp(j)] = box[j].lo + z.delta(l, j);
            c[xn(j)] = -box[j].hi + k.gamma(l, j);
        }
        pts.push_back(std::move(c));
    }
    for (std::size_t l = 0; l < n; ++l) {
        Point c(dim);
        for (std::size_t i = 0; i < n; ++i) {
            c[yn(i)] = i == l ? -z.y_lo[l] : -z.y_lo[l] - z.diff(i, l);
            c[yp(i)] = i == l ? z.y_lo[l] : -z.y_lo[l] + k.sum_lo(l, i);
        }
        for (std::size_t j = 0; j < m; ++j) {
            c[xn(j)] = -box[j].hi + z.delta(l, j);
            c[xp(j)] = box[j].lo + k.gamma(l, j);
        }
        pts.push_back(std::move(c));
    }
    return pts;
}

} // namespace troprelu
