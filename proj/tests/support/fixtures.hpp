// Copyright (c) troprelu contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "troprelu/layer_abs.hpp"
#include "troprelu/network.hpp"
#include "troprelu/tropical.hpp"

namespace fixture {

using namespace troprelu;

// h1 = x1 - x2 - 1, h2 = x1 + x2 + 1 over [-1,1]^2.
inline AffineLayer running_layer() {
    return {Matrix::from_rows({{1, -1}, {1, 1}}), {-1, 1}, Box::uniform(2, -1, 1)};
}

// 0.9 x1 + 1.1 x2, 1.1 x1 - 0.9 x2 over [-1,1]^2.
inline AffineLayer skew_layer() {
    return {Matrix::from_rows({{0.9, 1.1}, {1.1, -0.9}}), {0, 0}, Box::uniform(2, -1, 1)};
}

inline Network running_network(bool output_relu = true) {
    DenseLayer l{Matrix::from_rows({{1, -1}, {1, 1}}), {-1, 1}, output_relu};
    return Network(2, {l});
}

// Running network followed by u1 = -y1 + y2 - 1, u2 = y1 - y2 + 1.
inline Network running2_network() {
    DenseLayer l1{Matrix::from_rows({{1, -1}, {1, 1}}), {-1, 1}, true};
    DenseLayer l2{Matrix::from_rows({{-1, 1}, {1, -1}}), {-1, 1}, true};
    return Network(2, {l1, l2});
}

// Two inputs, three hidden neurons, eight outputs with every sign pattern.
inline Network multi_network() {
    DenseLayer l1{Matrix::from_rows({{1, 1}, {1, -1}, {-1, -1}}), {0, 0, 0}, true};
    std::vector<std::vector<double>> w;
    for (double a : {1.0, -1.0}) {
        for (double b : {1.0, -1.0}) {
            for (double c : {1.0, -1.0}) {
                w.push_back({a, b, c});
            }
        }
    }
    DenseLayer l2{Matrix::from_rows(w), std::vector<double>(8, 0.0), true};
    return Network(2, {l1, l2});
}

// z = relu(W x) with W = [[1,1],[1,-1]].
inline Network krelu_network() {
    DenseLayer l{Matrix::from_rows({{1, 1}, {1, -1}}), {0, 0}, true};
    return Network(2, {l});
}

inline TropRow row(std::vector<double> lhs, std::vector<double> rhs) {
    TropRow r;
    for (double v : lhs) {
        r.lhs.push_back(std::isinf(v) ? MaxPlus::zero() : MaxPlus(v));
    }
    for (double v : rhs) {
        r.rhs.push_back(std::isinf(v) ? MaxPlus::zero() : MaxPlus(v));
    }
    return r;
}

inline bool rows_close(const TropRow& a, const TropRow& b, double tol = 1e-9) {
    auto same = [&](const std::vector<MaxPlus>& u, const std::vector<MaxPlus>& v) {
        if (u.size() != v.size()) {
            return false;
        }
        for (std::size_t k = 0; k < u.size(); ++k) {
            if (u[k].is_zero() != v[k].is_zero()) {
                return false;
            }
            if (!u[k].is_zero() && std::abs(u[k].value() - v[k].value()) > tol) {
                return false;
            }
        }
        return true;
    };
    return same(a.lhs, b.lhs) && same(a.rhs, b.rhs);
}

inline bool has_row(const TropExternal& ext, const TropRow& r) {
    return std::any_of(ext.rows().begin(), ext.rows().end(), [&](const TropRow& x) { return rows_close(x, r); });
}

inline bool close_points(const Point& a, const Point& b, double tol = 1e-9) {
    if (a.size() != b.size()) {
        return false;
    }
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (std::abs(a[k] - b[k]) > tol) {
            return false;
        }
    }
    return true;
}

inline bool has_point(const std::vector<Point>& pts, const Point& p, double tol = 1e-9) {
    return std::any_of(pts.begin(), pts.end(), [&](const Point& q) { return close_points(p, q, tol); });
}

// Equal as sets, up to tolerance.
inline bool same_points(const std::vector<Point>& a, const std::vector<Point>& b, double tol = 1e-9) {
    for (const Point& p : a) {
        if (!has_point(b, p, tol)) {
            return false;
        }
    }
    for (const Point& p : b) {
        if (!has_point(a, p, tol)) {
            return false;
        }
    }
    return true;
}

} // namespace fixture
