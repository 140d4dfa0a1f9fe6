// Copyright (c) troprelu contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Independent reference computations for tests. Nothing here calls into the library's
// algorithms; only the plain data types are shared.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "troprelu/common.hpp"
#include "troprelu/network.hpp"

namespace oracle {

using troprelu::Box;
using troprelu::Interval;
using troprelu::Point;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// a . x <= b
struct Halfspace {
    std::vector<double> a;
    double b;
};

// Solves the square system by Gaussian elimination with partial pivoting.
inline std::optional<std::vector<double>> solve_square(std::vector<std::vector<double>> m, std::vector<double> r) {
    const std::size_t n = r.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t row = col + 1; row < n; ++row) {
            if (std::abs(m[row][col]) > std::abs(m[piv][col])) {
                piv = row;
            }
        }
        if (std::abs(m[piv][col]) < 1e-10) {
            return std::nullopt;
        }
        std::swap(m[piv], m[col]);
        std::swap(r[piv], r[col]);
        for (std::size_t row = 0; row < n; ++row) {
            if (row == col) {
                continue;
            }
            const double f = m[row][col] / m[col][col];
            for (std::size_t k = col; k < n; ++k) {
                m[row][k] -= f * m[col][k];
            }
            r[row] -= f * r[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = r[i] / m[i][i];
    }
    return x;
}

// Vertices of a bounded polytope, by trying every n-subset of tight constraints.
inline std::vector<Point> polytope_vertices(const std::vector<Halfspace>& hs, std::size_t n, double tol = 1e-7) {
    std::vector<Point> out;
    std::vector<std::size_t> pick(n);
    const std::size_t k = hs.size();
    if (k < n) {
        return out;
    }
    std::vector<bool> mask(k, false);
    std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(n), true);
    do {
        std::vector<std::vector<double>> m;
        std::vector<double> r;
        for (std::size_t i = 0; i < k; ++i) {
            if (mask[i]) {
                m.push_back(hs[i].a);
                r.push_back(hs[i].b);
            }
        }
        auto x = solve_square(m, r);
        if (!x) {
            continue;
        }
        bool ok = true;
        for (const Halfspace& h : hs) {
            double s = 0;
            for (std::size_t j = 0; j < n; ++j) {
                s += h.a[j] * (*x)[j];
            }
            ok = ok && s <= h.b + tol * (1 + std::abs(h.b));
        }
        if (ok) {
            out.push_back(*x);
        }
    } while (std::prev_permutation(mask.begin(), mask.end()));
    return out;
}

// Minimum of c . x over a bounded polytope; +inf when empty.
inline double lp_min_by_vertices(const std::vector<Halfspace>& hs, const std::vector<double>& c) {
    double best = kInf;
    for (const Point& v : polytope_vertices(hs, c.size())) {
        double s = 0;
        for (std::size_t j = 0; j < c.size(); ++j) {
            s += c[j] * v[j];
        }
        best = std::min(best, s);
    }
    return best;
}

// Halfspaces of a DBM given as raw entries; row/col 0 is the constant.
template <class Dbm>
std::vector<Halfspace> dbm_halfspaces(const Dbm& d) {
    const std::size_t n = d.dim();
    std::vector<Halfspace> hs;
    for (std::size_t i = 0; i <= n; ++i) {
        for (std::size_t j = 0; j <= n; ++j) {
            if (i == j || !std::isfinite(d(i, j))) {
                continue;
            }
            Halfspace h{std::vector<double>(n, 0.0), d(i, j)};
            if (i > 0) {
                h.a[i - 1] += 1;
            }
            if (j > 0) {
                h.a[j - 1] -= 1;
            }
            hs.push_back(std::move(h));
        }
    }
    return hs;
}

inline bool dbm_satisfied(const std::vector<std::vector<double>>& rows, const Point& p, double tol) {
    const std::size_t n = p.size();
    for (std::size_t i = 0; i <= n; ++i) {
        for (std::size_t j = 0; j <= n; ++j) {
            const double vi = i == 0 ? 0 : p[i - 1];
            const double vj = j == 0 ? 0 : p[j - 1];
            if (vi - vj > rows[i][j] + tol) {
                return false;
            }
        }
    }
    return true;
}

// Every vertex of a box, as points.
inline std::vector<Point> box_vertices(const Box& box) {
    const std::size_t m = box.size();
    std::vector<Point> out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
        Point p(m);
        for (std::size_t j = 0; j < m; ++j) {
            p[j] = (mask >> j) & 1 ? box[j].hi : box[j].lo;
        }
        out.push_back(std::move(p));
    }
    return out;
}

inline Point affine(const troprelu::Matrix& w, const std::vector<double>& b, const Point& x) {
    Point y(w.rows());
    for (std::size_t i = 0; i < w.rows(); ++i) {
        double s = b[i];
        for (std::size_t j = 0; j < w.cols(); ++j) {
            s += w(i, j) * x[j];
        }
        y[i] = s;
    }
    return y;
}

// max over points of (v_a - v_b) with v = (x, y), slot 0 = constant.
inline double max_diff(const std::vector<Point>& pts, std::size_t a, std::size_t b) {
    double best = -kInf;
    for (const Point& v : pts) {
        const double va = a == 0 ? 0 : v[a - 1];
        const double vb = b == 0 ? 0 : v[b - 1];
        best = std::max(best, va - vb);
    }
    return best;
}

inline Point uniform_in(const Box& box, std::mt19937_64& rng) {
    Point p(box.size());
    for (std::size_t j = 0; j < box.size(); ++j) {
        std::uniform_real_distribution<double> u(box[j].lo, box[j].hi);
        p[j] = u(rng);
    }
    return p;
}

// Random tropical affine combination of the generators: a point of their hull.
inline Point tropical_combination(const std::vector<Point>& gens, std::mt19937_64& rng, double spread = 4) {
    std::uniform_real_distribution<double> u(-spread, 0);
    std::uniform_int_distribution<std::size_t> pick(0, gens.size() - 1);
    std::vector<double> lam(gens.size());
    for (double& l : lam) {
        l = u(rng);
    }
    lam[pick(rng)] = 0;
    Point p(gens.front().size(), -kInf);
    for (std::size_t k = 0; k < gens.size(); ++k) {
        for (std::size_t i = 0; i < p.size(); ++i) {
            p[i] = std::max(p[i], lam[k] + gens[k][i]);
        }
    }
    return p;
}

// Brute-force hull membership: searches a lambda grid for a combination hitting p.
inline bool hull_contains_grid(const std::vector<Point>& gens, const Point& p, double step, double lo, double tol) {
    const std::size_t g = gens.size();
    const std::size_t steps = static_cast<std::size_t>(std::round(-lo / step)) + 1;
    std::vector<std::size_t> idx(g, 0);
    while (true) {
        double top = -kInf;
        std::vector<double> lam(g);
        for (std::size_t k = 0; k < g; ++k) {
            lam[k] = -static_cast<double>(idx[k]) * step;
            top = std::max(top, lam[k]);
        }
        if (top == 0) {
            bool hit = true;
            for (std::size_t i = 0; i < p.size() && hit; ++i) {
                double v = -kInf;
                for (std::size_t k = 0; k < g; ++k) {
                    v = std::max(v, lam[k] + gens[k][i]);
                }
                hit = std::abs(v - p[i]) <= tol;
            }
            if (hit) {
                return true;
            }
        }
        std::size_t k = 0;
        while (k < g && ++idx[k] == steps) {
            idx[k] = 0;
            ++k;
        }
        if (k == g) {
            return false;
        }
    }
}

inline troprelu::Matrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng, double range = 2) {
    std::uniform_real_distribution<double> u(-range, range);
    troprelu::Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            m(i, j) = u(rng);
        }
    }
    return m;
}

inline std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng, double range = 1) {
    std::uniform_real_distribution<double> u(-range, range);
    std::vector<double> v(n);
    for (double& x : v) {
        x = u(rng);
    }
    return v;
}

inline Box random_box(std::size_t m, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> c(-1, 1);
    std::uniform_real_distribution<double> w(0.1, 2);
    Box b;
    for (std::size_t j = 0; j < m; ++j) {
        const double lo = c(rng);
        b.dims.push_back({lo, lo + w(rng)});
    }
    return b;
}

// sizes = {inputs, hidden..., outputs}; ReLU on hidden layers, optional on the output.
inline troprelu::Network random_network(const std::vector<std::size_t>& sizes, std::mt19937_64& rng,
                                        bool output_relu) {
    std::vector<troprelu::DenseLayer> layers;
    for (std::size_t l = 1; l < sizes.size(); ++l) {
        troprelu::DenseLayer d;
        d.weights = random_matrix(sizes[l], sizes[l - 1], rng);
        d.bias = random_vector(sizes[l], rng);
        d.relu = l + 1 < sizes.size() || output_relu;
        layers.push_back(std::move(d));
    }
    return troprelu::Network(sizes.front(), std::move(layers));
}

// Plain forward pass, written out independently of Network::trace.
struct Trace {
    std::vector<Point> pre;
    std::vector<Point> post;
};

inline Trace forward(const troprelu::Network& net, const Point& x) {
    Trace t;
    t.pre.push_back(x);
    t.post.push_back(x);
    for (const auto& layer : net.layers()) {
        Point h = affine(layer.weights, layer.bias, t.post.back());
        Point y = h;
        if (layer.relu) {
            for (double& v : y) {
                v = std::max(0.0, v);
            }
        }
        t.pre.push_back(std::move(h));
        t.post.push_back(std::move(y));
    }
    return t;
}

} // namespace oracle
