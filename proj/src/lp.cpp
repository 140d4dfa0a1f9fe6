// Copyright (c) troprelu contributors.
// SPDX-License-Identifier: Apache-2.0
#include "troprelu/lp.hpp"

#include <algorithm>
#include <cmath>

namespace troprelu {

namespace {

class Tableau {
  public:
    Tableau(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), t_((rows + 1) * (cols + 1), 0.0) {}

    double& at(std::size_t r, std::size_t c) { return t_[r * (cols_ + 1) + c]; }
    double& rhs(std::size_t r) { return at(r, cols_); }
    double& cost(std::size_t c) { return at(rows_, c); }
    double& objective() { return at(rows_, cols_); }
    [[nodiscard]] std::size_t rows() const { return rows_; }
    [[nodiscard]] std::size_t cols() const { return cols_; }

    void pivot(std::size_t pr, std::size_t pc) {
        const std::size_t w = cols_ + 1;
        double* prow = &t_[pr * w];
        const double inv = 1.0 / prow[pc];
        for (std::size_t c = 0; c < w; ++c) {
            prow[c] *= inv;
        }
        prow[pc] = 1.0;
        for (std::size_t r = 0; r <= rows_; ++r) {
            if (r == pr) {
                continue;
            }
            double* row = &t_[r * w];
            const double f = row[pc];
            if (f == 0.0) {
                continue;
            }
            for (std::size_t c = 0; c < w; ++c) {
                row[c] -= f * prow[c];
            }
            row[pc] = 0.0;
        }
    }

  private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> t_;
};

enum class Outcome { optimal, unbounded };

// Minimises the cost row with Bland's rule over columns [0, allowed).
Outcome run_simplex(Tableau& tab, std::vector<std::size_t>& basis, std::size_t allowed, double tol,
                    std::size_t& pivots) {
    while (true) {
        std::size_t enter = allowed;
        for (std::size_t c = 0; c < allowed; ++c) {
            if (tab.cost(c) < -tol) {
                enter = c;
                break;
            }
        }
        if (enter == allowed) {
            return Outcome::optimal;
        }
        double best = kInf;
        for (std::size_t r = 0; r < tab.rows(); ++r) {
            const double a = tab.at(r, enter);
            if (a > tol) {
                best = std::min(best, tab.rhs(r) / a);
            }
        }
        std::size_t leave = tab.rows();
        for (std::size_t r = 0; r < tab.rows(); ++r) {
            const double a = tab.at(r, enter);
            if (a > tol && tab.rhs(r) / a <= best + tol && (leave == tab.rows() || basis[r] < basis[leave])) {
                leave = r;
            }
        }
        if (leave == tab.rows()) {
            return Outcome::unbounded;
        }
        tab.pivot(leave, enter);
        basis[leave] = enter;
        ++pivots;
    }
}

} // namespace

LpResult lp_minimize(std::span<const double> objective, const std::vector<LinearConstraint>& rows, double eps) {
    const std::size_t n = objective.size();
    const std::size_t nr = rows.size();
    LpResult result;
    bool any = false;
    for (double c : objective) {
        any = any || c != 0.0;
    }

    // Dual: minimise rhs . y subject to A^T y = -objective, y >= 0.
    double scale = 1;
    for (const auto& r : rows) {
        require(std::isfinite(r.rhs), ErrorCode::invalid_argument, "lp_minimize: non-finite right-hand side");
        scale = std::max(scale, std::abs(r.rhs));
        for (const auto& [v, a] : r.terms) {
            require(v < n, ErrorCode::bad_index, "lp_minimize: variable index out of range");
            scale = std::max(scale, std::abs(a));
        }
    }
    for (double c : objective) {
        scale = std::max(scale, std::abs(c));
    }
    const double tol = 1e-11 * scale;

    Tableau tab(n, nr + n);
    for (std::size_t r = 0; r < nr; ++r) {
        for (const auto& [v, a] : rows[r].terms) {
            tab.at(v, r) += a;
        }
    }
    for (std::size_t j = 0; j < n; ++j) {
        tab.rhs(j) = -objective[j];
        if (tab.rhs(j) < 0) {
            for (std::size_t r = 0; r < nr; ++r) {
                tab.at(j, r) = -tab.at(j, r);
            }
            tab.rhs(j) = -tab.rhs(j);
        }
        tab.at(j, nr + j) = 1.0;
    }
    std::vector<std::size_t> basis(n);
    for (std::size_t j = 0; j < n; ++j) {
        basis[j] = nr + j;
    }

    // Phase 1: sum of artificials.
    for (std::size_t c = 0; c <= nr + n; ++c) {
        double s = 0;
        for (std::size_t j = 0; j < n; ++j) {
            s += c == nr + n ? tab.rhs(j) : tab.at(j, c);
        }
        if (c < nr) {
            tab.cost(c) = -s;
        } else if (c == nr + n) {
            tab.objective() = -s;
        }
    }
    run_simplex(tab, basis, nr, tol, result.pivots);
    if (-tab.objective() > std::max(eps, tol) * static_cast<double>(n + 1)) {
        // The dual is infeasible, so a feasible primal is unbounded below.
        result.status = any ? LpStatus::unbounded : LpStatus::optimal;
        result.value = any ? -kInf : 0.0;
        return result;
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (basis[j] < nr) {
            continue;
        }
        for (std::size_t c = 0; c < nr; ++c) {
            if (std::abs(tab.at(j, c)) > tol) {
                tab.pivot(j, c);
                basis[j] = c;
                ++result.pivots;
                break;
            }
        }
    }

    // Phase 2.
    for (std::size_t c = 0; c <= nr + n; ++c) {
        tab.cost(c) = c < nr ? rows[c].rhs : 0.0;
    }
    for (std::size_t j = 0; j < n; ++j) {
        const double cb = basis[j] < nr ? rows[basis[j]].rhs : 0.0;
        if (cb == 0.0) {
            continue;
        }
        for (std::size_t c = 0; c <= nr + n; ++c) {
            tab.at(n, c) -= cb * (c == nr + n ? tab.rhs(j) : tab.at(j, c));
        }
    }
    if (run_simplex(tab, basis, nr, tol, result.pivots) == Outcome::unbounded) {
        result.status = LpStatus::infeasible;
        result.value = kInf;
        return result;
    }
    // The objective cell holds minus the dual optimum, which is the primal optimum.
    result.value = tab.objective();
    return result;
}

} // namespace troprelu
