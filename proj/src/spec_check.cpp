// Copyright (c) troprelu contributors.
// SPDX-License-Identifier: Apache-2.0
#include "troprelu/spec_check.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "troprelu/lp.hpp"

namespace troprelu {

const char* to_string(VerdictStatus s) { return s == VerdictStatus::verified ? "verified" : "unknown"; }

void LinearAssertion::validate(std::size_t inputs, std::size_t outputs) const {
    require(in_coeffs.size() == inputs, ErrorCode::dimension_mismatch,
            "assertion '" + name + "': expected " + std::to_string(inputs) + " input coefficients");
    require(out_coeffs.size() == outputs, ErrorCode::dimension_mismatch,
            "assertion '" + name + "': expected " + std::to_string(outputs) + " output coefficients");
    bool nonzero = constant != 0;
    for (double c : in_coeffs) {
        require(std::isfinite(c), ErrorCode::invalid_argument, "assertion '" + name + "': non-finite coefficient");
        nonzero = nonzero || c != 0;
    }
    for (double c : out_coeffs) {
        require(std::isfinite(c), ErrorCode::invalid_argument, "assertion '" + name + "': non-finite coefficient");
        nonzero = nonzero || c != 0;
    }
    require(nonzero, ErrorCode::invalid_argument, "assertion '" + name + "' has no nonzero coefficient");
    if (restrict_box) {
        require(restrict_box->size() == inputs, ErrorCode::dimension_mismatch,
                "assertion '" + name + "': restriction box dimension");
    }
}

namespace {

std::vector<std::size_t> support_of(std::span<const double> coeffs) {
    std::vector<std::size_t> s;
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        if (coeffs[k] != 0) {
            s.push_back(k);
        }
    }
    return s;
}

double solve(std::span<const double> objective, const std::vector<LinearConstraint>& rows, double constant) {
    const LpResult r = lp_minimize(objective, rows);
    switch (r.status) {
    case LpStatus::optimal: return r.value + constant;
    case LpStatus::unbounded: return -kInf;
    case LpStatus::infeasible: break;
    }
    throw Error(ErrorCode::empty_feasible_set, "linear program is infeasible");
}

} // namespace

double min_over_zone(const Dbm& zone, const std::optional<Box>& restriction, std::span<const double> coeffs,
                     double constant) {
    require(coeffs.size() == zone.dim(), ErrorCode::dimension_mismatch, "min_over_zone: coefficient count");
    Dbm z = zone;
    if (restriction) {
        require(restriction->size() <= zone.dim(), ErrorCode::dimension_mismatch, "min_over_zone: restriction size");
        for (std::size_t k = 0; k < restriction->size(); ++k) {
            z.tighten(k + 1, 0, (*restriction)[k].hi);
            z.tighten(0, k + 1, -(*restriction)[k].lo);
        }
    }
    auto closed = dbm_close(std::move(z));
    if (!closed) {
        throw Error(ErrorCode::empty_feasible_set, "min_over_zone: restricted zone is empty");
    }
    const std::vector<std::size_t> support = support_of(coeffs);
    if (support.empty()) {
        return constant;
    }
    // Projection of a closed zone is exact, so the program only needs the support.
    const Dbm p = dbm_project(*closed, support);
    std::vector<double> objective;
    for (std::size_t k : support) {
        objective.push_back(coeffs[k]);
    }
    std::vector<LinearConstraint> rows;
    for (std::size_t i = 0; i < p.slots(); ++i) {
        for (std::size_t j = 0; j < p.slots(); ++j) {
            const double c = p(i, j);
            if (i == j || !std::isfinite(c)) {
                continue;
            }
            if (i != 0 && j != 0 && c >= p(i, 0) + p(0, j)) {
                continue;
            }
            LinearConstraint row;
            if (i != 0) {
                row.terms.emplace_back(i - 1, 1.0);
            }
            if (j != 0) {
                row.terms.emplace_back(j - 1, -1.0);
            }
            row.rhs = c;
            rows.push_back(std::move(row));
        }
    }
    return solve(objective, rows, constant);
}

double min_over_zone(const Dbm& zone, const std::optional<Box>& restriction, const LinearAssertion& a) {
    require(a.in_coeffs.size() + a.out_coeffs.size() == zone.dim(), ErrorCode::dimension_mismatch,
            "min_over_zone: zone must be laid out as (inputs, outputs)");
    std::vector<double> coeffs = a.in_coeffs;
    coeffs.insert(coeffs.end(), a.out_coeffs.begin(), a.out_coeffs.end());
    return min_over_zone(zone, restriction, coeffs, a.constant);
}

double min_over_octagon(const OctDbm& oct, const std::optional<Box>& restriction, std::span<const double> coeffs,
                        double constant) {
    require(coeffs.size() == oct.dim(), ErrorCode::dimension_mismatch, "min_over_octagon: coefficient count");
    OctDbm o = oct;
    if (restriction) {
        require(restriction->size() <= oct.dim(), ErrorCode::dimension_mismatch, "min_over_octagon: restriction");
        for (std::size_t k = 0; k < restriction->size(); ++k) {
            o.tighten_upper(k, (*restriction)[k].hi);
            o.tighten_lower(k, (*restriction)[k].lo);
        }
    }
    auto closed = oct_close(std::move(o));
    if (!closed) {
        throw Error(ErrorCode::empty_feasible_set, "min_over_octagon: restricted octagon is empty");
    }
    const std::vector<std::size_t> support = support_of(coeffs);
    if (support.empty()) {
        return constant;
    }
    const OctDbm p = oct_project(*closed, support);
    std::vector<double> objective;
    for (std::size_t k : support) {
        objective.push_back(coeffs[k]);
    }
    const std::size_t n = p.dim();
    std::vector<LinearConstraint> rows;
    for (std::size_t a = 0; a < 2 * n; ++a) {
        for (std::size_t b = 0; b < 2 * n; ++b) {
            const double c = p(a, b);
            if (a == b || !std::isfinite(c)) {
                continue;
            }
            std::map<std::size_t, double> terms;
            terms[a % n] += a < n ? 1.0 : -1.0;
            terms[b % n] -= b < n ? 1.0 : -1.0;
            LinearConstraint row;
            for (const auto& [v, coef] : terms) {
                if (coef != 0) {
                    row.terms.emplace_back(v, coef);
                }
            }
            if (row.terms.empty()) {
                continue;
            }
            row.rhs = c;
            rows.push_back(std::move(row));
        }
    }
    return solve(objective, rows, constant);
}

Verdict check(const LinearAssertion& a, const AnalysisResult& result, double eps) {
    const std::size_t inputs = result.bounds.front().post.size();
    const std::size_t last = result.bounds.size() - 1;
    a.validate(inputs, result.bounds.back().post.size());
    std::vector<double> coeffs(result.vars.size(), 0.0);
    for (std::size_t k = 0; k < result.vars.size(); ++k) {
        const VarRef& v = result.vars[k];
        if (v.layer == 0) {
            coeffs[k] += a.in_coeffs[v.neuron];
        }
        if (v.layer == last && !v.pre) {
            coeffs[k] += a.out_coeffs[v.neuron];
        }
    }
    Verdict verdict;
    try {
        double low = min_over_zone(result.zone, a.restrict_box, coeffs, a.constant);
        verdict.method = "zone-lp";
        if (result.octagon) {
            low = std::max(low, min_over_octagon(*result.octagon, a.restrict_box, coeffs, a.constant));
            verdict.method = "octagon-lp";
        }
        verdict.minimum = low;
    } catch (const Error& e) {
        if (e.code() != ErrorCode::empty_feasible_set) {
            throw;
        }
        verdict.minimum = kInf;
        verdict.method = "vacuous";
    }
    verdict.status = verdict.minimum >= -eps ? VerdictStatus::verified : VerdictStatus::unknown;
    return verdict;
}

Verdict check_with_subdivision(const LinearAssertion& a, const Network& net, const Box& input_box,
                               const SubdivisionGrid& grid, const AnalysisOptions& opts) {
    require(grid.dims() == input_box.size(), ErrorCode::dimension_mismatch, "check_with_subdivision: grid dimension");
    AnalysisOptions per_cell = opts;
    per_cell.subdivision.reset();
    Verdict verdict;
    verdict.minimum = kInf;
    verdict.cells = 0;
    std::string method;
    for (const Box& cell : grid.cells(opts.subdivision_config.cell_budget)) {
        if (a.restrict_box) {
            bool disjoint = false;
            for (std::size_t k = 0; k < cell.size(); ++k) {
                disjoint = disjoint || cell[k].hi < (*a.restrict_box)[k].lo || cell[k].lo > (*a.restrict_box)[k].hi;
            }
            if (disjoint) {
                continue;
            }
        }
        const AnalysisResult r = analyze(net, cell, per_cell);
        const Verdict v = check(a, r, opts.eps);
        ++verdict.cells;
        verdict.minimum = std::min(verdict.minimum, v.minimum);
        if (method.empty() || v.method != "vacuous") {
            method = v.method;
        }
    }
    verdict.method = verdict.cells == 0 ? "vacuous" : "cellwise-" + method;
    verdict.status = verdict.minimum >= -opts.eps ? VerdictStatus::verified : VerdictStatus::unknown;
    return verdict;
}

} // namespace troprelu
