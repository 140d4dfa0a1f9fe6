// Copyright (c) troprelu contributors.
// SPDX-License-Identifier: Apache-2.0
#include "troprelu/common.hpp"

namespace troprelu {

const char* to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::invalid_argument: return "invalid argument";
    case ErrorCode::dimension_mismatch: return "dimension mismatch";
    case ErrorCode::empty_input: return "empty input";
    case ErrorCode::empty_abstraction: return "empty abstraction";
    case ErrorCode::unbounded_variable: return "unbounded variable";
    case ErrorCode::infinite_entry: return "infinite entry";
    case ErrorCode::not_closed: return "not closed";
    case ErrorCode::bad_index: return "bad index";
    case ErrorCode::empty_feasible_set: return "empty feasible set";
    case ErrorCode::unbounded: return "unbounded";
    case ErrorCode::budget_exceeded: return "budget exceeded";
    case ErrorCode::io: return "i/o error";
    case ErrorCode::malformed: return "malformed input";
    case ErrorCode::internal: return "internal error";
    }
    return "unknown error";
}

void require(bool cond, ErrorCode code, const std::string& what) {
    if (!cond) {
        throw Error(code, what);
    }
}

bool Box::contains(const Point& p, double eps) const {
    if (p.size() != dims.size()) {
        return false;
    }
    for (std::size_t i = 0; i < dims.size(); ++i) {
        if (!dims[i].contains(p[i], eps)) {
            return false;
        }
    }
    return true;
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    Matrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        require(rows[r].size() == cols, ErrorCode::dimension_mismatch, "ragged matrix rows");
        for (std::size_t c = 0; c < cols; ++c) {
            m(r, c) = rows[r][c];
        }
    }
    return m;
}

} // namespace troprelu
