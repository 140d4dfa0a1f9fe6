// Copyright (c) troprelu contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace troprelu {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDefaultEps = 1e-9;

enum class ErrorCode {
    invalid_argument,
    dimension_mismatch,
    empty_input,
    empty_abstraction,
    unbounded_variable,
    infinite_entry,
    not_closed,
    bad_index,
    empty_feasible_set,
    unbounded,
    budget_exceeded,
    io,
    malformed,
    internal,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    [[nodiscard]] ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

using Point = std::vector<double>;

struct Interval {
    double lo{0};
    double hi{0};

    [[nodiscard]] double width() const { return hi - lo; }
    [[nodiscard]] bool contains(double v, double eps = 0) const { return v >= lo - eps && v <= hi + eps; }
    bool operator==(const Interval&) const = default;
};

// Axis-aligned hyper-rectangle.
struct Box {
    std::vector<Interval> dims;

    Box() = default;
    explicit Box(std::vector<Interval> d) : dims(std::move(d)) {}
    static Box uniform(std::size_t n, double lo, double hi) { return Box(std::vector<Interval>(n, {lo, hi})); }

    [[nodiscard]] std::size_t size() const { return dims.size(); }
    const Interval& operator[](std::size_t i) const { return dims[i]; }
    Interval& operator[](std::size_t i) { return dims[i]; }
    [[nodiscard]] bool contains(const Point& p, double eps = 0) const;
    bool operator==(const Box&) const = default;
};

// Row-major dense matrix.
class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    static Matrix from_rows(const std::vector<std::vector<double>>& rows);

    [[nodiscard]] std::size_t rows() const { return rows_; }
    [[nodiscard]] std::size_t cols() const { return cols_; }
    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    bool operator==(const Matrix&) const = default;

  private:
    std::size_t rows_{0};
    std::size_t cols_{0};
    std::vector<double> data_;
};

void require(bool cond, ErrorCode code, const std::string& what);

} // namespace troprelu
