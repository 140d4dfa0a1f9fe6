// Copyright (c) troprelu contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <compare>

#include "troprelu/common.hpp"

namespace troprelu {

// Element of the max-plus semiring (R u {-inf}, max, +).
class MaxPlus {
  public:
    constexpr MaxPlus() = default;
    constexpr explicit MaxPlus(double v) : value_(v) {}

    static constexpr MaxPlus zero() { return MaxPlus(-kInf); }
    static constexpr MaxPlus one() { return MaxPlus(0.0); }

    [[nodiscard]] constexpr double value() const { return value_; }
    [[nodiscard]] constexpr bool is_zero() const { return value_ == -kInf; }

    friend constexpr MaxPlus oplus(MaxPlus a, MaxPlus b) { return MaxPlus(std::max(a.value_, b.value_)); }
    friend constexpr MaxPlus otimes(MaxPlus a, MaxPlus b) {
        if (a.is_zero() || b.is_zero()) {
            return zero();
        }
        return MaxPlus(a.value_ + b.value_);
    }

    constexpr auto operator<=>(const MaxPlus&) const = default;

  private:
    double value_{-kInf};
};

} // namespace troprelu
