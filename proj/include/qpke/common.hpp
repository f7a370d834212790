// Copyright 2026 The qpke-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>

namespace qpke {

/// Raised when an observation has zero probability under every hypothesis.
class ImpossibleEvent : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Raised when an iterative routine exhausts its iteration budget.
class ConvergenceError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool condition, const char *message) {
    if (!condition) {
        throw std::invalid_argument(message);
    }
}

inline void require(bool condition, const std::string &message) {
    if (!condition) {
        throw std::invalid_argument(message);
    }
}

/**
 * Cosine and sine of pi * num / 2^log2_den.
 *
 * The argument is reduced to the first octant in integer arithmetic, so
 * multiples of pi/2 come out as exact 0 and +-1 and symmetric angles give
 * bit-identical magnitudes.
 */
inline std::pair<double, double> cos_sin_pi_dyadic(std::int64_t num, int log2_den) {
    // Work in units of pi / 2^(log2_den + 1) so the quarter turn is an integer.
    const int shift = log2_den + 1;
    const std::int64_t full = std::int64_t{1} << (shift + 1); // 2*pi
    const std::int64_t quarter = std::int64_t{1} << (shift - 1); // pi/2
    std::int64_t u = (num * 2) % full;
    if (u < 0) {
        u += full;
    }
    const int quadrant = static_cast<int>(u / quarter);
    const std::int64_t r = u % quarter;

    double c;
    double s;
    if (r == 0) {
        c = 1.0;
        s = 0.0;
    } else if (2 * r <= quarter) {
        const double a = std::numbers::pi * static_cast<double>(r) / static_cast<double>(std::int64_t{1} << shift);
        c = std::cos(a);
        s = std::sin(a);
    } else {
        const double a =
            std::numbers::pi * static_cast<double>(quarter - r) / static_cast<double>(std::int64_t{1} << shift);
        c = std::sin(a);
        s = std::cos(a);
    }
    switch (quadrant) {
    case 0:
        return {c, s};
    case 1:
        return {-s, c};
    case 2:
        return {-c, -s};
    default:
        return {s, -c};
    }
}

/// Pairwise (tree) summation; error grows as O(log n) instead of O(n).
inline double pairwise_sum(std::span<const double> values) {
    if (values.size() <= 8) {
        double acc = 0.0;
        for (double v : values) {
            acc += v;
        }
        return acc;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

inline double log_binomial(int n, int k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

inline double binomial(int n, int k) {
    if (k < 0 || k > n) {
        return 0.0;
    }
    k = std::min(k, n - k);
    double result = 1.0;
    for (int i = 1; i <= k; ++i) {
        result = result * static_cast<double>(n - k + i) / static_cast<double>(i);
    }
    return std::round(result) < 9.007199254740992e15 ? std::round(result) : result;
}

/// x * log2(x) with the 0 log 0 = 0 convention.
inline double xlog2x(double x) {
    return x > 0.0 ? x * std::log2(x) : 0.0;
}

} // namespace detail
} // namespace qpke
