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

/**
 * @file
 * Single-copy symmetry test and the forward-search closed forms.
 *
 * Eve pairs public-key qubit j with cipher qubit j, measures both in one
 * random basis at angle phi_j and calls the pair parallel when the outcomes
 * agree. With omega = k_j theta_n - phi_j the pair verdict is right with
 * probability F^2 + (1 - F)^2, F = cos^2(omega/2), and the message parity is
 * right whenever the total number of wrong single-qubit outcomes is even.
 */

#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "qpke/bayes_attack.hpp"
#include "qpke/common.hpp"

namespace qpke {

/// cos^2(omega / 2)
inline double pair_fidelity(double omega) {
    const double c = std::cos(omega / 2.0);
    return c * c;
}

/// F^2 + (1 - F)^2: both outcomes right or both wrong.
inline double pair_success(double omega) {
    const double f = pair_fidelity(omega);
    return f * f + (1.0 - f) * (1.0 - f);
}

/// 1/2 + 2^-(s+1), the basis-averaged symmetry-test success.
inline double average_success_symmetry(int s) {
    detail::require(s >= 1, "average_success_symmetry: s must be >= 1");
    return 0.5 + std::ldexp(1.0, -(s + 1));
}

/// 1/2 + (1/2)(1 - 1/(2T))^s
inline double forward_search_success(int T, int s) {
    detail::require(T >= 1, "forward_search_success: T must be >= 1");
    detail::require(s >= 1, "forward_search_success: s must be >= 1");
    return 0.5 + 0.5 * std::pow(1.0 - 1.0 / (2.0 * T), s);
}

/// ceil(T |1 + log2 eps|)
inline long long forward_search_length(double epsilon, int T) {
    detail::check_epsilon(epsilon, "forward_search_length");
    detail::require(T >= 1, "forward_search_length: T must be >= 1");
    return detail::ceil_length(T * std::abs(1.0 + std::log2(epsilon)));
}

/**
 * Q(s) = Q(1) Q(s-1) + (1 - Q(1)) (1 - Q(s-1)), Q(1) = q1: the chance
 * that s independent verdicts, each right with probability q1, combine to
 * the right parity. Evaluated by iterating, not by the closed form.
 */
inline double parity_iteration(double q1, int s) {
    detail::require(q1 >= 0.0 && q1 <= 1.0, "parity_iteration: q1 must lie in [0, 1]");
    detail::require(s >= 1, "parity_iteration: s must be >= 1");
    double q = q1;
    for (int i = 2; i <= s; ++i) {
        q = q1 * q + (1.0 - q1) * (1.0 - q);
    }
    return q;
}

struct PairTableRow {
    std::array<bool, 2> public_key_correct{}; ///< outcome on public qubit of pair 1, pair 2
    std::array<bool, 2> cipher_correct{};     ///< outcome on cipher qubit of pair 1, pair 2
    std::array<int, 2> e{};                   ///< wrong outcomes per pair
    int total = 0;
    bool success = false; ///< total wrong outcomes even
};

/// All 16 true/false combinations for a two-qubit codeword.
inline std::vector<PairTableRow> enumerate_pair_table() {
    std::vector<PairTableRow> rows;
    rows.reserve(16);
    for (int mask = 0; mask < 16; ++mask) {
        PairTableRow r;
        r.public_key_correct = {(mask & 8) == 0, (mask & 4) == 0};
        r.cipher_correct = {(mask & 2) == 0, (mask & 1) == 0};
        for (int j = 0; j < 2; ++j) {
            r.e[j] = (r.public_key_correct[j] ? 0 : 1) + (r.cipher_correct[j] ? 0 : 1);
        }
        r.total = r.e[0] + r.e[1];
        r.success = r.total % 2 == 0;
        rows.push_back(r);
    }
    return rows;
}

} // namespace qpke
