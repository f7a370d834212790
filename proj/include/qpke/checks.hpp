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
 * The end-to-end checks run by `qpke check-all` and the acceptance suite.
 * Every tolerance, parameter grid and time budget is fixed here.
 */

#pragma once

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "qpke/bayes_attack.hpp"
#include "qpke/montecarlo.hpp"
#include "qpke/protocol.hpp"
#include "qpke/symmetry_attack.hpp"
#include "qpke/symspace.hpp"
#include "qpke/table.hpp"

namespace qpke::checks {

struct CheckResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
    double time_limit = 0.0; ///< seconds; 0 means no budget
};

using qpke::detail::describe;

namespace detail {

struct Failures {
    std::vector<std::string> items;
    void add(std::string s) { items.push_back(std::move(s)); }
    [[nodiscard]] bool empty() const { return items.empty(); }
    [[nodiscard]] std::string summary(const std::string &ok_text) const {
        if (items.empty()) {
            return ok_text;
        }
        std::string out = std::to_string(items.size()) + " failure(s); first: " + items.front();
        return out;
    }
};

inline CheckResult timed(int id, std::string name, double limit, const std::function<std::pair<bool, std::string>()> &body) {
    const auto t0 = std::chrono::steady_clock::now();
    auto [ok, detail] = body();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CheckResult r{id, std::move(name), ok, std::move(detail), secs, limit};
    if (limit > 0.0 && secs > limit) {
        r.passed = false;
        r.detail += " (runtime " + format_number(secs) + " s over budget " + format_number(limit) + " s)";
    }
    return r;
}

/// Sum over all 2^s error patterns with an even number of wrong verdicts.
inline double even_error_probability(double q1, int s) {
    double total = 0.0;
    for (std::uint32_t mask = 0; mask < (1u << s); ++mask) {
        if (std::popcount(mask) % 2 != 0) {
            continue;
        }
        double p = 1.0;
        for (int j = 0; j < s; ++j) {
            p *= (mask >> j) & 1u ? 1.0 - q1 : q1;
        }
        total += p;
    }
    return total;
}

} // namespace detail

inline CheckResult binomial_spectrum() {
    return detail::timed(1, "binomial spectrum at n >= n_c", 1.0, [] {
        detail::Failures f;
        for (int tau : {2, 4, 8, 16}) {
            const auto crit = critical_n(tau);
            if (!crit.n_c) {
                f.add("tau=" + std::to_string(tau) + ": n_c unresolved");
                continue;
            }
            const auto expected = binomial_eigenvalues(tau);
            for (int n : {*crit.n_c, *crit.n_c + 1, 10}) {
                const Spectrum eig = eigendecompose(prior_density(tau, n));
                for (int i = 0; i <= tau; ++i) {
                    if (std::abs(eig.eigenvalues[i] - expected[i]) > 1e-10) {
                        f.add(describe("tau=" + std::to_string(tau) + " n=" + std::to_string(n) + " i=" +
                                           std::to_string(i),
                                       eig.eigenvalues[i], "!=", expected[i]));
                    }
                }
            }
        }
        return std::pair{f.empty(), f.summary("tau in {2,4,8,16}: eigenvalues = B(tau,i)/2^tau within 1e-10")};
    });
}

inline CheckResult parity_zero_structure() {
    return detail::timed(2, "odd l+l' entries vanish", 5.0, [] {
        double worst = 0.0;
        for (int tau = 1; tau <= 32; ++tau) {
            for (int n = 1; n <= 14; ++n) {
                worst = std::max(worst, prior_density(tau, n).max_odd_parity_entry());
            }
        }
        return std::pair{worst < 1e-12, "max |C_{l,l'}| over odd l+l', tau<=32, n<=14: " + format_number(worst)};
    });
}

inline CheckResult entropy_bounds() {
    return detail::timed(3, "entropy below Holevo bounds", 0.0, [] {
        detail::Failures f;
        for (int tau = 2; tau <= 64; ++tau) {
            const auto crit = critical_n(tau);
            if (!crit.n_c) {
                f.add("tau=" + std::to_string(tau) + ": n_c unresolved");
                continue;
            }
            for (int n : {*crit.n_c, *crit.n_c + 1}) {
                const double s = von_neumann_entropy(prior_density(tau, n));
                if (s > holevo_bound_tight(tau) + 1e-9) {
                    f.add(describe("tight tau=" + std::to_string(tau) + " n=" + std::to_string(n), s, ">",
                                   holevo_bound_tight(tau)));
                }
            }
            if (holevo_bound_tight(tau) > holevo_bound_loose(tau) + 1e-9) {
                f.add(describe("tight<=loose tau=" + std::to_string(tau), holevo_bound_tight(tau), ">",
                               holevo_bound_loose(tau)));
            }
        }
        for (int tau = 1; tau <= 64; ++tau) {
            for (int n = 1; n <= 10; ++n) {
                const double s = von_neumann_entropy(prior_density(tau, n));
                if (s > holevo_bound_loose(tau) + 1e-9) {
                    f.add(describe("loose tau=" + std::to_string(tau) + " n=" + std::to_string(n), s, ">",
                                   holevo_bound_loose(tau)));
                }
            }
        }
        return std::pair{f.empty(), f.summary("S <= tight for tau in 2..64 at n >= n_c; S <= log2(tau+1) for "
                                              "tau in 1..64, n in 1..10")};
    });
}

inline CheckResult information_gain_below_holevo() {
    return detail::timed(4, "information gain below tight Holevo bound (n=10)", 120.0, [] {
        detail::Failures f;
        double min_gap = INFINITY;
        for (int T = 1; T <= 8; ++T) {
            const double info = information_gain(T, 10);
            const double gap = holevo_bound_tight(2 * T) - info;
            min_gap = std::min(min_gap, gap);
            if (!(gap > 0.0)) {
                f.add(describe("2T=" + std::to_string(2 * T), info, ">=", holevo_bound_tight(2 * T)));
            }
        }
        return std::pair{f.empty(), f.summary("2T in 2..16: smallest gap " + format_number(min_gap) + " bits")};
    });
}

inline CheckResult mean_success_bound_and_oscillation() {
    return detail::timed(5, "mean success <= 1 - 1/(6T); oscillation shrinks with T", 0.0, [] {
        detail::Failures f;
        double prev_p2p = INFINITY;
        std::ostringstream amp;
        for (int T = 2; T <= 10; ++T) {
            const OutcomeTable table(T, 10);
            const auto per_key = table.success_per_key();
            const double mean = std::ldexp(qpke::detail::pairwise_sum(per_key), -10);
            if (mean > bound_U(T) + 1e-9) {
                f.add(describe("T=" + std::to_string(T), mean, ">", bound_U(T)));
            }
            const auto [lo, hi] = std::minmax_element(per_key.begin(), per_key.end());
            const double p2p = *hi - *lo;
            amp << (T == 2 ? "" : ",") << format_number(p2p);
            if (!(p2p < prev_p2p)) {
                f.add(describe("peak-to-peak T=" + std::to_string(T), p2p, ">=", prev_p2p));
            }
            prev_p2p = p2p;
        }
        return std::pair{f.empty(), f.summary("T in 2..10; peak-to-peak = " + amp.str())};
    });
}

inline CheckResult mean_below_optimal_collective() {
    return detail::timed(6, "mean success <= optimal collective", 0.0, [] {
        detail::Failures f;
        for (int T = 1; T <= 10; ++T) {
            const double mean = mean_success(T, 10);
            if (mean > optimal_collective(T)) {
                f.add(describe("T=" + std::to_string(T), mean, ">", optimal_collective(T)));
            }
        }
        const double expected = 0.5 + std::numbers::sqrt2 / 4.0;
        if (std::abs(optimal_collective(1) - expected) > 1e-12) {
            f.add(describe("optimal_collective(1)", optimal_collective(1), "!=", expected));
        }
        return std::pair{f.empty(), f.summary("T in 1..10; optimal_collective(1) = " +
                                              format_number(optimal_collective(1)))};
    });
}

inline CheckResult codeword_below_bound() {
    return detail::timed(7, "codeword success <= 1/2 + (1/2)(1 - 1/(3T))^s", 0.0, [] {
        detail::Failures f;
        for (int T : {2, 4, 8}) {
            const double p = mean_success(T, 10);
            for (int s = 1; s <= 50; ++s) {
                const double ps = codeword_success(p, s);
                if (ps > codeword_bound(T, s) + 1e-9) {
                    f.add(describe("T=" + std::to_string(T) + " s=" + std::to_string(s), ps, ">",
                                   codeword_bound(T, s)));
                }
            }
        }
        return std::pair{f.empty(), f.summary("T in {2,4,8}, s in 1..50")};
    });
}

inline CheckResult parity_iteration_identity() {
    return detail::timed(8, "parity iteration = even-error enumeration", 0.0, [] {
        detail::Failures f;
        double worst = 0.0;
        for (double q1 : {0.5, 0.6, 0.75, 0.9, 1.0}) {
            for (int s = 1; s <= 12; ++s) {
                const double diff = std::abs(parity_iteration(q1, s) - detail::even_error_probability(q1, s));
                worst = std::max(worst, diff);
                if (diff > 1e-12) {
                    f.add(describe("q1=" + format_number(q1) + " s=" + std::to_string(s), diff, ">", 1e-12));
                }
            }
        }
        return std::pair{f.empty(), f.summary("s <= 12; max difference " + format_number(worst))};
    });
}

inline CheckResult symmetry_test_montecarlo(std::uint64_t seed = 20261016) {
    return detail::timed(9, "symmetry-test Monte Carlo matches 1/2 + 2^-(s+1)", 30.0, [seed] {
        detail::Failures f;
        std::ostringstream zs;
        for (int s : {1, 2, 3, 8}) {
            TrialConfig cfg;
            cfg.params = ProtocolParams{10, s, 1, s};
            cfg.attack = AttackKind::SymmetryTest;
            cfg.trials = 1'000'000;
            cfg.seed = seed + static_cast<std::uint64_t>(s);
            const EstimateWithError est = estimate(cfg);
            const double z = (est.mean - average_success_symmetry(s)) / est.standard_error;
            zs << (s == 1 ? "" : ",") << "s=" << s << ":z=" << format_number(z);
            if (!(std::abs(z) < 3.0)) {
                f.add(describe("s=" + std::to_string(s), est.mean, "!~", average_success_symmetry(s)));
            }
        }
        return std::pair{f.empty(), f.summary(zs.str())};
    });
}

inline CheckResult forward_search_equivalence() {
    return detail::timed(10, "forward search at T=1 = symmetry test", 0.0, [] {
        detail::Failures f;
        for (int s = 1; s <= 64; ++s) {
            if (forward_search_success(1, s) != average_success_symmetry(s)) {
                f.add(describe("s=" + std::to_string(s), forward_search_success(1, s), "!=",
                               average_success_symmetry(s)));
            }
        }
        return std::pair{f.empty(), f.summary("bit-exact for s in 1..64")};
    });
}

inline CheckResult factor_of_three() {
    return detail::timed(11, "simple length / forward-search length = 3", 0.0, [] {
        detail::Failures f;
        for (int e = 3; e <= 10; ++e) {
            const double eps = std::ldexp(1.0, -e);
            for (int T = 2; T <= 8; ++T) {
                const auto simple = required_codeword_length(eps, T).s_simple;
                const auto fwd = forward_search_length(eps, T);
                const double ratio = static_cast<double>(simple) / static_cast<double>(fwd);
                if (std::abs(ratio - 3.0) > 1.0) {
                    f.add(describe("eps=2^-" + std::to_string(e) + " T=" + std::to_string(T), ratio, "!=", 3.0));
                }
            }
        }
        return std::pair{f.empty(), f.summary("eps in 2^-3..2^-10, T in 2..8")};
    });
}

inline CheckResult protocol_round_trip() {
    return detail::timed(12, "exhaustive decrypt(encrypt) round trip", 1.0, [] {
        detail::Failures f;
        long long cases = 0;
        for (int n = 1; n <= 3; ++n) {
            for (int s = 1; s <= 3; ++s) {
                const ProtocolParams params{n, s, 1, s};
                const std::uint64_t keys = std::uint64_t{1} << (n * s);
                for (std::uint64_t key_index = 0; key_index < keys; ++key_index) {
                    PrivateKey key{n, {}};
                    for (int j = 0; j < s; ++j) {
                        key.k.push_back((key_index >> (n * j)) & ((1u << n) - 1));
                    }
                    for (std::uint32_t word = 0; word < (1u << s); ++word) {
                        Codeword cw;
                        for (int j = 0; j < s; ++j) {
                            cw.w.push_back(static_cast<std::uint8_t>((word >> j) & 1u));
                        }
                        const Decryption d = decrypt(encrypt(cw, key), key, params);
                        ++cases;
                        if (d.bits != cw.w || d.message != cw.parity()) {
                            f.add("n=" + std::to_string(n) + " s=" + std::to_string(s) + " key#" +
                                  std::to_string(key_index) + " word=" + std::to_string(word));
                        }
                    }
                }
            }
        }
        return std::pair{f.empty(), f.summary(std::to_string(cases) + " (key, codeword) pairs recovered exactly")};
    });
}

inline CheckResult posterior_normalization() {
    return detail::timed(13, "posterior and evidence normalization (T=8, n=10)", 0.0, [] {
        detail::Failures f;
        constexpr int T = 8;
        constexpr int n = 10;
        std::vector<double> evidences;
        for (int a = 0; a <= T; ++a) {
            for (int b = 0; b <= T; ++b) {
                const MeasurementOutcome o{a, b};
                evidences.push_back(evidence(o, T, n));
                const auto post = posterior(o, T, n);
                const double total = qpke::detail::pairwise_sum(post.p);
                if (std::abs(total - 1.0) > 1e-12) {
                    f.add(describe("T0z=" + std::to_string(a) + " T0x=" + std::to_string(b), total, "!=", 1.0));
                }
            }
        }
        const double total = qpke::detail::pairwise_sum(evidences);
        if (std::abs(total - 1.0) > 1e-12) {
            f.add(describe("sum of evidence", total, "!=", 1.0));
        }
        return std::pair{f.empty(), f.summary("81 posteriors sum to 1; evidence sums to " + format_number(total))};
    });
}

inline CheckResult bayes_montecarlo(std::uint64_t seed = 20261016) {
    return detail::timed(14, "projective-attack Monte Carlo matches exact success (n=10, T=4)", 120.0, [seed] {
        detail::Failures f;
        std::ostringstream zs;
        const double p_bit = mean_success(4, 10);
        for (int s : {1, 8}) {
            TrialConfig cfg;
            cfg.params = ProtocolParams{10, s, 4, s};
            cfg.attack = AttackKind::BayesProjective;
            cfg.trials = 100'000;
            cfg.seed = seed + 100 + static_cast<std::uint64_t>(s);
            const EstimateWithError est = estimate(cfg);
            const double analytic = codeword_success(p_bit, s);
            const double z = (est.mean - analytic) / est.standard_error;
            zs << (s == 1 ? "" : ",") << "s=" << s << ":z=" << format_number(z);
            if (!(std::abs(z) < 3.0)) {
                f.add(describe("s=" + std::to_string(s), est.mean, "!~", analytic));
            }
        }
        return std::pair{f.empty(), f.summary(zs.str())};
    });
}

inline std::vector<std::function<CheckResult()>> all_checks() {
    return {binomial_spectrum,
            parity_zero_structure,
            entropy_bounds,
            information_gain_below_holevo,
            mean_success_bound_and_oscillation,
            mean_below_optimal_collective,
            codeword_below_bound,
            parity_iteration_identity,
            [] { return symmetry_test_montecarlo(); },
            forward_search_equivalence,
            factor_of_three,
            protocol_round_trip,
            posterior_normalization,
            [] { return bayes_montecarlo(); }};
}

inline Report run_all(const std::vector<CheckResult> &results) {
    Report r;
    r.table.columns = {"id", "name", "passed", "seconds", "detail"};
    for (const auto &c : results) {
        r.table.add_row({static_cast<long long>(c.id), c.name, c.passed, c.seconds, c.detail});
        if (!c.passed) {
            r.violations.push_back({"criterion_" + std::to_string(c.id), c.detail});
        }
    }
    return r;
}

} // namespace qpke::checks
