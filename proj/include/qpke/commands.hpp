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
 * Sweep drivers behind the qpke command-line tool. Each returns a Report:
 * the data table plus any inequality that failed along the way. Column
 * layouts are documented in docs/formats.md.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qpke/bayes_attack.hpp"
#include "qpke/montecarlo.hpp"
#include "qpke/symmetry_attack.hpp"
#include "qpke/symspace.hpp"
#include "qpke/table.hpp"

namespace qpke {

struct PriorOptions {
    std::vector<int> taus{1, 2, 4, 8, 16};
    std::vector<int> ns{1, 2, 3, 4, 5, 6, 8, 10};
};

inline Report cmd_prior(const PriorOptions &opt) {
    for (int tau : opt.taus) {
        detail::require(tau >= 1 && tau <= kMaxCopies, "prior: tau must lie in [1, 64]");
    }
    for (int n : opt.ns) {
        detail::require(n >= 1 && n <= kMaxSumResolution, "prior: n must lie in [1, 20]");
    }
    Report r;
    r.table.columns = {"tau", "n", "entropy_bits", "rank", "n_c", "at_or_above_n_c", "holevo_loose", "holevo_tight",
                       "spectrum"};
    std::map<int, CriticalResolution> critical;
    for (int tau : opt.taus) {
        if (!critical.contains(tau)) {
            critical.emplace(tau, critical_n(tau));
        }
        const CriticalResolution &crit = critical.at(tau);
        const long long n_c = crit.n_c ? *crit.n_c : -1;
        for (int n : opt.ns) {
            const Spectrum eig = eigendecompose(prior_density(tau, n));
            const double entropy = von_neumann_entropy(eig);
            const int rank = eig.rank();
            const bool above = crit.n_c && n >= *crit.n_c;
            const double loose = holevo_bound_loose(tau);
            const double tight = holevo_bound_tight(tau);
            r.table.add_row({static_cast<long long>(tau), static_cast<long long>(n), entropy,
                             static_cast<long long>(rank), n_c, above, loose, tight, format_list(eig.eigenvalues)});

            const std::string where = "tau=" + std::to_string(tau) + " n=" + std::to_string(n);
            if (entropy > std::log2(static_cast<double>(rank)) + 1e-9) {
                r.violations.push_back(
                    {"entropy_le_log2_rank", detail::describe(where, entropy, ">", std::log2(double(rank)))});
            }
            if (entropy > loose + 1e-9) {
                r.violations.push_back({"entropy_le_loose_bound", detail::describe(where, entropy, ">", loose)});
            }
            if (above) {
                if (entropy > tight + 1e-9) {
                    r.violations.push_back({"entropy_le_tight_bound", detail::describe(where, entropy, ">", tight)});
                }
                const auto expected = binomial_eigenvalues(tau);
                for (int i = 0; i <= tau; ++i) {
                    if (std::abs(eig.eigenvalues[i] - expected[i]) > 1e-10) {
                        r.violations.push_back({"binomial_spectrum",
                                                detail::describe(where + " i=" + std::to_string(i),
                                                                 eig.eigenvalues[i], "!=", expected[i])});
                        break;
                    }
                }
                // Full rank, as resolved by the same relative cut applied to the exact spectrum.
                const auto resolvable = std::count_if(expected.begin(), expected.end(),
                                                      [&](double v) { return v > 1e-10 * expected.front(); });
                if (rank != resolvable) {
                    r.violations.push_back(
                        {"full_rank_above_n_c", detail::describe(where, rank, "!=", double(resolvable))});
                }
            }
        }
    }
    return r;
}

struct FigureOptions {
    int id = 1;
    int n = 10;
    std::vector<int> Ts; ///< empty: per-figure default
    std::vector<int> ss; ///< fig5 only; empty: 1..50
};

namespace detail {

inline std::vector<int> range_inclusive(int lo, int hi) {
    std::vector<int> v;
    for (int i = lo; i <= hi; ++i) {
        v.push_back(i);
    }
    return v;
}

/// Posterior grids for every (T0z, T0x).
inline Report figure_posteriors(const FigureOptions &opt) {
    const std::vector<int> Ts = opt.Ts.empty() ? std::vector<int>{8, 9} : opt.Ts;
    Report r;
    r.table.columns = {"T", "T0z", "T0x", "k", "angle", "probability"};
    const double theta = elementary_angle(opt.n);
    for (int T : Ts) {
        const OutcomeTable table(T, opt.n);
        for (std::size_t idx = 0; idx < table.outcomes(); ++idx) {
            const MeasurementOutcome o = table.outcome(idx);
            if (!(table.evidence(idx) > 0.0)) {
                continue;
            }
            const PosteriorDistribution post = posterior(o, T, opt.n);
            const double total = pairwise_sum(post.p);
            if (std::abs(total - 1.0) > 1e-12) {
                r.violations.push_back({"posterior_normalized",
                                        describe("T=" + std::to_string(T) + " T0z=" + std::to_string(o.T0z) +
                                                     " T0x=" + std::to_string(o.T0x),
                                                 total, "!=", 1.0)});
            }
            for (std::size_t k = 0; k < post.p.size(); ++k) {
                r.table.add_row({static_cast<long long>(T), static_cast<long long>(o.T0z),
                                 static_cast<long long>(o.T0x), static_cast<long long>(k),
                                 static_cast<double>(k) * theta, post.p[k]});
            }
        }
    }
    return r;
}

/// Entropies, Holevo bounds and information gain against the copy count 2T.
inline Report figure_information(const FigureOptions &opt) {
    const std::vector<int> Ts = opt.Ts.empty() ? range_inclusive(1, 8) : opt.Ts;
    Report r;
    r.table.columns = {"T",           "copies",       "n", "prior_entropy_bits", "von_neumann_entropy",
                       "holevo_tight", "holevo_loose", "information_gain", "gap"};
    for (int T : Ts) {
        const int copies = 2 * T;
        require(copies <= kMaxCopies, "figure 2: 2T must be <= 64");
        const double vn = von_neumann_entropy(prior_density(copies, opt.n));
        const double tight = holevo_bound_tight(copies);
        const double info = information_gain(T, opt.n);
        const double gap = tight - info;
        r.table.add_row({static_cast<long long>(T), static_cast<long long>(copies), static_cast<long long>(opt.n),
                         static_cast<double>(opt.n), vn, tight, holevo_bound_loose(copies), info, gap});
        if (!(gap > 0.0)) {
            r.violations.push_back({"information_below_holevo",
                                    describe("T=" + std::to_string(T), info, ">=", tight)});
        }
    }
    return r;
}

/// Success probability as a function of the key value.
inline Report figure_success_vs_key(const FigureOptions &opt) {
    const std::vector<int> Ts = opt.Ts.empty() ? std::vector<int>{2, 4, 8} : opt.Ts;
    Report r;
    r.table.columns = {"T", "k", "angle", "success", "mean_success"};
    const double theta = elementary_angle(opt.n);
    for (int T : Ts) {
        require(T >= 1, "figure 3: T must be >= 1");
        const auto per_key = OutcomeTable(T, opt.n).success_per_key();
        const double mean = std::ldexp(pairwise_sum(per_key), -opt.n);
        for (std::size_t k = 0; k < per_key.size(); ++k) {
            r.table.add_row({static_cast<long long>(T), static_cast<long long>(k), static_cast<double>(k) * theta,
                             per_key[k], mean});
        }
    }
    return r;
}

/// Mean success against T, with the collective optimum and U(T).
inline Report figure_mean_success(const FigureOptions &opt) {
    const std::vector<int> Ts = opt.Ts.empty() ? range_inclusive(1, 10) : opt.Ts;
    Report r;
    r.table.columns = {"T", "mean_success", "optimal_collective", "bound_U", "optimal_asymptote"};
    for (int T : Ts) {
        const double mean = mean_success(T, opt.n);
        const double opt_c = optimal_collective(T);
        const double u = T > 1 ? bound_U(T) : std::nan("");
        r.table.add_row({static_cast<long long>(T), mean, opt_c, u, 1.0 - 1.0 / (8.0 * T)});
        const std::string where = "T=" + std::to_string(T);
        if (mean > opt_c) {
            r.violations.push_back({"mean_le_optimal", describe(where, mean, ">", opt_c)});
        }
        if (T > 1 && mean > u + 1e-9) {
            r.violations.push_back({"mean_le_U", describe(where, mean, ">", u)});
        }
    }
    return r;
}

/// Codeword success against s, with the (1 - 1/(3T))^s bound.
inline Report figure_codeword(const FigureOptions &opt) {
    const std::vector<int> Ts = opt.Ts.empty() ? std::vector<int>{2, 4, 8} : opt.Ts;
    const std::vector<int> ss = opt.ss.empty() ? range_inclusive(1, 50) : opt.ss;
    Report r;
    r.table.columns = {"T", "s", "bit_success", "codeword_success", "codeword_bound"};
    for (int T : Ts) {
        require(T > 1, "figure 5: T must be > 1");
        const double p = mean_success(T, opt.n);
        for (int s : ss) {
            require(s >= 1, "figure 5: s must be >= 1");
            const double ps = codeword_success(p, s);
            const double bound = codeword_bound(T, s);
            r.table.add_row({static_cast<long long>(T), static_cast<long long>(s), p, ps, bound});
            if (ps > bound + 1e-10) {
                r.violations.push_back({"codeword_le_bound",
                                        describe("T=" + std::to_string(T) + " s=" + std::to_string(s), ps, ">",
                                                 bound)});
            }
        }
    }
    return r;
}

} // namespace detail

inline Report cmd_figure(const FigureOptions &opt) {
    detail::require(opt.n >= 1 && opt.n <= kMaxTableResolution, "figure: n must lie in [1, 14]");
    switch (opt.id) {
    case 1:
        return detail::figure_posteriors(opt);
    case 2:
        return detail::figure_information(opt);
    case 3:
        return detail::figure_success_vs_key(opt);
    case 4:
        return detail::figure_mean_success(opt);
    case 5:
        return detail::figure_codeword(opt);
    default:
        throw std::invalid_argument("figure: id must be 1..5");
    }
}

struct SecurityOptions {
    std::vector<double> epsilons{0.125, 0.0625, 0.03125, 0.015625, 0.0078125, 0.00390625, 0.001953125, 0.0009765625};
    std::vector<int> Ts{2, 3, 4, 5, 6, 7, 8};
};

inline Report cmd_security(const SecurityOptions &opt) {
    Report r;
    r.table.columns = {"epsilon", "T", "s_exact", "s_simple", "forward_search", "ratio"};
    for (double eps : opt.epsilons) {
        for (int T : opt.Ts) {
            const CodewordLength len = required_codeword_length(eps, T);
            const long long fwd = forward_search_length(eps, T);
            const double ratio = fwd > 0 ? static_cast<double>(len.s_simple) / static_cast<double>(fwd) : 0.0;
            r.table.add_row({eps, static_cast<long long>(T), len.s_exact, len.s_simple, fwd, ratio});
            const std::string where = "epsilon=" + format_number(eps) + " T=" + std::to_string(T);
            if (len.s_simple < len.s_exact) {
                r.violations.push_back(
                    {"simple_covers_exact", detail::describe(where, double(len.s_simple), "<", double(len.s_exact))});
            }
            // ceil(3x) lies in [3 ceil(x) - 2, 3 ceil(x)]
            if (fwd > 0 && (ratio > 3.0 || ratio < 3.0 - 2.0 / static_cast<double>(fwd))) {
                r.violations.push_back({"factor_of_three", detail::describe(where, ratio, "!=", 3.0)});
            }
        }
    }
    return r;
}

struct MonteCarloOptions {
    AttackKind attack = AttackKind::SymmetryTest;
    int n = 10;
    int N = 0; ///< public-key length; 0 means N = s
    int T = 4;
    std::vector<int> ss{1};
    long long trials = 100000;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    double z_limit = 3.0;
};

/// Empirical success next to its analytic value; |z| beyond z_limit is a violation.
inline Report cmd_montecarlo(const MonteCarloOptions &opt) {
    Report r;
    r.table.columns = {"attack", "n", "T", "s", "trials", "seed", "empirical", "std_error", "analytic", "z"};
    std::optional<double> bit_success;
    for (int s : opt.ss) {
        TrialConfig cfg;
        cfg.params = ProtocolParams{opt.n, opt.N > 0 ? opt.N : s, opt.T, s};
        cfg.attack = opt.attack;
        cfg.trials = opt.trials;
        cfg.seed = opt.seed;
        cfg.threads = opt.threads;
        cfg.validate();

        double analytic;
        if (opt.attack == AttackKind::SymmetryTest) {
            analytic = average_success_symmetry(s);
        } else {
            if (!bit_success) {
                bit_success = mean_success(opt.T, opt.n);
            }
            analytic = codeword_success(*bit_success, s);
        }
        const EstimateWithError est = estimate(cfg);
        double z = 0.0;
        if (est.standard_error > 0.0) {
            z = (est.mean - analytic) / est.standard_error;
        } else if (std::abs(est.mean - analytic) > 1e-12) {
            z = est.mean > analytic ? INFINITY : -INFINITY;
        }
        r.table.add_row({std::string(to_string(opt.attack)), static_cast<long long>(opt.n),
                         static_cast<long long>(opt.T), static_cast<long long>(s), opt.trials,
                         static_cast<long long>(opt.seed), est.mean, est.standard_error, analytic, z});
        if (!(std::abs(z) < opt.z_limit)) {
            r.violations.push_back(
                {"empirical_matches_analytic", detail::describe("s=" + std::to_string(s), std::abs(z), ">=", opt.z_limit)});
        }
    }
    return r;
}

} // namespace qpke
