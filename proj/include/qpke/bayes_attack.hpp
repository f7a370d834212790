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
 * Incoherent projective-measurement attack.
 *
 * Eve measures T copies of a public-key qubit in the z basis and T in the x
 * basis, updates a uniform prior over Z_{2^n} with the counts (T0z, T0x),
 * and measures the cipher qubit along the posterior-mean Bloch vector. This
 * header holds the exact (enumerated) statistics of that procedure together
 * with the closed-form bounds it is compared against.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qpke/common.hpp"
#include "qpke/symspace.hpp"

namespace qpke {

/// Largest n accepted by routines that sum over Z_{2^n} inside the outcome loop.
inline constexpr int kMaxTableResolution = 14;

enum class Basis { Z, X };

struct MeasurementOutcome {
    int T0z = 0; ///< "0" outcomes among the T z-basis measurements
    int T0x = 0; ///< "0" outcomes among the T x-basis measurements

    friend bool operator==(const MeasurementOutcome &, const MeasurementOutcome &) = default;
};

struct PosteriorDistribution {
    std::vector<double> p; ///< p(k' | outcome), k' in Z_{2^n}
    MeasurementOutcome outcome;
    int T = 0;
    int n = 1;
};

struct BlochEstimate {
    double z = 0.0;
    double x = 0.0;
    double norm = 0.0;
};

namespace detail {

inline void check_key(std::uint64_t k, int n, const char *where) {
    require(n >= 1 && n <= kMaxSumResolution, std::string(where) + ": n must lie in [1, 20]");
    require(k < (std::uint64_t{1} << n), std::string(where) + ": k must lie in Z_{2^n}");
}

inline void check_outcome(const MeasurementOutcome &o, int T, const char *where) {
    require(T >= 0, std::string(where) + ": T must be >= 0");
    require(o.T0z >= 0 && o.T0z <= T && o.T0x >= 0 && o.T0x <= T,
            std::string(where) + ": outcome counts must lie in [0, T]");
}

/// B(T, a) p0^a (1 - p0)^(T - a); log-space above T = 30.
inline double binomial_pmf(int T, int a, double p0) {
    const double p1 = 1.0 - p0;
    if (T <= 30) {
        return binomial(T, a) * std::pow(p0, a) * std::pow(p1, T - a);
    }
    if ((p0 <= 0.0 && a > 0) || (p1 <= 0.0 && a < T)) {
        return 0.0;
    }
    double log_p = log_binomial(T, a);
    if (a > 0) {
        log_p += a * std::log(p0);
    }
    if (a < T) {
        log_p += (T - a) * std::log(p1);
    }
    return std::exp(log_p);
}

} // namespace detail

/**
 * Probability of outcome (0 or 1) when the key-k qubit is measured in basis b:
 * p0 = cos^2(beta pi/4 - k theta_n / 2) with beta = 0 for z, 1 for x.
 */
inline double outcome_prob_single(Basis basis, int outcome, std::uint64_t k, int n) {
    detail::require(outcome == 0 || outcome == 1, "outcome_prob_single: outcome must be 0 or 1");
    detail::require(n >= 1 && n <= 52, "outcome_prob_single: n must lie in [1, 52]");
    detail::require(k < (std::uint64_t{1} << n), "outcome_prob_single: k must lie in Z_{2^n}");
    double c;
    if (basis == Basis::Z) {
        c = detail::cos_sin_pi_dyadic(static_cast<std::int64_t>(k), n).first;
    } else {
        // (pi/4 - k pi / 2^n) in units of pi / 2^(n+1)
        const std::int64_t num = (std::int64_t{1} << (n - 1)) - 2 * static_cast<std::int64_t>(k);
        c = detail::cos_sin_pi_dyadic(num, n + 1).first;
    }
    const double p0 = c * c;
    return outcome == 0 ? p0 : 1.0 - p0;
}

/// q(T0z, T0x | k): product of the two binomial likelihoods.
inline double likelihood(const MeasurementOutcome &o, std::uint64_t k, int T, int n) {
    detail::check_outcome(o, T, "likelihood");
    detail::require(n >= 1 && n <= 52, "likelihood: n must lie in [1, 52]");
    return detail::binomial_pmf(T, o.T0z, outcome_prob_single(Basis::Z, 0, k, n)) *
           detail::binomial_pmf(T, o.T0x, outcome_prob_single(Basis::X, 0, k, n));
}

/// q(T0z, T0x): likelihood averaged over a uniform key.
inline double evidence(const MeasurementOutcome &o, int T, int n) {
    detail::check_outcome(o, T, "evidence");
    detail::require(n >= 1 && n <= kMaxSumResolution, "evidence: n must lie in [1, 20]");
    const std::uint64_t size = std::uint64_t{1} << n;
    std::vector<double> terms(size);
    for (std::uint64_t k = 0; k < size; ++k) {
        terms[k] = likelihood(o, k, T, n);
    }
    return std::ldexp(detail::pairwise_sum(terms), -n);
}

/// Bayes update of the uniform prior; throws ImpossibleEvent on zero evidence.
inline PosteriorDistribution posterior(const MeasurementOutcome &o, int T, int n) {
    detail::check_outcome(o, T, "posterior");
    detail::require(n >= 1 && n <= kMaxSumResolution, "posterior: n must lie in [1, 20]");
    const std::uint64_t size = std::uint64_t{1} << n;
    PosteriorDistribution post;
    post.outcome = o;
    post.T = T;
    post.n = n;
    post.p.resize(size);
    for (std::uint64_t k = 0; k < size; ++k) {
        post.p[k] = likelihood(o, k, T, n);
    }
    const double total = detail::pairwise_sum(post.p);
    if (!(total > 0.0)) {
        throw ImpossibleEvent("posterior: outcome has zero probability for every key");
    }
    for (double &v : post.p) {
        v /= total;
    }
    return post;
}

/// Posterior-mean Bloch vector sum_k p(k) (cos k theta_n, sin k theta_n).
inline BlochEstimate bloch_estimate(std::span<const double> p, int n) {
    detail::require(p.size() == (std::size_t{1} << n), "bloch_estimate: need 2^n probabilities");
    std::vector<double> zs(p.size());
    std::vector<double> xs(p.size());
    for (std::size_t k = 0; k < p.size(); ++k) {
        const auto [c, s] = detail::cos_sin_pi_dyadic(static_cast<std::int64_t>(2 * k), n);
        zs[k] = p[k] * c;
        xs[k] = p[k] * s;
    }
    BlochEstimate e;
    e.z = detail::pairwise_sum(zs);
    e.x = detail::pairwise_sum(xs);
    e.norm = std::hypot(e.z, e.x);
    return e;
}

inline BlochEstimate bloch_estimate(const PosteriorDistribution &post) {
    return bloch_estimate(post.p, post.n);
}

/// Estimates shorter than this are treated as the zero vector.
inline constexpr double kDegenerateEstimateNorm = 1e-12;

/**
 * cos^2(Omega/2) = 1/2 + (R_est . R_k) / (2 |R_est|), the probability that a
 * cipher measurement along the estimate returns the true bit. A vanishing
 * estimate carries no direction and yields the guessing value 1/2.
 */
inline double success_given_estimate(std::uint64_t k, int n, const BlochEstimate &est) {
    if (est.norm < kDegenerateEstimateNorm) {
        return 0.5;
    }
    const auto [c, s] = detail::cos_sin_pi_dyadic(static_cast<std::int64_t>(2 * k), n);
    const double v = 0.5 + (est.z * c + est.x * s) / (2.0 * est.norm);
    return std::clamp(v, 0.0, 1.0);
}

inline double success_given_outcome(std::uint64_t k, const PosteriorDistribution &post) {
    detail::check_key(k, post.n, "success_given_outcome");
    return success_given_estimate(k, post.n, bloch_estimate(post));
}

/// Posterior operator of tau copies after the outcome in post.
inline SymmetricDensityOperator posterior_density(int tau, const PosteriorDistribution &post) {
    return weighted_density(tau, post.n, post.p);
}

/**
 * Every outcome of the (T, n) experiment with its likelihood row, evidence
 * and posterior-mean Bloch vector. Memory is (T+1)^2 * 2^n doubles.
 */
class OutcomeTable {
  public:
    OutcomeTable(int T, int n) : T_(T), n_(n) {
        detail::require(T >= 0, "OutcomeTable: T must be >= 0");
        detail::require(n >= 1 && n <= kMaxTableResolution, "OutcomeTable: n must lie in [1, 14]");
        const std::size_t keys = std::size_t{1} << n;
        const int side = T + 1;
        std::vector<double> pz(keys);
        std::vector<double> px(keys);
        for (std::size_t k = 0; k < keys; ++k) {
            pz[k] = outcome_prob_single(Basis::Z, 0, k, n);
            px[k] = outcome_prob_single(Basis::X, 0, k, n);
        }
        // Binomial factors per basis, reused across the outcome grid.
        std::vector<double> fz(static_cast<std::size_t>(side) * keys);
        std::vector<double> fx(static_cast<std::size_t>(side) * keys);
        for (int a = 0; a < side; ++a) {
            for (std::size_t k = 0; k < keys; ++k) {
                fz[a * keys + k] = detail::binomial_pmf(T, a, pz[k]);
                fx[a * keys + k] = detail::binomial_pmf(T, a, px[k]);
            }
        }
        likelihood_.resize(static_cast<std::size_t>(side * side) * keys);
        evidence_.resize(static_cast<std::size_t>(side * side));
        estimates_.resize(static_cast<std::size_t>(side * side));
        std::vector<double> post(keys);
        for (int a = 0; a < side; ++a) {
            for (int b = 0; b < side; ++b) {
                const std::size_t idx = index({a, b});
                double *row = likelihood_.data() + idx * keys;
                for (std::size_t k = 0; k < keys; ++k) {
                    row[k] = fz[a * keys + k] * fx[b * keys + k];
                }
                const double total = detail::pairwise_sum({row, keys});
                evidence_[idx] = std::ldexp(total, -n);
                if (total > 0.0) {
                    for (std::size_t k = 0; k < keys; ++k) {
                        post[k] = row[k] / total;
                    }
                    estimates_[idx] = bloch_estimate(post, n);
                }
            }
        }
    }

    [[nodiscard]] int T() const { return T_; }
    [[nodiscard]] int n() const { return n_; }
    [[nodiscard]] std::size_t keys() const { return std::size_t{1} << n_; }
    [[nodiscard]] std::size_t outcomes() const { return static_cast<std::size_t>((T_ + 1) * (T_ + 1)); }

    [[nodiscard]] std::size_t index(const MeasurementOutcome &o) const {
        return static_cast<std::size_t>(o.T0z * (T_ + 1) + o.T0x);
    }
    [[nodiscard]] MeasurementOutcome outcome(std::size_t idx) const {
        return {static_cast<int>(idx) / (T_ + 1), static_cast<int>(idx) % (T_ + 1)};
    }

    [[nodiscard]] std::span<const double> likelihood_row(std::size_t idx) const {
        return {likelihood_.data() + idx * keys(), keys()};
    }
    [[nodiscard]] double evidence(std::size_t idx) const { return evidence_[idx]; }
    [[nodiscard]] const BlochEstimate &estimate(std::size_t idx) const { return estimates_[idx]; }

    /// P(suc | k) for every key.
    [[nodiscard]] std::vector<double> success_per_key() const {
        std::vector<double> out(keys());
        std::vector<double> terms(outcomes());
        for (std::size_t k = 0; k < keys(); ++k) {
            for (std::size_t idx = 0; idx < outcomes(); ++idx) {
                const double q = likelihood_[idx * keys() + k];
                terms[idx] = q > 0.0 ? q * success_given_estimate(k, n_, estimates_[idx]) : 0.0;
            }
            out[k] = detail::pairwise_sum(terms);
        }
        return out;
    }

    [[nodiscard]] double mean_success() const {
        const auto per_key = success_per_key();
        return std::ldexp(detail::pairwise_sum(per_key), -n_);
    }

    /// n + sum_outcomes q sum_k p log2 p, in bits.
    [[nodiscard]] double information_gain() const {
        std::vector<double> terms(outcomes());
        std::vector<double> inner(keys());
        for (std::size_t idx = 0; idx < outcomes(); ++idx) {
            const double q = evidence_[idx];
            if (!(q > 0.0)) {
                terms[idx] = 0.0;
                continue;
            }
            const auto row = likelihood_row(idx);
            const double total = std::ldexp(q, n_);
            for (std::size_t k = 0; k < keys(); ++k) {
                inner[k] = detail::xlog2x(row[k] / total);
            }
            terms[idx] = q * detail::pairwise_sum(inner);
        }
        return static_cast<double>(n_) + detail::pairwise_sum(terms);
    }

  private:
    int T_;
    int n_;
    std::vector<double> likelihood_;
    std::vector<double> evidence_;
    std::vector<BlochEstimate> estimates_;
};

/// Average information gain on a key from T measurements per basis.
inline double information_gain(int T, int n) {
    return OutcomeTable(T, n).information_gain();
}

/**
 * P(suc | k): success averaged over every outcome the key-k qubit can
 * produce. The encrypted bit does not enter, the estimate is formed from
 * public-key copies alone.
 */
inline double success_given_key(std::uint64_t k, int T, int n) {
    detail::require(T >= 1, "success_given_key: T must be >= 1");
    detail::require(n >= 1 && n <= kMaxTableResolution, "success_given_key: n must lie in [1, 14]");
    detail::check_key(k, n, "success_given_key");
    const OutcomeTable table(T, n);
    std::vector<double> terms(table.outcomes());
    for (std::size_t idx = 0; idx < table.outcomes(); ++idx) {
        const double q = table.likelihood_row(idx)[k];
        terms[idx] = q > 0.0 ? q * success_given_estimate(k, n, table.estimate(idx)) : 0.0;
    }
    return detail::pairwise_sum(terms);
}

inline double mean_success(int T, int n) {
    detail::require(T >= 1, "mean_success: T must be >= 1");
    return OutcomeTable(T, n).mean_success();
}

/// 1 - 1/(6T), the empirical bound on mean_success; defined for T > 1.
inline double bound_U(int T) {
    detail::require(T > 1, "bound_U: T must be > 1");
    return 1.0 - 1.0 / (6.0 * T);
}

/// Optimal collective-measurement success for 2T copies.
inline double optimal_collective(int T) {
    detail::require(T >= 1, "optimal_collective: T must be >= 1");
    const int m = 2 * T;
    const double log_norm = (m + 1) * std::numbers::ln2;
    std::vector<double> terms(m);
    for (int i = 0; i < m; ++i) {
        terms[i] = std::exp(0.5 * (detail::log_binomial(m, i) + detail::log_binomial(m, i + 1)) - log_norm);
    }
    return 0.5 + detail::pairwise_sum(terms);
}

/**
 * Probability that an even number of the s independent bit guesses are
 * wrong, each bit being right with probability p_bit. Evaluated through the
 * closed form 1/2 + (2p - 1)^s / 2.
 */
inline double codeword_success(double p_bit, int s) {
    detail::require(p_bit >= 0.0 && p_bit <= 1.0, "codeword_success: p_bit must lie in [0, 1]");
    detail::require(s >= 0, "codeword_success: s must be >= 0");
    return 0.5 + 0.5 * std::pow(2.0 * p_bit - 1.0, s);
}

/// 1/2 + (1/2)(1 - 1/(3T))^s; defined for T > 1.
inline double codeword_bound(int T, int s) {
    detail::require(T > 1, "codeword_bound: T must be > 1");
    detail::require(s >= 0, "codeword_bound: s must be >= 0");
    return 0.5 + 0.5 * std::pow(1.0 - 1.0 / (3.0 * T), s);
}

namespace detail {

/// Integer ceiling that ignores round-off just above an integer.
inline long long ceil_length(double x) {
    return static_cast<long long>(std::ceil(x - 1e-9));
}

inline void check_epsilon(double epsilon, const char *where) {
    require(epsilon > 0.0 && epsilon <= 0.5, std::string(where) + ": epsilon must lie in (0, 1/2]");
}

} // namespace detail

struct CodewordLength {
    long long s_exact = 0;  ///< from the exact (3T-1)/(3T) decay rate
    long long s_simple = 0; ///< the simpler sufficient length 3T|1 + log2 eps|
};

/// Codeword length keeping the projective-attack advantage below epsilon.
inline CodewordLength required_codeword_length(double epsilon, int T) {
    detail::check_epsilon(epsilon, "required_codeword_length");
    detail::require(T > 1, "required_codeword_length: T must be > 1");
    const double bits = std::abs(1.0 + std::log2(epsilon));
    const double rate = std::log2((3.0 * T - 1.0) / (3.0 * T));
    return {detail::ceil_length(std::abs(bits / rate)), detail::ceil_length(3.0 * T * bits)};
}

} // namespace qpke
