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
 * Seeded simulation of complete protocol runs under each attack.
 *
 * Trial i draws from its own generator, seeded from (master seed, i), so an
 * estimate depends only on the seed and the trial count, never on how the
 * trials are split across threads.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string_view>
#include <thread>
#include <vector>

#include "qpke/bayes_attack.hpp"
#include "qpke/protocol.hpp"

namespace qpke {

enum class AttackKind { BayesProjective, SymmetryTest };

inline std::string_view to_string(AttackKind kind) {
    return kind == AttackKind::BayesProjective ? "bayes-projective" : "symmetry-test";
}

struct TrialConfig {
    ProtocolParams params;
    AttackKind attack = AttackKind::SymmetryTest;
    long long trials = 1000;
    std::uint64_t seed = 1;
    /// Symmetry test only: fix omega = k_j theta_n - phi_j instead of drawing phi_j.
    std::optional<double> forced_omega;
    unsigned threads = 1;

    void validate() const {
        params.validate();
        detail::require(trials >= 1, "TrialConfig: trials must be >= 1");
        detail::require(threads >= 1, "TrialConfig: threads must be >= 1");
    }
};

struct EstimateWithError {
    double mean = 0.0;
    double standard_error = 0.0; ///< sqrt(p (1 - p) / trials)
    long long trials = 0;
    long long successes = 0;
};

using TrialRng = std::mt19937_64;

/// Generator for trial `index`, independent of every other trial's stream.
inline TrialRng trial_stream(std::uint64_t master_seed, std::uint64_t index) {
    // splitmix64 finalizer over a counter offset by the master seed
    std::uint64_t z = master_seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return TrialRng(z);
}

/// Projective measurement along basis_angle: returns 0 with probability cos^2((phi - basis)/2).
template <class Rng>
int sample_measurement(const QubitAngle &q, double basis_angle, Rng &rng) {
    const double c = std::cos((q.radians() - basis_angle) / 2.0);
    const double p0 = c * c;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return u(rng) < p0 ? 0 : 1;
}

/**
 * The projective attack with its outcome table precomputed for (T, n).
 *
 * Each trial samples the 2T single-qubit measurements per codeword position,
 * looks up the posterior-mean Bloch vector for the resulting counts and
 * measures the cipher qubit along it. The counts are sufficient statistics,
 * so the cached estimate is the one a full posterior would give.
 */
class BayesProjectiveAttack {
  public:
    BayesProjectiveAttack(int T, int n) : table_(T, n) {}

    [[nodiscard]] const OutcomeTable &table() const { return table_; }

    template <class Rng>
    bool run_trial(const ProtocolParams &params, Rng &rng) const {
        detail::require(params.T == table_.T() && params.n == table_.n(),
                        "BayesProjectiveAttack: params do not match the precomputed table");
        const PrivateKey key = generate_private_key(params, rng);
        const auto m = static_cast<std::uint8_t>(std::bernoulli_distribution(0.5)(rng));
        const Codeword cw = encode_message(m, params.s, rng);
        const CipherState cipher = encrypt(cw, key);

        std::uint8_t guess = 0;
        for (int j = 0; j < params.s; ++j) {
            const QubitAngle pub = public_qubit_state(key.k[j], params.n);
            MeasurementOutcome counts;
            for (int t = 0; t < params.T; ++t) {
                counts.T0z += sample_measurement(pub, 0.0, rng) == 0 ? 1 : 0;
                counts.T0x += sample_measurement(pub, std::numbers::pi / 2.0, rng) == 0 ? 1 : 0;
            }
            const BlochEstimate &est = table_.estimate(table_.index(counts));
            std::uint8_t bit;
            if (est.norm < kDegenerateEstimateNorm) {
                bit = std::bernoulli_distribution(0.5)(rng) ? 1 : 0;
            } else {
                bit = static_cast<std::uint8_t>(sample_measurement(cipher.qubits[j], std::atan2(est.x, est.z), rng));
            }
            guess ^= bit;
        }
        return guess == m;
    }

  private:
    OutcomeTable table_;
};

/// Builds the outcome table on every call; estimate() shares one across trials.
template <class Rng>
bool run_bayes_trial(const TrialConfig &cfg, Rng &rng) {
    cfg.validate();
    return BayesProjectiveAttack(cfg.params.T, cfg.params.n).run_trial(cfg.params, rng);
}

template <class Rng>
bool run_symmetry_trial(const TrialConfig &cfg, Rng &rng) {
    const ProtocolParams &params = cfg.params;
    const PrivateKey key = generate_private_key(params, rng);
    const auto m = static_cast<std::uint8_t>(std::bernoulli_distribution(0.5)(rng));
    const Codeword cw = encode_message(m, params.s, rng);
    const CipherState cipher = encrypt(cw, key);

    std::uniform_real_distribution<double> basis(0.0, 2.0 * std::numbers::pi);
    std::uint8_t guess = 0;
    for (int j = 0; j < params.s; ++j) {
        const QubitAngle pub = public_qubit_state(key.k[j], params.n);
        const double phi = cfg.forced_omega ? pub.radians() - *cfg.forced_omega : basis(rng);
        const int a = sample_measurement(pub, phi, rng);
        const int b = sample_measurement(cipher.qubits[j], phi, rng);
        guess ^= static_cast<std::uint8_t>(a ^ b);
    }
    return guess == m;
}

inline EstimateWithError estimate(const TrialConfig &cfg) {
    cfg.validate();
    std::optional<BayesProjectiveAttack> bayes;
    if (cfg.attack == AttackKind::BayesProjective) {
        bayes.emplace(cfg.params.T, cfg.params.n);
    }

    auto run_range = [&](long long begin, long long end) {
        long long wins = 0;
        for (long long i = begin; i < end; ++i) {
            TrialRng rng = trial_stream(cfg.seed, static_cast<std::uint64_t>(i));
            const bool ok = bayes ? bayes->run_trial(cfg.params, rng) : run_symmetry_trial(cfg, rng);
            wins += ok ? 1 : 0;
        }
        return wins;
    };

    long long successes = 0;
    const unsigned workers = static_cast<unsigned>(std::min<long long>(cfg.threads, cfg.trials));
    if (workers <= 1) {
        successes = run_range(0, cfg.trials);
    } else {
        std::vector<long long> partial(workers, 0);
        {
            std::vector<std::jthread> pool;
            const long long chunk = (cfg.trials + workers - 1) / workers;
            for (unsigned w = 0; w < workers; ++w) {
                const long long begin = w * chunk;
                const long long end = std::min(cfg.trials, begin + chunk);
                pool.emplace_back([&, w, begin, end] { partial[w] = run_range(begin, end); });
            }
        }
        for (long long p : partial) {
            successes += p;
        }
    }

    EstimateWithError out;
    out.trials = cfg.trials;
    out.successes = successes;
    out.mean = static_cast<double>(successes) / static_cast<double>(cfg.trials);
    out.standard_error = std::sqrt(out.mean * (1.0 - out.mean) / static_cast<double>(cfg.trials));
    return out;
}

} // namespace qpke
