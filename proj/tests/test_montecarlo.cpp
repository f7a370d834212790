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


#include "qpke/montecarlo.hpp"

#include <cmath>
#include <numbers>

#include "gtest/gtest.h"
#include "qpke/symmetry_attack.hpp"

using namespace qpke;

namespace {

TrialConfig config(AttackKind attack, int n, int T, int s, long long trials, std::uint64_t seed) {
    TrialConfig cfg;
    cfg.params = {n, s, T, s};
    cfg.attack = attack;
    cfg.trials = trials;
    cfg.seed = seed;
    return cfg;
}

double z_score(const EstimateWithError &e, double expected) {
    const double se = std::sqrt(expected * (1.0 - expected) / static_cast<double>(e.trials));
    return (e.mean - expected) / se;
}

} // namespace

TEST(AttackKind, names) {
    EXPECT_EQ(to_string(AttackKind::BayesProjective), "bayes-projective");
    EXPECT_EQ(to_string(AttackKind::SymmetryTest), "symmetry-test");
}

TEST(SampleMeasurement, born_rule_frequency) {
    TrialRng rng = trial_stream(7, 0);
    const auto q = QubitAngle::from_radians(std::numbers::pi / 3);
    constexpr int draws = 200000;
    int zeros = 0;
    for (int i = 0; i < draws; ++i) {
        zeros += sample_measurement(q, 0.0, rng) == 0;
    }
    const double se = std::sqrt(0.75 * 0.25 / draws);
    EXPECT_NEAR(zeros / static_cast<double>(draws), 0.75, 5 * se);
}

TEST(SampleMeasurement, deterministic_on_basis_states) {
    TrialRng rng = trial_stream(7, 1);
    const auto q = QubitAngle::exact(1, 2); // angle pi/2
    for (int i = 0; i < 1000; ++i) {
        EXPECT_EQ(sample_measurement(q, std::numbers::pi / 2, rng), 0);
        EXPECT_EQ(sample_measurement(q, -std::numbers::pi / 2, rng), 1);
    }
}

TEST(TrialStream, distinct_and_repeatable) {
    EXPECT_EQ(trial_stream(5, 3)(), trial_stream(5, 3)());
    EXPECT_NE(trial_stream(5, 3)(), trial_stream(5, 4)());
    EXPECT_NE(trial_stream(5, 3)(), trial_stream(6, 3)());
}

TEST(Estimate, bayes_is_perfect_at_n1) {
    const auto e = estimate(config(AttackKind::BayesProjective, 1, 1, 3, 2000, 11));
    EXPECT_EQ(e.successes, 2000);
    EXPECT_EQ(e.standard_error, 0.0);
}

TEST(Estimate, aligned_symmetry_test_always_wins) {
    auto cfg = config(AttackKind::SymmetryTest, 10, 1, 4, 2000, 12);
    cfg.forced_omega = 0.0;
    EXPECT_EQ(estimate(cfg).successes, 2000);
    cfg.forced_omega = std::numbers::pi; // both outcomes wrong, parity still right
    EXPECT_EQ(estimate(cfg).successes, 2000);
}

TEST(Estimate, orthogonal_symmetry_test_is_a_coin_flip) {
    auto cfg = config(AttackKind::SymmetryTest, 10, 1, 1, 40000, 13);
    cfg.forced_omega = std::numbers::pi / 2;
    EXPECT_LT(std::abs(z_score(estimate(cfg), 0.5)), 5.0);
}

TEST(Estimate, symmetry_test_matches_average) {
    for (int s : {1, 2, 3}) {
        const auto e = estimate(config(AttackKind::SymmetryTest, 10, 1, s, 50000, 100 + s));
        EXPECT_LT(std::abs(z_score(e, average_success_symmetry(s))), 5.0) << "s=" << s;
    }
}

TEST(Estimate, bayes_matches_mean_success) {
    for (int T : {1, 3}) {
        for (int s : {1, 2}) {
            const auto e = estimate(config(AttackKind::BayesProjective, 6, T, s, 20000, 200 + 10 * T + s));
            const double expected = codeword_success(mean_success(T, 6), s);
            EXPECT_LT(std::abs(z_score(e, expected)), 5.0) << "T=" << T << " s=" << s;
        }
    }
}

TEST(Estimate, reproducible_and_thread_independent) {
    auto cfg = config(AttackKind::BayesProjective, 5, 2, 2, 5000, 99);
    const auto a = estimate(cfg);
    EXPECT_EQ(estimate(cfg).successes, a.successes);
    cfg.threads = 3;
    EXPECT_EQ(estimate(cfg).successes, a.successes);

    auto sym = config(AttackKind::SymmetryTest, 10, 1, 2, 5000, 99);
    const auto b = estimate(sym);
    sym.threads = 4;
    EXPECT_EQ(estimate(sym).successes, b.successes);
}

TEST(Estimate, disjoint_seeds_agree_statistically) {
    const auto a = estimate(config(AttackKind::SymmetryTest, 10, 1, 2, 40000, 1));
    const auto b = estimate(config(AttackKind::SymmetryTest, 10, 1, 2, 40000, 2));
    EXPECT_NE(a.successes, b.successes);
    const double se = std::hypot(a.standard_error, b.standard_error);
    EXPECT_LT(std::abs(a.mean - b.mean), 6 * se);
}

TEST(Estimate, standard_error_scales_with_trials) {
    const auto small = estimate(config(AttackKind::SymmetryTest, 10, 1, 1, 10000, 3));
    const auto large = estimate(config(AttackKind::SymmetryTest, 10, 1, 1, 40000, 3));
    EXPECT_NEAR(small.standard_error / large.standard_error, 2.0, 0.1);
    EXPECT_NEAR(small.standard_error, std::sqrt(small.mean * (1 - small.mean) / 10000), 1e-15);
}

TEST(Estimate, rejects_bad_config) {
    auto cfg = config(AttackKind::SymmetryTest, 10, 1, 1, 0, 3);
    EXPECT_THROW(estimate(cfg), std::invalid_argument);
    cfg.trials = 10;
    cfg.threads = 0;
    EXPECT_THROW(estimate(cfg), std::invalid_argument);
    cfg.threads = 1;
    cfg.params.N = 0;
    EXPECT_THROW(estimate(cfg), std::invalid_argument);
}

TEST(BayesProjectiveAttack, table_must_match_params) {
    BayesProjectiveAttack attack(2, 3);
    TrialRng rng = trial_stream(1, 0);
    EXPECT_THROW(attack.run_trial(ProtocolParams{3, 1, 3, 1}, rng), std::invalid_argument);
    EXPECT_NO_THROW(attack.run_trial(ProtocolParams{3, 1, 2, 1}, rng));
}

TEST(RunTrial, single_trial_helpers) {
    TrialRng rng = trial_stream(4, 0);
    auto cfg = config(AttackKind::BayesProjective, 1, 1, 2, 1, 4);
    EXPECT_TRUE(run_bayes_trial(cfg, rng));
    cfg.attack = AttackKind::SymmetryTest;
    cfg.forced_omega = 0.0;
    EXPECT_TRUE(run_symmetry_trial(cfg, rng));
}
