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

#include "qpke/protocol.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "gtest/gtest.h"

using namespace qpke;

namespace {

constexpr double kPi = std::numbers::pi;

// Pearson chi-square against a uniform distribution; the 3-sigma cut uses
// the normal approximation mean = dof, variance = 2 dof.
template <std::size_t K>
void expect_uniform(const std::array<long long, K> &counts, long long draws) {
    const double expected = static_cast<double>(draws) / K;
    double chi2 = 0.0;
    for (long long c : counts) {
        const double d = static_cast<double>(c) - expected;
        chi2 += d * d / expected;
    }
    const double dof = K - 1.0;
    EXPECT_LT(chi2, dof + 3.0 * std::sqrt(2.0 * dof)) << "chi2 = " << chi2;
    // Per-bin binomial 3-sigma window as well.
    const double p = 1.0 / K;
    const double sigma = std::sqrt(draws * p * (1.0 - p));
    for (long long c : counts) {
        EXPECT_NEAR(static_cast<double>(c), expected, 3.0 * sigma);
    }
}

} // namespace

TEST(ElementaryAngle, known_values) {
    EXPECT_EQ(elementary_angle(1), kPi);
    EXPECT_EQ(elementary_angle(2), kPi / 2);
    EXPECT_EQ(elementary_angle(10), kPi / 512);
}

TEST(ElementaryAngle, rejects_zero) {
    EXPECT_THROW(elementary_angle(0), std::invalid_argument);
    EXPECT_THROW(elementary_angle(53), std::invalid_argument);
}

TEST(ProtocolParams, validation) {
    EXPECT_NO_THROW((ProtocolParams{10, 4, 2, 4}.validate()));
    EXPECT_THROW((ProtocolParams{0, 4, 2, 4}.validate()), std::invalid_argument);
    EXPECT_THROW((ProtocolParams{10, 3, 2, 4}.validate()), std::invalid_argument);
    EXPECT_THROW((ProtocolParams{10, 4, 0, 4}.validate()), std::invalid_argument);
    EXPECT_THROW((ProtocolParams{10, 4, 1, 0}.validate()), std::invalid_argument);
}

TEST(GeneratePrivateKey, reproducible_and_in_range) {
    const ProtocolParams params{1, 3, 1, 1};
    std::mt19937_64 a(42);
    std::mt19937_64 b(42);
    const auto ka = generate_private_key(params, a);
    const auto kb = generate_private_key(params, b);
    ASSERT_EQ(ka.k.size(), 3u);
    EXPECT_EQ(ka.k, kb.k);
    for (auto k : ka.k) {
        EXPECT_LE(k, 1u);
    }

    std::mt19937_64 c(7);
    const auto single = generate_private_key(ProtocolParams{10, 1, 1, 1}, c);
    ASSERT_EQ(single.k.size(), 1u);
    EXPECT_LE(single.k[0], 1023u);
}

TEST(GeneratePrivateKey, uniform_over_key_space) {
    constexpr long long kDraws = 100000;
    std::mt19937_64 rng(2026);
    std::array<long long, 4> counts{};
    const ProtocolParams params{2, 1, 1, 1};
    for (long long i = 0; i < kDraws; ++i) {
        ++counts[generate_private_key(params, rng).k[0]];
    }
    expect_uniform(counts, kDraws);

    std::array<long long, 8> counts3{};
    const ProtocolParams params3{3, 1, 1, 1};
    for (long long i = 0; i < kDraws; ++i) {
        ++counts3[generate_private_key(params3, rng).k[0]];
    }
    expect_uniform(counts3, kDraws);
}

TEST(PublicQubitState, basis_states) {
    const auto zero = public_qubit_state(0, 5);
    EXPECT_EQ(zero.radians(), 0.0);
    EXPECT_EQ(zero.amplitudes(), (std::pair{1.0, 0.0}));

    const auto one = public_qubit_state(2, 2);
    EXPECT_DOUBLE_EQ(one.radians(), kPi);
    EXPECT_EQ(one.amplitudes(), (std::pair{0.0, 1.0}));

    const auto plus = public_qubit_state(1, 2);
    EXPECT_DOUBLE_EQ(plus.radians(), kPi / 2);
    EXPECT_EQ(plus.bloch(), (std::pair{0.0, 1.0}));
}

TEST(PublicQubitState, rejects_out_of_range_key) {
    EXPECT_THROW(public_qubit_state(4, 2), std::invalid_argument);
}

TEST(EncryptBit, rotation_by_pi) {
    const auto q = QubitAngle::exact(3, 4);
    EXPECT_EQ(encrypt_bit(q, 0), q);
    EXPECT_DOUBLE_EQ(encrypt_bit(QubitAngle::exact(0, 3), 1).radians(), kPi);
    EXPECT_DOUBLE_EQ(encrypt_bit(QubitAngle::exact(1, 2), 1).radians(), 3 * kPi / 2);

    // Continuous angles wrap modulo 2pi.
    EXPECT_DOUBLE_EQ(encrypt_bit(QubitAngle::from_radians(kPi / 2), 1).radians(), 3 * kPi / 2);
    EXPECT_NEAR(encrypt_bit(QubitAngle::from_radians(3 * kPi / 2), 1).radians(), kPi / 2, 1e-15);
}

TEST(EncryptBit, exact_shift_is_half_turn) {
    for (int n = 1; n <= 12; ++n) {
        const std::uint64_t size = std::uint64_t{1} << n;
        for (std::uint64_t k = 0; k < size; k += std::max<std::uint64_t>(1, size / 16)) {
            const auto c = encrypt_bit(public_qubit_state(k, n), 1);
            ASSERT_TRUE(c.is_exact());
            EXPECT_EQ((c.exact_form().k + size - k) % size, size / 2);
            EXPECT_EQ(encrypt_bit(c, 1), public_qubit_state(k, n));
        }
    }
}

TEST(EncodeMessage, single_bit_codeword) {
    std::mt19937_64 rng(1);
    const auto cw = encode_message(0, 1, rng);
    EXPECT_EQ(cw.w, (std::vector<std::uint8_t>{0}));
    EXPECT_EQ(encode_message(1, 1, rng).w, (std::vector<std::uint8_t>{1}));
}

TEST(EncodeMessage, parity_always_matches) {
    std::mt19937_64 rng(99);
    for (int s = 1; s <= 9; ++s) {
        for (int i = 0; i < 500; ++i) {
            const std::uint8_t m = static_cast<std::uint8_t>(i & 1);
            EXPECT_EQ(encode_message(m, s, rng).parity(), m);
        }
    }
}

TEST(EncodeMessage, uniform_over_codewords_of_given_parity) {
    constexpr long long kDraws = 100000;
    std::mt19937_64 rng(31337);
    std::array<long long, 2> two{};
    for (long long i = 0; i < kDraws; ++i) {
        const auto cw = encode_message(1, 2, rng);
        ASSERT_EQ(cw.parity(), 1);
        ++two[cw.w[0]]; // (0,1) or (1,0)
    }
    expect_uniform(two, kDraws);

    // s = 4, m = 0: eight even-weight words.
    std::array<long long, 8> eight{};
    for (long long i = 0; i < kDraws; ++i) {
        const auto cw = encode_message(0, 4, rng);
        ++eight[cw.w[0] | (cw.w[1] << 1) | (cw.w[2] << 2)];
    }
    expect_uniform(eight, kDraws);
}

TEST(Decrypt, round_trip_exhaustive_small) {
    // n = 2, s = 2: all 16 keys and all 4 codewords.
    const ProtocolParams params{2, 2, 1, 2};
    for (std::uint64_t k0 = 0; k0 < 4; ++k0) {
        for (std::uint64_t k1 = 0; k1 < 4; ++k1) {
            const PrivateKey key{2, {k0, k1}};
            for (int word = 0; word < 4; ++word) {
                Codeword cw{{static_cast<std::uint8_t>(word & 1), static_cast<std::uint8_t>(word >> 1)}};
                const auto d = decrypt(encrypt(cw, key), key, params);
                EXPECT_EQ(d.bits, cw.w);
                EXPECT_EQ(d.message, cw.parity());
            }
        }
    }
}

TEST(Decrypt, exhaustive_up_to_n4_s4) {
    for (int n = 1; n <= 4; ++n) {
        for (int s = 1; s <= 4; ++s) {
            const ProtocolParams params{n, s, 1, s};
            const std::uint64_t keys = std::uint64_t{1} << (n * s);
            for (std::uint64_t idx = 0; idx < keys; ++idx) {
                PrivateKey key{n, {}};
                for (int j = 0; j < s; ++j) {
                    key.k.push_back((idx >> (n * j)) & ((1u << n) - 1));
                }
                for (std::uint32_t word = 0; word < (1u << s); ++word) {
                    Codeword cw;
                    for (int j = 0; j < s; ++j) {
                        cw.w.push_back(static_cast<std::uint8_t>((word >> j) & 1u));
                    }
                    const auto c = encrypt(cw, key);
                    const auto d = decrypt(c, key, params);
                    ASSERT_EQ(d.bits, cw.w);
                    ASSERT_EQ(d.message, cw.parity());
                }
            }
        }
    }
}

TEST(Decrypt, message_zero_round_trip_random) {
    std::mt19937_64 rng(5);
    const ProtocolParams params{10, 8, 1, 8};
    for (int i = 0; i < 200; ++i) {
        const auto key = generate_private_key(params, rng);
        const auto cw = encode_message(0, params.s, rng);
        EXPECT_EQ(decrypt(encrypt(cw, key), key, params).message, 0);
    }
}

TEST(Decrypt, single_qubit) {
    const ProtocolParams params{2, 1, 1, 1};
    const PrivateKey key{2, {3}};
    const CipherState c{{encrypt_bit(public_qubit_state(3, 2), 1)}};
    const auto d = decrypt(c, key, params);
    EXPECT_EQ(d.bits, (std::vector<std::uint8_t>{1}));
    EXPECT_EQ(d.message, 1);
}

TEST(Decrypt, continuous_angle_cipher) {
    const ProtocolParams params{3, 1, 1, 1};
    const PrivateKey key{3, {5}};
    const double angle = 5 * elementary_angle(3) + kPi;
    const CipherState c{{QubitAngle::from_radians(angle)}};
    EXPECT_EQ(decrypt(c, key, params).message, 1);
}

TEST(Decrypt, errors) {
    const ProtocolParams params{2, 2, 1, 2};
    const PrivateKey key{2, {0, 1}};
    const CipherState too_short{{public_qubit_state(0, 2)}};
    EXPECT_THROW(decrypt(too_short, key, params), std::invalid_argument);

    const CipherState tampered{{public_qubit_state(1, 2), public_qubit_state(1, 2)}};
    EXPECT_THROW(decrypt(tampered, key, params), std::domain_error);
}
