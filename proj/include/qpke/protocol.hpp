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
 * Key generation, public-key qubit states, parity-codeword encryption and
 * decryption for the single-qubit-rotation public-key scheme.
 *
 * A public-key qubit is cos(phi/2)|0_z> + sin(phi/2)|1_z> with
 * phi = k * theta_n, theta_n = pi / 2^(n-1) and k drawn uniformly from
 * Z_{2^n}. A message bit m is spread over a random s-bit codeword of parity
 * m and each codeword bit rotates its qubit by 0 or pi.
 */

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "qpke/common.hpp"

namespace qpke {

/// Largest resolution exponent accepted for exact angles.
inline constexpr int kMaxResolution = 52;

/**
 * The public parameters (n, N, T, s).
 *
 * T counts measurements per basis available to an adversary, so the number
 * of public-key copies handed out is 2T + 1 (one of them used for
 * encryption).
 */
struct ProtocolParams {
    int n = 10; ///< angle-resolution exponent
    int N = 1;  ///< public-key length in qubits
    int T = 1;  ///< measurements per basis
    int s = 1;  ///< codeword length

    void validate() const {
        detail::require(n >= 1 && n <= kMaxResolution, "ProtocolParams: n must lie in [1, 52]");
        detail::require(s >= 1, "ProtocolParams: s must be >= 1");
        detail::require(N >= s, "ProtocolParams: N must be >= s");
        detail::require(T >= 1, "ProtocolParams: T must be >= 1");
    }

    [[nodiscard]] std::uint64_t key_space() const { return std::uint64_t{1} << n; }
};

/// theta_n = pi / 2^(n-1). Exact in binary floating point.
inline double elementary_angle(int n) {
    detail::require(n >= 1 && n <= kMaxResolution, "elementary_angle: n must lie in [1, 52]");
    return std::ldexp(std::numbers::pi, 1 - n);
}

struct PrivateKey {
    int n = 1;
    std::vector<std::uint64_t> k;

    [[nodiscard]] std::size_t size() const { return k.size(); }
};

/// Angle k * theta_n kept as the integer pair (k mod 2^n, n).
struct ExactAngle {
    std::uint64_t k = 0;
    int n = 1;

    friend bool operator==(const ExactAngle &, const ExactAngle &) = default;
};

/**
 * A qubit on the x-z great circle of the Bloch sphere.
 *
 * The state is cos(phi/2)|0_z> + sin(phi/2)|1_z>, Bloch vector
 * cos(phi) z + sin(phi) x. Angles produced by the protocol stay in exact
 * integer form; radians are only formed when a probability is needed.
 */
class QubitAngle {
  public:
    static QubitAngle exact(std::uint64_t k, int n) {
        detail::require(n >= 1 && n <= kMaxResolution, "QubitAngle: n must lie in [1, 52]");
        const std::uint64_t mask = (std::uint64_t{1} << n) - 1;
        return QubitAngle(ExactAngle{k & mask, n});
    }

    static QubitAngle from_radians(double phi) {
        detail::require(std::isfinite(phi), "QubitAngle: angle must be finite");
        double r = std::fmod(phi, 2.0 * std::numbers::pi);
        if (r < 0.0) {
            r += 2.0 * std::numbers::pi;
        }
        if (r >= 2.0 * std::numbers::pi) {
            r = 0.0;
        }
        return QubitAngle(r);
    }

    [[nodiscard]] bool is_exact() const { return std::holds_alternative<ExactAngle>(value_); }
    [[nodiscard]] const ExactAngle &exact_form() const { return std::get<ExactAngle>(value_); }

    /// Angle in [0, 2pi).
    [[nodiscard]] double radians() const {
        if (const auto *e = std::get_if<ExactAngle>(&value_)) {
            return static_cast<double>(e->k) * elementary_angle(e->n);
        }
        return std::get<double>(value_);
    }

    /// (z, x) components of the Bloch vector.
    [[nodiscard]] std::pair<double, double> bloch() const {
        if (const auto *e = std::get_if<ExactAngle>(&value_)) {
            // phi = pi * 2k / 2^n
            return detail::cos_sin_pi_dyadic(static_cast<std::int64_t>(e->k) * 2, e->n);
        }
        const double phi = std::get<double>(value_);
        return {std::cos(phi), std::sin(phi)};
    }

    /// Amplitudes (<0_z|psi>, <1_z|psi>).
    [[nodiscard]] std::pair<double, double> amplitudes() const {
        if (const auto *e = std::get_if<ExactAngle>(&value_)) {
            return detail::cos_sin_pi_dyadic(static_cast<std::int64_t>(e->k), e->n);
        }
        const double half = std::get<double>(value_) / 2.0;
        return {std::cos(half), std::sin(half)};
    }

    friend bool operator==(const QubitAngle &, const QubitAngle &) = default;

  private:
    explicit QubitAngle(ExactAngle e) : value_(e) {}
    explicit QubitAngle(double r) : value_(r) {}

    std::variant<ExactAngle, double> value_;
};

struct Codeword {
    std::vector<std::uint8_t> w;

    [[nodiscard]] std::uint8_t parity() const {
        std::uint8_t p = 0;
        for (auto b : w) {
            p ^= b;
        }
        return p;
    }
    [[nodiscard]] std::size_t size() const { return w.size(); }
};

struct CipherState {
    std::vector<QubitAngle> qubits;
};

struct Decryption {
    std::vector<std::uint8_t> bits;
    std::uint8_t message = 0;
};

template <class Rng>
PrivateKey generate_private_key(const ProtocolParams &params, Rng &rng) {
    params.validate();
    std::uniform_int_distribution<std::uint64_t> dist(0, params.key_space() - 1);
    PrivateKey key;
    key.n = params.n;
    key.k.reserve(static_cast<std::size_t>(params.N));
    for (int j = 0; j < params.N; ++j) {
        key.k.push_back(dist(rng));
    }
    return key;
}

inline QubitAngle public_qubit_state(std::uint64_t k, int n) {
    detail::require(n >= 1 && n <= kMaxResolution, "public_qubit_state: n must lie in [1, 52]");
    detail::require(k < (std::uint64_t{1} << n), "public_qubit_state: k must lie in Z_{2^n}");
    return QubitAngle::exact(k, n);
}

/// Rotates by w * pi; in exact form this adds w * 2^(n-1) modulo 2^n.
inline QubitAngle encrypt_bit(const QubitAngle &q, std::uint8_t w) {
    detail::require(w <= 1, "encrypt_bit: w must be 0 or 1");
    if (w == 0) {
        return q;
    }
    if (q.is_exact()) {
        const auto &e = q.exact_form();
        return QubitAngle::exact(e.k + (std::uint64_t{1} << (e.n - 1)), e.n);
    }
    return QubitAngle::from_radians(q.radians() + std::numbers::pi);
}

/// Uniform draw from the 2^(s-1) codewords whose parity is m.
template <class Rng>
Codeword encode_message(std::uint8_t m, int s, Rng &rng) {
    detail::require(m <= 1, "encode_message: m must be 0 or 1");
    detail::require(s >= 1, "encode_message: s must be >= 1");
    std::bernoulli_distribution coin(0.5);
    Codeword cw;
    cw.w.resize(static_cast<std::size_t>(s));
    std::uint8_t p = 0;
    for (int j = 0; j + 1 < s; ++j) {
        cw.w[j] = coin(rng) ? 1 : 0;
        p ^= cw.w[j];
    }
    cw.w.back() = p ^ m;
    return cw;
}

/// Encrypts codeword bit j on public-key qubit j (the first s qubits).
inline CipherState encrypt(const Codeword &cw, const PrivateKey &key) {
    detail::require(cw.size() <= key.size(), "encrypt: codeword longer than public key");
    CipherState c;
    c.qubits.reserve(cw.size());
    for (std::size_t j = 0; j < cw.size(); ++j) {
        c.qubits.push_back(encrypt_bit(public_qubit_state(key.k[j], key.n), cw.w[j]));
    }
    return c;
}

/**
 * Projective measurement of each cipher qubit in the basis
 * {k_j theta_n, k_j theta_n + pi}.
 *
 * On an honest cipher the outcome is deterministic. A qubit that is neither
 * parallel nor antiparallel to its key state is rejected with
 * std::domain_error rather than sampled.
 */
inline Decryption decrypt(const CipherState &c, const PrivateKey &key, const ProtocolParams &params) {
    params.validate();
    detail::require(key.n == params.n, "decrypt: key resolution does not match params");
    detail::require(c.qubits.size() == static_cast<std::size_t>(params.s), "decrypt: cipher length != s");
    detail::require(c.qubits.size() <= key.size(), "decrypt: cipher longer than key");

    Decryption out;
    out.bits.reserve(c.qubits.size());
    const std::uint64_t half_turn = std::uint64_t{1} << (params.n - 1);
    const std::uint64_t mask = (std::uint64_t{1} << params.n) - 1;
    for (std::size_t j = 0; j < c.qubits.size(); ++j) {
        const QubitAngle &q = c.qubits[j];
        std::uint8_t bit;
        if (q.is_exact() && q.exact_form().n == params.n) {
            const std::uint64_t d = (q.exact_form().k - key.k[j]) & mask;
            if (d == 0) {
                bit = 0;
            } else if (d == half_turn) {
                bit = 1;
            } else {
                throw std::domain_error("decrypt: cipher qubit is off the {0, pi} manifold");
            }
        } else {
            const auto [cz, cx] = q.bloch();
            const auto [kz, kx] = public_qubit_state(key.k[j], params.n).bloch();
            const double overlap = cz * kz + cx * kx; // 2 p0 - 1
            if (overlap > 1.0 - 1e-9) {
                bit = 0;
            } else if (overlap < -1.0 + 1e-9) {
                bit = 1;
            } else {
                throw std::domain_error("decrypt: cipher qubit is off the {0, pi} manifold");
            }
        }
        out.bits.push_back(bit);
        out.message ^= bit;
    }
    return out;
}

} // namespace qpke
