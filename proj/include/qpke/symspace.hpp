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
 * Density operators of tau identical public-key copies.
 *
 * tau copies of a real qubit state live in the (tau+1)-dimensional symmetric
 * subspace spanned by the Dicke states |l> (Hamming weight l). In that basis
 * |psi_k>^tau = sum_l sqrt(B(tau,l)) f_{tau,l}(k theta_n) |l> with
 * f_{tau,l}(phi) = cos(phi/2)^(tau-l) sin(phi/2)^l, so every mixture of such
 * states is a real symmetric (tau+1)x(tau+1) matrix whose (l,l') entry only
 * depends on the moment of order l+l'.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qpke/common.hpp"

namespace qpke {

/// Largest number of copies handled by the symmetric-subspace routines.
inline constexpr int kMaxCopies = 64;
/// Largest resolution exponent for exact sums over Z_{2^n}.
inline constexpr int kMaxSumResolution = 20;

class SymmetricDensityOperator {
  public:
    SymmetricDensityOperator() = default;
    explicit SymmetricDensityOperator(int tau) : tau_(tau), data_((tau + 1) * (tau + 1), 0.0) {}

    [[nodiscard]] int tau() const { return tau_; }
    [[nodiscard]] int dim() const { return tau_ + 1; }

    double &operator()(int l, int lp) { return data_[l * dim() + lp]; }
    double operator()(int l, int lp) const { return data_[l * dim() + lp]; }

    [[nodiscard]] double trace() const {
        double t = 0.0;
        for (int l = 0; l < dim(); ++l) {
            t += (*this)(l, l);
        }
        return t;
    }

    [[nodiscard]] double max_asymmetry() const {
        double worst = 0.0;
        for (int l = 0; l < dim(); ++l) {
            for (int lp = l + 1; lp < dim(); ++lp) {
                worst = std::max(worst, std::abs((*this)(l, lp) - (*this)(lp, l)));
            }
        }
        return worst;
    }

    /// Largest |C_{l,l'}| over entries with l + l' odd.
    [[nodiscard]] double max_odd_parity_entry() const {
        double worst = 0.0;
        for (int l = 0; l < dim(); ++l) {
            for (int lp = 0; lp < dim(); ++lp) {
                if ((l + lp) % 2 == 1) {
                    worst = std::max(worst, std::abs((*this)(l, lp)));
                }
            }
        }
        return worst;
    }

    [[nodiscard]] double max_abs_difference(const SymmetricDensityOperator &other) const {
        detail::require(other.tau_ == tau_, "max_abs_difference: tau mismatch");
        double worst = 0.0;
        for (std::size_t i = 0; i < data_.size(); ++i) {
            worst = std::max(worst, std::abs(data_[i] - other.data_[i]));
        }
        return worst;
    }

    [[nodiscard]] std::span<const double> data() const { return data_; }

  private:
    int tau_ = 0;
    std::vector<double> data_;
};

/**
 * Eigen-decomposition of a symmetric density operator.
 *
 * eigenvalues are sorted in descending order; eigenvectors(i, j) is the
 * i-th component of eigenvector j.
 */
struct Spectrum {
    std::vector<double> eigenvalues;
    std::vector<double> eigenvectors;
    int dim = 0;
    int sweeps = 0;

    [[nodiscard]] double eigenvector(int component, int which) const {
        return eigenvectors[component * dim + which];
    }

    /// Count of eigenvalues above rel_tol * lambda_max.
    [[nodiscard]] int rank(double rel_tol = 1e-10) const {
        if (eigenvalues.empty()) {
            return 0;
        }
        const double cut = rel_tol * eigenvalues.front();
        return static_cast<int>(std::count_if(eigenvalues.begin(), eigenvalues.end(),
                                              [cut](double v) { return v > cut; }));
    }

    [[nodiscard]] double sum() const {
        double acc = 0.0;
        for (double v : eigenvalues) {
            acc += v;
        }
        return acc;
    }
};

/// cos(phi/2)^(tau-l) * sin(phi/2)^l
inline double coefficient_f(int tau, int l, double angle) {
    detail::require(tau >= 0 && l >= 0 && l <= tau, "coefficient_f: need 0 <= l <= tau");
    return std::pow(std::cos(angle / 2.0), tau - l) * std::pow(std::sin(angle / 2.0), l);
}

namespace detail {

/**
 * Moments M_m = sum_k w_k cos(psi_k)^(2tau-m) sin(psi_k)^m, psi_k = pi k / 2^n,
 * for m = 0..2tau. Blocks of keys are summed directly and combined pairwise.
 * weights == nullptr means the uniform weight 2^-n.
 */
inline void accumulate_moments(int tau, int n, const double *weights, std::uint64_t lo, std::uint64_t hi,
                               std::vector<double> &out) {
    constexpr std::uint64_t kBlock = 64;
    const int order = 2 * tau;
    if (hi - lo <= kBlock) {
        std::vector<double> cpow(order + 1);
        std::vector<double> spow(order + 1);
        std::fill(out.begin(), out.end(), 0.0);
        const double uniform = std::ldexp(1.0, -n);
        for (std::uint64_t k = lo; k < hi; ++k) {
            const double w = weights ? weights[k] : uniform;
            if (w == 0.0) {
                continue;
            }
            const auto [c, s] = cos_sin_pi_dyadic(static_cast<std::int64_t>(k), n);
            cpow[0] = 1.0;
            spow[0] = 1.0;
            for (int i = 1; i <= order; ++i) {
                cpow[i] = cpow[i - 1] * c;
                spow[i] = spow[i - 1] * s;
            }
            for (int m = 0; m <= order; ++m) {
                out[m] += w * cpow[order - m] * spow[m];
            }
        }
        return;
    }
    const std::uint64_t mid = lo + (hi - lo) / 2;
    std::vector<double> right(out.size());
    accumulate_moments(tau, n, weights, lo, mid, out);
    accumulate_moments(tau, n, weights, mid, hi, right);
    for (std::size_t m = 0; m < out.size(); ++m) {
        out[m] += right[m];
    }
}

inline SymmetricDensityOperator symmetric_mixture(int tau, int n, const double *weights) {
    std::vector<double> moments(2 * tau + 1, 0.0);
    accumulate_moments(tau, n, weights, 0, std::uint64_t{1} << n, moments);
    std::vector<double> root_binom(tau + 1);
    for (int l = 0; l <= tau; ++l) {
        root_binom[l] = std::sqrt(binomial(tau, l));
    }
    SymmetricDensityOperator rho(tau);
    for (int l = 0; l <= tau; ++l) {
        for (int lp = 0; lp <= tau; ++lp) {
            rho(l, lp) = root_binom[l] * root_binom[lp] * moments[l + lp];
        }
    }
    return rho;
}

inline void check_copies_and_resolution(int tau, int n, const char *where) {
    require(tau >= 1 && tau <= kMaxCopies, std::string(where) + ": tau must lie in [1, 64]");
    require(n >= 1 && n <= kMaxSumResolution, std::string(where) + ": n must lie in [1, 20]");
}

} // namespace detail

/// The a priori operator of tau copies: uniform mixture over all 2^n key states.
inline SymmetricDensityOperator prior_density(int tau, int n) {
    detail::check_copies_and_resolution(tau, n, "prior_density");
    return detail::symmetric_mixture(tau, n, nullptr);
}

/**
 * Mixture of tau-copy key states weighted by an arbitrary distribution over
 * Z_{2^n}; the posterior operator when the weights come from a Bayes update.
 */
inline SymmetricDensityOperator weighted_density(int tau, int n, std::span<const double> weights) {
    detail::check_copies_and_resolution(tau, n, "weighted_density");
    detail::require(weights.size() == (std::size_t{1} << n), "weighted_density: need 2^n weights");
    return detail::symmetric_mixture(tau, n, weights.data());
}

/**
 * Cyclic Jacobi diagonalization.
 *
 * Sweeps until the off-diagonal Frobenius norm drops below off_tol; throws
 * ConvergenceError after max_sweeps.
 */
inline Spectrum eigendecompose(const SymmetricDensityOperator &rho, double off_tol = 1e-12, int max_sweeps = 100) {
    const int d = rho.dim();
    detail::require(d >= 1, "eigendecompose: empty operator");
    std::vector<double> a(rho.data().begin(), rho.data().end());
    std::vector<double> v(static_cast<std::size_t>(d * d), 0.0);
    for (int i = 0; i < d; ++i) {
        v[i * d + i] = 1.0;
    }
    auto at = [&](int i, int j) -> double & { return a[i * d + j]; };
    auto off_norm = [&] {
        double acc = 0.0;
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j) {
                if (i != j) {
                    acc += at(i, j) * at(i, j);
                }
            }
        }
        return std::sqrt(acc);
    };

    int sweep = 0;
    while (off_norm() >= off_tol) {
        if (sweep == max_sweeps) {
            throw ConvergenceError("eigendecompose: Jacobi sweeps did not converge");
        }
        ++sweep;
        for (int p = 0; p < d - 1; ++p) {
            for (int q = p + 1; q < d; ++q) {
                const double apq = at(p, q);
                if (apq == 0.0) {
                    continue;
                }
                const double app = at(p, p);
                const double aqq = at(q, q);
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < d; ++k) {
                    const double akp = at(k, p);
                    const double akq = at(k, q);
                    at(k, p) = c * akp - s * akq;
                    at(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < d; ++k) {
                    const double apk = at(p, k);
                    const double aqk = at(q, k);
                    at(p, k) = c * apk - s * aqk;
                    at(q, k) = s * apk + c * aqk;
                }
                at(p, q) = 0.0;
                at(q, p) = 0.0;
                for (int k = 0; k < d; ++k) {
                    const double vkp = v[k * d + p];
                    const double vkq = v[k * d + q];
                    v[k * d + p] = c * vkp - s * vkq;
                    v[k * d + q] = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<int> order(d);
    for (int i = 0; i < d; ++i) {
        order[i] = i;
    }
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return at(x, x) > at(y, y); });

    Spectrum out;
    out.dim = d;
    out.sweeps = sweep;
    out.eigenvalues.resize(d);
    out.eigenvectors.resize(static_cast<std::size_t>(d * d));
    for (int j = 0; j < d; ++j) {
        out.eigenvalues[j] = at(order[j], order[j]);
        for (int i = 0; i < d; ++i) {
            out.eigenvectors[i * d + j] = v[i * d + order[j]];
        }
    }
    return out;
}

/// Entropy in bits of a probability vector (0 log 0 = 0; tiny negative round-off ignored).
inline double shannon_entropy(std::span<const double> p) {
    double h = 0.0;
    for (double x : p) {
        h -= detail::xlog2x(x);
    }
    return h;
}

inline double von_neumann_entropy(const Spectrum &spectrum) {
    return shannon_entropy(spectrum.eigenvalues);
}

inline double von_neumann_entropy(const SymmetricDensityOperator &rho) {
    return von_neumann_entropy(eigendecompose(rho));
}

/// log2(tau + 1): one copy of a (tau+1)-level system.
inline double holevo_bound_loose(int tau) {
    detail::require(tau >= 1, "holevo_bound_loose: tau must be >= 1");
    return std::log2(tau + 1.0);
}

/// Gaussian entropy bound for the binomial spectrum: (1/2)log2(tau) + (1/2)log2(pi e / 2).
inline double holevo_bound_tight(int tau) {
    detail::require(tau >= 1, "holevo_bound_tight: tau must be >= 1");
    return 0.5 * std::log2(static_cast<double>(tau)) + 0.5 * std::log2(std::numbers::pi * std::numbers::e / 2.0);
}

/// B(tau, i) / 2^tau, i = 0..tau, sorted descending.
inline std::vector<double> binomial_eigenvalues(int tau) {
    detail::require(tau >= 0, "binomial_eigenvalues: tau must be >= 0");
    std::vector<double> out(tau + 1);
    for (int i = 0; i <= tau; ++i) {
        out[i] = std::ldexp(detail::binomial(tau, i), -tau);
    }
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

struct OneWayCheck {
    double margin = 0.0; ///< n - log2(tau + 1), in bits
    bool passes = false; ///< margin >= guard
};

inline OneWayCheck one_way_condition(double n, int tau, double guard_bits = 4.0) {
    detail::require(tau >= 0, "one_way_condition: tau must be >= 0");
    const double margin = n - std::log2(tau + 1.0);
    return {margin, margin >= guard_bits};
}

struct CriticalResolution {
    int tau = 0;
    std::optional<int> n_c; ///< empty when unresolved below kMaxSumResolution
    int rank_at_nc = 0;
    std::vector<int> ranks; ///< rank for n = 1 .. n_c (or up to the search limit)
};

/**
 * Smallest n for which prior_density(tau, n) and prior_density(tau, n+1)
 * agree elementwise to within tol.
 */
inline CriticalResolution critical_n(int tau, double tol = 1e-12) {
    detail::require(tau >= 1 && tau <= kMaxCopies, "critical_n: tau must lie in [1, 64]");
    CriticalResolution out;
    out.tau = tau;
    SymmetricDensityOperator current = prior_density(tau, 1);
    for (int n = 1; n < kMaxSumResolution; ++n) {
        out.ranks.push_back(eigendecompose(current).rank());
        SymmetricDensityOperator next = prior_density(tau, n + 1);
        if (current.max_abs_difference(next) < tol) {
            out.n_c = n;
            out.rank_at_nc = out.ranks.back();
            return out;
        }
        current = std::move(next);
    }
    return out;
}

} // namespace qpke
