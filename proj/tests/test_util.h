/*
 * Copyright 2026 The bqt Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef BQT_TESTS_TEST_UTIL_H
#define BQT_TESTS_TEST_UTIL_H

#include <cmath>
#include <complex>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "bqt/protocol.h"

namespace bqt::testing {

/// Normalized (alpha, beta) with independent complex Gaussian components.
inline std::pair<Amplitude, Amplitude> random_pair(Rng &rng) {
    std::normal_distribution<double> normal;
    Amplitude a{normal(rng), normal(rng)};
    Amplitude b{normal(rng), normal(rng)};
    double n = std::sqrt(std::norm(a) + std::norm(b));
    return {a / n, b / n};
}

inline MessageState random_ghz_message(Rng &rng, Party owner, size_t n) {
    auto [a, b] = random_pair(rng);
    return MessageState::ghz(a, b, message_labels(owner, n), owner);
}

/// Two distinct random bitstrings of length n.
inline Support random_support(Rng &rng, size_t n) {
    std::uniform_int_distribution<uint32_t> pick(0, (1u << n) - 1);
    uint32_t x = pick(rng);
    uint32_t y = x;
    while (y == x) {
        y = pick(rng);
    }
    auto text = [n](uint32_t v) {
        std::string s(n, '0');
        for (size_t k = 0; k < n; k++) {
            s[k] = ((v >> (n - 1 - k)) & 1) ? '1' : '0';
        }
        return s;
    };
    return Support{text(x), text(y)};
}

/// Kronecker product of two amplitude vectors, written out as a double loop.
inline std::vector<Amplitude> kron(const std::vector<Amplitude> &a, const std::vector<Amplitude> &b) {
    std::vector<Amplitude> out;
    for (const auto &x : a) {
        for (const auto &y : b) {
            out.push_back(x * y);
        }
    }
    return out;
}

/// Reduced density matrix of the last `keep_low` qubits of an amplitude vector, by explicit summation.
inline std::vector<std::vector<Amplitude>> trace_out_high(const std::vector<Amplitude> &amps, size_t keep_low) {
    size_t dim_keep = size_t{1} << keep_low;
    size_t dim_env = amps.size() / dim_keep;
    std::vector<std::vector<Amplitude>> rho(dim_keep, std::vector<Amplitude>(dim_keep));
    for (size_t i = 0; i < dim_keep; i++) {
        for (size_t j = 0; j < dim_keep; j++) {
            for (size_t e = 0; e < dim_env; e++) {
                rho[i][j] += amps[e * dim_keep + i] * std::conj(amps[e * dim_keep + j]);
            }
        }
    }
    return rho;
}

/// Upper bound of a 3-sigma binomial band around p for n trials.
inline double three_sigma(double p, size_t n) {
    return 3 * std::sqrt(p * (1 - p) / double(n));
}

}  // namespace bqt::testing

#endif
