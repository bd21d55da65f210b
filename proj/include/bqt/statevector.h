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
#ifndef BQT_STATEVECTOR_H
#define BQT_STATEVECTOR_H

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace bqt {

using Amplitude = std::complex<double>;
using QubitLabel = std::string;
using Rng = std::mt19937_64;

/// Norm, unitarity and fidelity tolerance.
inline constexpr double kTolerance = 1e-10;
/// Branches with probability at or below this are dropped.
inline constexpr double kPruneThreshold = 1e-12;

struct ContractViolation : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NormalizationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A 1- or 2-qubit unitary. For two qubits the first target is the high bit of the matrix index.
class Gate {
   public:
    /// Throws ContractViolation if the matrix has the wrong size or is not unitary within kTolerance.
    Gate(std::string name, size_t arity, std::vector<Amplitude> matrix);

    static Gate I();
    static Gate X();
    static Gate Y();
    static Gate Z();
    static Gate H();
    static Gate CNOT();
    static Gate CZ();

    const std::string &name() const {
        return name_;
    }
    size_t arity() const {
        return arity_;
    }
    /// Row-major 2^arity x 2^arity.
    const std::vector<Amplitude> &matrix() const {
        return matrix_;
    }

   private:
    std::string name_;
    size_t arity_;
    std::vector<Amplitude> matrix_;
};

/// Dense pure state over labeled qubits. The first label is the most significant bit of the
/// amplitude index, so |a1 a2> reads the same as the ket.
class PureState {
   public:
    /// Zero-qubit state with amplitude 1.
    PureState();

    static PureState basis(std::vector<QubitLabel> labels, std::string_view bits);
    static PureState from_amplitudes(std::vector<QubitLabel> labels, std::vector<Amplitude> amps);

    size_t num_qubits() const {
        return labels_.size();
    }
    const std::vector<QubitLabel> &labels() const {
        return labels_;
    }
    const std::vector<Amplitude> &amplitudes() const {
        return amps_;
    }
    Amplitude amplitude(size_t index) const {
        return amps_.at(index);
    }
    bool has_label(std::string_view label) const;
    /// Position of a label, 0 = most significant. Throws ContractViolation when absent.
    size_t position(std::string_view label) const;
    double norm_squared() const;

    std::string str() const;

   private:
    std::vector<QubitLabel> labels_;
    std::vector<Amplitude> amps_;
};

/// Reduced density operator over labeled qubits.
class MixedState {
   public:
    /// Validates Hermiticity, unit trace and positivity within kTolerance.
    MixedState(std::vector<QubitLabel> labels, Eigen::MatrixXcd rho);

    size_t num_qubits() const {
        return labels_.size();
    }
    const std::vector<QubitLabel> &labels() const {
        return labels_;
    }
    const Eigen::MatrixXcd &rho() const {
        return rho_;
    }

    /// Largest entrywise deviation from another state over the same label order.
    double max_abs_diff(const MixedState &other) const;

   private:
    std::vector<QubitLabel> labels_;
    Eigen::MatrixXcd rho_;
};

PureState apply_gate(const PureState &state, const Gate &gate, std::span<const QubitLabel> targets);
PureState apply_gate(const PureState &state, const Gate &gate, std::initializer_list<QubitLabel> targets);

/// Product state with a's labels first. Labels must be disjoint.
PureState tensor(const PureState &a, const PureState &b);

/// Same amplitudes under new names.
PureState relabel(const PureState &state, std::vector<QubitLabel> labels);

/// Reorders qubits so that the labels come out in the given order (a permutation of state's labels).
PureState reorder(const PureState &state, std::span<const QubitLabel> order);

struct Branch {
    std::string bits;
    double probability;
    PureState post;
};

/// All computational-basis outcomes of measuring `qubits` (in that order) with probability above
/// kPruneThreshold, in ascending bit order. Measured qubits are removed from each post-state.
std::vector<Branch> branch_enumerate(const PureState &state, std::span<const QubitLabel> qubits);

struct Sample {
    std::string bits;
    PureState post;
};

/// Draws one branch with its Born probability.
Sample sample_measure(const PureState &state, std::span<const QubitLabel> qubits, Rng &rng);

/// |<a|b>|^2 after aligning b's label order to a's.
double fidelity(const PureState &a, const PureState &b);

/// <psi|rho|psi>, labels aligned by name.
double fidelity(const MixedState &rho, const PureState &psi);

MixedState partial_trace(const PureState &state, std::span<const QubitLabel> keep);

/// |psi><psi|
MixedState density_matrix(const PureState &state);

}  // namespace bqt

#endif
