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
#include "bqt/statevector.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

using namespace bqt;

namespace {

void check_labels(const std::vector<QubitLabel> &labels) {
    std::set<std::string_view> seen;
    for (const auto &label : labels) {
        if (label.empty()) {
            throw ContractViolation("Empty qubit label.");
        }
        if (!seen.insert(label).second) {
            throw ContractViolation("Duplicate qubit label '" + label + "'.");
        }
    }
}

inline size_t bit_weight(size_t n, size_t position) {
    return size_t{1} << (n - 1 - position);
}

std::vector<size_t> positions_of(const PureState &state, std::span<const QubitLabel> qubits) {
    std::vector<size_t> out;
    out.reserve(qubits.size());
    std::set<size_t> seen;
    for (const auto &q : qubits) {
        size_t p = state.position(q);
        if (!seen.insert(p).second) {
            throw ContractViolation("Qubit '" + q + "' listed twice.");
        }
        out.push_back(p);
    }
    return out;
}

}  // namespace

Gate::Gate(std::string name, size_t arity, std::vector<Amplitude> matrix)
    : name_(std::move(name)), arity_(arity), matrix_(std::move(matrix)) {
    if (arity_ != 1 && arity_ != 2) {
        throw ContractViolation("Gate arity must be 1 or 2.");
    }
    size_t d = size_t{1} << arity_;
    if (matrix_.size() != d * d) {
        throw ContractViolation("Gate matrix has the wrong number of entries.");
    }
    for (const auto &a : matrix_) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
            throw ContractViolation("Gate matrix entry is not finite.");
        }
    }
    // U^dagger U = I
    for (size_t r = 0; r < d; r++) {
        for (size_t c = 0; c < d; c++) {
            Amplitude acc = 0;
            for (size_t k = 0; k < d; k++) {
                acc += std::conj(matrix_[k * d + r]) * matrix_[k * d + c];
            }
            if (std::abs(acc - Amplitude(r == c ? 1.0 : 0.0)) > kTolerance) {
                throw ContractViolation("Gate '" + name_ + "' is not unitary.");
            }
        }
    }
}

Gate Gate::I() {
    return Gate("I", 1, {1, 0, 0, 1});
}
Gate Gate::X() {
    return Gate("X", 1, {0, 1, 1, 0});
}
// XZ, which is the usual Y up to a global phase of i.
Gate Gate::Y() {
    return Gate("Y", 1, {0, -1, 1, 0});
}
Gate Gate::Z() {
    return Gate("Z", 1, {1, 0, 0, -1});
}
Gate Gate::H() {
    double s = std::numbers::sqrt2 / 2;
    return Gate("H", 1, {s, s, s, -s});
}
Gate Gate::CNOT() {
    return Gate("CNOT", 2, {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0});
}
Gate Gate::CZ() {
    return Gate("CZ", 2, {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, -1});
}

PureState::PureState() : labels_(), amps_{1.0} {
}

PureState PureState::basis(std::vector<QubitLabel> labels, std::string_view bits) {
    if (labels.size() != bits.size()) {
        throw ContractViolation("basis: " + std::to_string(labels.size()) + " labels but " +
                                std::to_string(bits.size()) + " bits.");
    }
    size_t index = 0;
    for (char c : bits) {
        if (c != '0' && c != '1') {
            throw ContractViolation("basis: non-binary character '" + std::string(1, c) + "'.");
        }
        index = (index << 1) | size_t(c - '0');
    }
    std::vector<Amplitude> amps(size_t{1} << labels.size(), 0.0);
    amps[index] = 1.0;
    return from_amplitudes(std::move(labels), std::move(amps));
}

PureState PureState::from_amplitudes(std::vector<QubitLabel> labels, std::vector<Amplitude> amps) {
    check_labels(labels);
    if (labels.size() > 20) {
        throw ContractViolation("Dense states are limited to 20 qubits.");
    }
    if (amps.size() != size_t{1} << labels.size()) {
        throw ContractViolation(
            "from_amplitudes: expected " + std::to_string(size_t{1} << labels.size()) + " amplitudes, got " +
            std::to_string(amps.size()) + ".");
    }
    double norm = 0;
    for (const auto &a : amps) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
            throw ContractViolation("from_amplitudes: non-finite amplitude.");
        }
        norm += std::norm(a);
    }
    if (std::abs(norm - 1.0) > kTolerance) {
        std::ostringstream msg;
        msg << "State is not normalized (sum of |amp|^2 = " << norm << ").";
        throw NormalizationError(msg.str());
    }
    PureState out;
    out.labels_ = std::move(labels);
    out.amps_ = std::move(amps);
    return out;
}

bool PureState::has_label(std::string_view label) const {
    return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

size_t PureState::position(std::string_view label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) {
        throw ContractViolation("Unknown qubit label '" + std::string(label) + "'.");
    }
    return size_t(it - labels_.begin());
}

double PureState::norm_squared() const {
    double acc = 0;
    for (const auto &a : amps_) {
        acc += std::norm(a);
    }
    return acc;
}

std::string PureState::str() const {
    std::ostringstream out;
    size_t n = labels_.size();
    bool first = true;
    for (size_t k = 0; k < amps_.size(); k++) {
        if (std::abs(amps_[k]) <= 1e-12) {
            continue;
        }
        if (!first) {
            out << " + ";
        }
        first = false;
        out << "(" << amps_[k].real() << (amps_[k].imag() < 0 ? "" : "+") << amps_[k].imag() << "j)|";
        for (size_t p = 0; p < n; p++) {
            out << ((k & bit_weight(n, p)) ? '1' : '0');
        }
        out << ">";
    }
    out << " on [";
    for (size_t p = 0; p < n; p++) {
        out << (p ? "," : "") << labels_[p];
    }
    out << "]";
    return out.str();
}

MixedState::MixedState(std::vector<QubitLabel> labels, Eigen::MatrixXcd rho)
    : labels_(std::move(labels)), rho_(std::move(rho)) {
    check_labels(labels_);
    auto d = Eigen::Index(1) << labels_.size();
    if (rho_.rows() != d || rho_.cols() != d) {
        throw ContractViolation("Density matrix has the wrong shape.");
    }
    if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > kTolerance) {
        throw ContractViolation("Density matrix is not Hermitian.");
    }
    if (std::abs(rho_.trace() - Amplitude(1.0)) > kTolerance) {
        throw NormalizationError("Density matrix trace is not 1.");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho_, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -kTolerance) {
        throw ContractViolation("Density matrix has a negative eigenvalue.");
    }
}

double MixedState::max_abs_diff(const MixedState &other) const {
    if (labels_ != other.labels_) {
        throw ContractViolation("max_abs_diff: label order mismatch.");
    }
    return (rho_ - other.rho_).cwiseAbs().maxCoeff();
}

PureState bqt::apply_gate(const PureState &state, const Gate &gate, std::span<const QubitLabel> targets) {
    if (targets.size() != gate.arity()) {
        throw ContractViolation(
            "Gate '" + gate.name() + "' expects " + std::to_string(gate.arity()) + " targets.");
    }
    auto pos = positions_of(state, targets);
    size_t n = state.num_qubits();
    size_t m = gate.arity();
    size_t d = size_t{1} << m;
    std::vector<size_t> weights(m);
    size_t mask = 0;
    for (size_t k = 0; k < m; k++) {
        weights[k] = bit_weight(n, pos[k]);
        mask |= weights[k];
    }
    // offsets[j] = index contribution of local basis state j (target 0 is the high bit).
    std::vector<size_t> offsets(d, 0);
    for (size_t j = 0; j < d; j++) {
        for (size_t k = 0; k < m; k++) {
            if (j & (size_t{1} << (m - 1 - k))) {
                offsets[j] |= weights[k];
            }
        }
    }
    const auto &u = gate.matrix();
    std::vector<Amplitude> amps = state.amplitudes();
    std::vector<Amplitude> local(d);
    for (size_t base = 0; base < amps.size(); base++) {
        if (base & mask) {
            continue;
        }
        for (size_t j = 0; j < d; j++) {
            local[j] = amps[base | offsets[j]];
        }
        for (size_t r = 0; r < d; r++) {
            Amplitude acc = 0;
            for (size_t c = 0; c < d; c++) {
                acc += u[r * d + c] * local[c];
            }
            amps[base | offsets[r]] = acc;
        }
    }
    return PureState::from_amplitudes(state.labels(), std::move(amps));
}

PureState bqt::apply_gate(const PureState &state, const Gate &gate, std::initializer_list<QubitLabel> targets) {
    return apply_gate(state, gate, std::span<const QubitLabel>(targets.begin(), targets.size()));
}

PureState bqt::tensor(const PureState &a, const PureState &b) {
    for (const auto &label : b.labels()) {
        if (a.has_label(label)) {
            throw ContractViolation("tensor: label '" + label + "' appears on both sides.");
        }
    }
    std::vector<QubitLabel> labels = a.labels();
    labels.insert(labels.end(), b.labels().begin(), b.labels().end());
    const auto &x = a.amplitudes();
    const auto &y = b.amplitudes();
    std::vector<Amplitude> amps(x.size() * y.size());
    for (size_t i = 0; i < x.size(); i++) {
        for (size_t j = 0; j < y.size(); j++) {
            amps[i * y.size() + j] = x[i] * y[j];
        }
    }
    return PureState::from_amplitudes(std::move(labels), std::move(amps));
}

PureState bqt::relabel(const PureState &state, std::vector<QubitLabel> labels) {
    if (labels.size() != state.num_qubits()) {
        throw ContractViolation("relabel: label count mismatch.");
    }
    return PureState::from_amplitudes(std::move(labels), state.amplitudes());
}

PureState bqt::reorder(const PureState &state, std::span<const QubitLabel> order) {
    size_t n = state.num_qubits();
    if (order.size() != n) {
        throw ContractViolation("reorder: label sets differ.");
    }
    auto src = positions_of(state, order);
    const auto &in = state.amplitudes();
    std::vector<Amplitude> out(in.size());
    for (size_t j = 0; j < out.size(); j++) {
        size_t i = 0;
        for (size_t k = 0; k < n; k++) {
            if (j & bit_weight(n, k)) {
                i |= bit_weight(n, src[k]);
            }
        }
        out[j] = in[i];
    }
    return PureState::from_amplitudes(std::vector<QubitLabel>(order.begin(), order.end()), std::move(out));
}

std::vector<Branch> bqt::branch_enumerate(const PureState &state, std::span<const QubitLabel> qubits) {
    auto pos = positions_of(state, qubits);
    size_t n = state.num_qubits();
    size_t k = pos.size();
    std::vector<bool> measured(n, false);
    for (size_t p : pos) {
        measured[p] = true;
    }
    std::vector<QubitLabel> rest_labels;
    std::vector<size_t> rest_pos;
    for (size_t p = 0; p < n; p++) {
        if (!measured[p]) {
            rest_labels.push_back(state.labels()[p]);
            rest_pos.push_back(p);
        }
    }
    size_t rest_n = rest_pos.size();
    size_t outcomes = size_t{1} << k;
    size_t rest_dim = size_t{1} << rest_n;

    // Bucket amplitudes by outcome, indexed by the remaining qubits.
    std::vector<std::vector<Amplitude>> buckets(outcomes, std::vector<Amplitude>(rest_dim, 0.0));
    const auto &amps = state.amplitudes();
    for (size_t i = 0; i < amps.size(); i++) {
        size_t outcome = 0;
        for (size_t j = 0; j < k; j++) {
            outcome = (outcome << 1) | ((i & bit_weight(n, pos[j])) ? 1 : 0);
        }
        size_t r = 0;
        for (size_t j = 0; j < rest_n; j++) {
            r = (r << 1) | ((i & bit_weight(n, rest_pos[j])) ? 1 : 0);
        }
        buckets[outcome][r] = amps[i];
    }

    std::vector<Branch> out;
    for (size_t o = 0; o < outcomes; o++) {
        double p = 0;
        for (const auto &a : buckets[o]) {
            p += std::norm(a);
        }
        if (p <= kPruneThreshold) {
            continue;
        }
        double scale = 1.0 / std::sqrt(p);
        for (auto &a : buckets[o]) {
            a *= scale;
        }
        std::string bits(k, '0');
        for (size_t j = 0; j < k; j++) {
            if (o & (size_t{1} << (k - 1 - j))) {
                bits[j] = '1';
            }
        }
        out.push_back(Branch{std::move(bits), p, PureState::from_amplitudes(rest_labels, std::move(buckets[o]))});
    }
    return out;
}

Sample bqt::sample_measure(const PureState &state, std::span<const QubitLabel> qubits, Rng &rng) {
    if (qubits.empty()) {
        return Sample{"", state};
    }
    auto branches = branch_enumerate(state, qubits);
    double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    double acc = 0;
    for (auto &b : branches) {
        acc += b.probability;
        if (u < acc) {
            return Sample{std::move(b.bits), std::move(b.post)};
        }
    }
    return Sample{std::move(branches.back().bits), std::move(branches.back().post)};
}

double bqt::fidelity(const PureState &a, const PureState &b) {
    if (a.num_qubits() != b.num_qubits()) {
        throw ContractViolation("fidelity: label sets differ.");
    }
    PureState aligned = reorder(b, a.labels());
    Amplitude overlap = 0;
    for (size_t i = 0; i < a.amplitudes().size(); i++) {
        overlap += std::conj(a.amplitudes()[i]) * aligned.amplitudes()[i];
    }
    return std::clamp(std::norm(overlap), 0.0, 1.0);
}

double bqt::fidelity(const MixedState &rho, const PureState &psi) {
    if (rho.num_qubits() != psi.num_qubits()) {
        throw ContractViolation("fidelity: label sets differ.");
    }
    PureState aligned = reorder(psi, rho.labels());
    Eigen::VectorXcd v(Eigen::Index(aligned.amplitudes().size()));
    for (Eigen::Index i = 0; i < v.size(); i++) {
        v[i] = aligned.amplitudes()[size_t(i)];
    }
    Amplitude f = v.dot(rho.rho() * v);
    return std::clamp(f.real(), 0.0, 1.0);
}

MixedState bqt::partial_trace(const PureState &state, std::span<const QubitLabel> keep) {
    auto pos = positions_of(state, keep);
    size_t n = state.num_qubits();
    size_t k = pos.size();
    std::vector<bool> kept(n, false);
    for (size_t p : pos) {
        kept[p] = true;
    }
    std::vector<size_t> env_pos;
    for (size_t p = 0; p < n; p++) {
        if (!kept[p]) {
            env_pos.push_back(p);
        }
    }
    auto keep_dim = Eigen::Index(1) << k;
    auto env_dim = Eigen::Index(1) << env_pos.size();

    // psi as a (kept x environment) matrix; rho = M M^dagger.
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(keep_dim, env_dim);
    const auto &amps = state.amplitudes();
    for (size_t i = 0; i < amps.size(); i++) {
        Eigen::Index r = 0;
        for (size_t j = 0; j < k; j++) {
            r = (r << 1) | ((i & bit_weight(n, pos[j])) ? 1 : 0);
        }
        Eigen::Index c = 0;
        for (size_t p : env_pos) {
            c = (c << 1) | ((i & bit_weight(n, p)) ? 1 : 0);
        }
        m(r, c) = amps[i];
    }
    Eigen::MatrixXcd rho = m * m.adjoint();
    return MixedState(std::vector<QubitLabel>(keep.begin(), keep.end()), std::move(rho));
}

MixedState bqt::density_matrix(const PureState &state) {
    return partial_trace(state, state.labels());
}
