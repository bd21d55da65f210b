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
#include "bqt/channels.h"

#include <algorithm>
#include <numbers>

using namespace bqt;

const char *bqt::party_name(Party party) {
    return party == Party::kAlice ? "alice" : "bob";
}

PureState bqt::make_channel_eq3() {
    std::vector<Amplitude> amps(64, 0.0);
    for (size_t index : {0b000000, 0b001011, 0b110100, 0b111111}) {
        amps[index] = 0.5;
    }
    return PureState::from_amplitudes({"1", "2", "3", "4", "5", "6"}, std::move(amps));
}

PureState bqt::make_channel_eq4() {
    std::vector<Amplitude> amps(16, 0.0);
    amps[0b0000] = 0.5;
    amps[0b0011] = 0.5;
    amps[0b1100] = 0.5;
    amps[0b1111] = -0.5;
    return PureState::from_amplitudes({"A1", "B1", "A2", "B2"}, std::move(amps));
}

PureState bqt::make_bell_pair(int index, const std::array<QubitLabel, 2> &labels) {
    if (index < 0 || index > 3) {
        throw ContractViolation("Bell index must be in 0..3, got " + std::to_string(index) + ".");
    }
    double s = std::numbers::sqrt2 / 2;
    double sign = (index & 2) ? -1.0 : 1.0;
    std::vector<Amplitude> amps(4, 0.0);
    if (index & 1) {
        // Psi: (|01> +- |10>)/sqrt2
        amps[0b01] = s;
        amps[0b10] = sign * s;
    } else {
        // Phi: (|00> +- |11>)/sqrt2
        amps[0b00] = s;
        amps[0b11] = sign * s;
    }
    return PureState::from_amplitudes({labels[0], labels[1]}, std::move(amps));
}

ChannelSpec ChannelSpec::six_qubit_zhou(const std::array<Party, 6> &owners) {
    ChannelSpec spec{Kind::kSixQubitZhou, BellIndex::kPhiPlus, {"1", "2", "3", "4", "5", "6"}, {}};
    for (size_t k = 0; k < 6; k++) {
        spec.ownership[spec.labels[k]] = owners[k];
    }
    return spec;
}

ChannelSpec ChannelSpec::four_qubit_improved() {
    return ChannelSpec{
        Kind::kFourQubitImproved,
        BellIndex::kPhiPlus,
        {"A1", "B1", "A2", "B2"},
        {{"A1", Party::kAlice}, {"A2", Party::kAlice}, {"B1", Party::kBob}, {"B2", Party::kBob}}};
}

ChannelSpec ChannelSpec::bell_pair(BellIndex index, QubitLabel alice_qubit, QubitLabel bob_qubit) {
    ChannelSpec spec{Kind::kBellPair, index, {alice_qubit, bob_qubit}, {}};
    spec.ownership[alice_qubit] = Party::kAlice;
    spec.ownership[bob_qubit] = Party::kBob;
    return spec;
}

PureState ChannelSpec::state() const {
    switch (kind) {
        case Kind::kSixQubitZhou:
            return make_channel_eq3();
        case Kind::kFourQubitImproved:
            return make_channel_eq4();
        case Kind::kBellPair:
            return make_bell_pair(static_cast<int>(bell), {labels[0], labels[1]});
    }
    throw ContractViolation("Unknown channel kind.");
}

std::vector<QubitLabel> ChannelSpec::qubits_of(Party party) const {
    std::vector<QubitLabel> out;
    for (const auto &label : labels) {
        if (ownership.at(label) == party) {
            out.push_back(label);
        }
    }
    return out;
}

std::string ChannelSpec::name() const {
    switch (kind) {
        case Kind::kSixQubitZhou:
            return "eq3";
        case Kind::kFourQubitImproved:
            return "eq4";
        case Kind::kBellPair: {
            static constexpr const char *names[] = {"phi-plus", "psi-plus", "phi-minus", "psi-minus"};
            return std::string("bell-") + names[static_cast<int>(bell)];
        }
    }
    return "?";
}

size_t bqt::schmidt_rank(const PureState &state, std::span<const QubitLabel> partition) {
    size_t n = state.num_qubits();
    if (partition.empty() || partition.size() >= n) {
        throw ContractViolation("schmidt_rank: partition must be a nonempty proper subset of the labels.");
    }
    std::vector<QubitLabel> order(partition.begin(), partition.end());
    for (const auto &label : state.labels()) {
        if (std::find(partition.begin(), partition.end(), label) == partition.end()) {
            order.push_back(label);
        }
    }
    PureState aligned = reorder(state, order);
    auto rows = Eigen::Index(1) << partition.size();
    auto cols = Eigen::Index(1) << (n - partition.size());
    Eigen::MatrixXcd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; r++) {
        for (Eigen::Index c = 0; c < cols; c++) {
            m(r, c) = aligned.amplitudes()[size_t(r * cols + c)];
        }
    }
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
    size_t rank = 0;
    for (Eigen::Index k = 0; k < svd.singularValues().size(); k++) {
        if (svd.singularValues()[k] > kTolerance) {
            rank++;
        }
    }
    return rank;
}

nlohmann::json bqt::state_to_json(const PureState &state) {
    nlohmann::json amps = nlohmann::json::array();
    for (const auto &a : state.amplitudes()) {
        amps.push_back({a.real(), a.imag()});
    }
    return {{"labels", state.labels()}, {"amps", std::move(amps)}};
}

PureState bqt::state_from_json(const nlohmann::json &j) {
    std::vector<QubitLabel> labels = j.at("labels").get<std::vector<QubitLabel>>();
    std::vector<Amplitude> amps;
    for (const auto &pair : j.at("amps")) {
        amps.emplace_back(pair.at(0).get<double>(), pair.at(1).get<double>());
    }
    return PureState::from_amplitudes(std::move(labels), std::move(amps));
}
