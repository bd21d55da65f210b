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

#include <cmath>

#include "gtest/gtest.h"

#include "test_util.h"

using namespace bqt;

namespace {

const double kInvSqrt2 = 1 / std::sqrt(2.0);

}  // namespace

TEST(channels, six_qubit_channel_amplitudes) {
    auto s = make_channel_eq3();
    EXPECT_EQ(s.labels(), (std::vector<QubitLabel>{"1", "2", "3", "4", "5", "6"}));
    // 000000, 001011, 110100, 111111 read as binary.
    std::vector<size_t> support{0b000000, 0b001011, 0b110100, 0b111111};
    EXPECT_EQ(support, (std::vector<size_t>{0, 11, 52, 63}));
    size_t nonzero = 0;
    for (size_t k = 0; k < 64; k++) {
        bool on = std::find(support.begin(), support.end(), k) != support.end();
        EXPECT_EQ(s.amplitude(k), on ? Amplitude(0.5) : Amplitude(0)) << k;
        nonzero += s.amplitude(k) != Amplitude(0);
    }
    EXPECT_EQ(nonzero, 4u);
    EXPECT_EQ(s.amplitude(1), Amplitude(0));
    EXPECT_NEAR(s.norm_squared(), 1, 1e-12);
}

TEST(channels, four_qubit_channel_amplitudes) {
    auto s = make_channel_eq4();
    EXPECT_EQ(s.labels(), (std::vector<QubitLabel>{"A1", "B1", "A2", "B2"}));
    for (size_t k = 0; k < 16; k++) {
        Amplitude expected = k == 0 || k == 3 || k == 12 ? 0.5 : k == 15 ? -0.5 : 0.0;
        EXPECT_EQ(s.amplitude(k), expected) << k;
    }
    EXPECT_NEAR(s.norm_squared(), 1, 1e-12);
}

TEST(channels, four_qubit_channel_marginals_are_maximally_mixed) {
    auto s = make_channel_eq4();
    for (auto keep : {std::vector<QubitLabel>{"A1", "A2"}, std::vector<QubitLabel>{"B1", "B2"}}) {
        auto rho = partial_trace(s, keep).rho();
        for (int i = 0; i < 4; i++) {
            for (int j = 0; j < 4; j++) {
                EXPECT_NEAR(std::abs(rho(i, j) - (i == j ? 0.25 : 0.0)), 0, 1e-10);
            }
        }
    }
}

TEST(channels, bell_pairs) {
    std::array<QubitLabel, 2> q{"x", "y"};
    auto phi_plus = make_bell_pair(0, q);
    auto psi_plus = make_bell_pair(1, q);
    auto phi_minus = make_bell_pair(2, q);
    auto psi_minus = make_bell_pair(3, q);
    EXPECT_NEAR(std::abs(phi_plus.amplitude(0) - kInvSqrt2), 0, 1e-15);
    EXPECT_NEAR(std::abs(phi_plus.amplitude(3) - kInvSqrt2), 0, 1e-15);
    EXPECT_NEAR(std::abs(psi_plus.amplitude(1) - kInvSqrt2), 0, 1e-15);
    EXPECT_NEAR(std::abs(psi_plus.amplitude(2) - kInvSqrt2), 0, 1e-15);
    EXPECT_NEAR(std::abs(phi_minus.amplitude(3) + kInvSqrt2), 0, 1e-15);
    EXPECT_NEAR(std::abs(psi_minus.amplitude(2) + kInvSqrt2), 0, 1e-15);
    std::vector<PureState> all{phi_plus, psi_plus, phi_minus, psi_minus};
    for (size_t i = 0; i < 4; i++) {
        for (size_t j = 0; j < 4; j++) {
            EXPECT_NEAR(fidelity(all[i], all[j]), i == j ? 1.0 : 0.0, 1e-12);
        }
    }
    EXPECT_THROW(make_bell_pair(4, q), ContractViolation);
    EXPECT_THROW(make_bell_pair(-1, q), ContractViolation);
}

TEST(channels, schmidt_rank_examples) {
    auto phi = make_bell_pair(0, {"a", "b"});
    EXPECT_EQ(schmidt_rank(phi, std::vector<QubitLabel>{"a"}), 2u);
    EXPECT_EQ(schmidt_rank(PureState::basis({"a", "b"}, "00"), std::vector<QubitLabel>{"a"}), 1u);
    EXPECT_EQ(schmidt_rank(make_channel_eq4(), std::vector<QubitLabel>{"A1", "A2"}), 4u);
    EXPECT_THROW(schmidt_rank(phi, std::vector<QubitLabel>{}), ContractViolation);
    EXPECT_THROW(schmidt_rank(phi, std::vector<QubitLabel>{"a", "b"}), ContractViolation);
    EXPECT_THROW(schmidt_rank(phi, std::vector<QubitLabel>{"z"}), ContractViolation);
}

TEST(channels, four_qubit_channel_differs_from_two_bell_pairs_only_by_a_sign) {
    auto pairs = tensor(make_bell_pair(0, {"A1", "B1"}), make_bell_pair(0, {"A2", "B2"}));
    std::vector<QubitLabel> order{"A1", "B1", "A2", "B2"};
    auto pairs_ordered = reorder(pairs, order);
    auto channel = make_channel_eq4();
    auto fixed = apply_gate(pairs_ordered, Gate::CZ(), {"A1", "A2"});
    EXPECT_NEAR(fidelity(channel, fixed), 1, 1e-12);
    // <Phi+ Phi+|channel> = (1 + 1 + 1 - 1) / 4 = 1/2.
    EXPECT_NEAR(fidelity(channel, pairs_ordered), 0.25, 1e-12);
}

TEST(channels, schmidt_rank_of_four_qubit_channel_across_the_pair_cut) {
    // Grouped as (A1 B1)(A2 B2) the amplitudes form [[1, 1], [1, -1]] / 2 on {00, 11}: rank 2, the same as
    // two Bell pairs, since the sign is a local CZ on Alice's side.
    EXPECT_EQ(schmidt_rank(make_channel_eq4(), std::vector<QubitLabel>{"A1", "B1"}), 2u);
    auto pairs = tensor(make_bell_pair(0, {"A1", "B1"}), make_bell_pair(0, {"A2", "B2"}));
    EXPECT_EQ(schmidt_rank(pairs, std::vector<QubitLabel>{"A1", "B1"}), 1u);
}

TEST(channels, every_channel_is_normalized) {
    std::array<Party, 6> owners{Party::kAlice, Party::kAlice, Party::kAlice, Party::kBob, Party::kBob, Party::kBob};
    std::vector<ChannelSpec> specs{
        ChannelSpec::six_qubit_zhou(owners), ChannelSpec::four_qubit_improved(),
        ChannelSpec::bell_pair(BellIndex::kPsiMinus, "A", "B")};
    for (const auto &spec : specs) {
        auto s = spec.state();
        EXPECT_NEAR(s.norm_squared(), 1, 1e-10) << spec.name();
        EXPECT_EQ(spec.ownership.size(), spec.labels.size());
    }
    EXPECT_EQ(specs[0].labels.size(), 6u);
    EXPECT_EQ(specs[1].labels.size(), 4u);
    EXPECT_EQ(specs[2].labels.size(), 2u);
    EXPECT_EQ(specs[1].qubits_of(Party::kAlice), (std::vector<QubitLabel>{"A1", "A2"}));
    EXPECT_EQ(specs[1].qubits_of(Party::kBob), (std::vector<QubitLabel>{"B1", "B2"}));
    EXPECT_EQ(specs[1].name(), "eq4");
    EXPECT_EQ(specs[0].name(), "eq3");
    EXPECT_EQ(specs[2].name(), "bell-psi-minus");
}

TEST(channels, json_round_trip) {
    auto s = make_channel_eq4();
    auto j = state_to_json(s);
    EXPECT_EQ(j["labels"], nlohmann::json({"A1", "B1", "A2", "B2"}));
    EXPECT_EQ(j["amps"].size(), 16u);
    EXPECT_EQ(j["amps"][15], nlohmann::json({-0.5, 0.0}));
    auto back = state_from_json(j);
    EXPECT_EQ(back.amplitudes(), s.amplitudes());
    EXPECT_EQ(state_to_json(back).dump(), j.dump());
}
