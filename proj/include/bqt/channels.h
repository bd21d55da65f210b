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
#ifndef BQT_CHANNELS_H
#define BQT_CHANNELS_H

#include <array>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "bqt/statevector.h"

namespace bqt {

enum class Party { kAlice, kBob };

const char *party_name(Party party);

/// Bell basis index, keyed by the (phase bit, parity bit) readout of the CNOT+H circuit:
/// 0 = Phi+ (00), 1 = Psi+ (01), 2 = Phi- (10), 3 = Psi- (11).
enum class BellIndex : int { kPhiPlus = 0, kPsiPlus = 1, kPhiMinus = 2, kPsiMinus = 3 };

struct ChannelSpec {
    enum class Kind { kSixQubitZhou, kFourQubitImproved, kBellPair };

    Kind kind;
    BellIndex bell = BellIndex::kPhiPlus;
    std::vector<QubitLabel> labels;
    std::map<QubitLabel, Party> ownership;

    static ChannelSpec six_qubit_zhou(const std::array<Party, 6> &owners);
    static ChannelSpec four_qubit_improved();
    static ChannelSpec bell_pair(BellIndex index, QubitLabel alice_qubit, QubitLabel bob_qubit);

    PureState state() const;
    std::vector<QubitLabel> qubits_of(Party party) const;
    std::string name() const;
};

/// 1/2 (|000000> + |001011> + |110100> + |111111>) on qubits "1".."6".
PureState make_channel_eq3();

/// 1/2 (|0000> + |0011> + |1100> - |1111>) on A1, B1, A2, B2.
PureState make_channel_eq4();

PureState make_bell_pair(int index, const std::array<QubitLabel, 2> &labels);

/// Number of singular values above kTolerance of the amplitudes reshaped along (partition | rest).
size_t schmidt_rank(const PureState &state, std::span<const QubitLabel> partition);

/// { "labels": [...], "amps": [[re, im], ...] } in index order.
nlohmann::json state_to_json(const PureState &state);
PureState state_from_json(const nlohmann::json &j);

}  // namespace bqt

#endif
