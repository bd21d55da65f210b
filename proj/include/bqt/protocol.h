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
#ifndef BQT_PROTOCOL_H
#define BQT_PROTOCOL_H

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "bqt/channels.h"
#include "bqt/efficiency.h"
#include "bqt/statevector.h"

namespace bqt {

/// Fidelity a protocol branch must reach to count as a successful transfer.
inline constexpr double kProtocolTolerance = 1e-9;

struct UnsupportedInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// No Pauli correction recovers the message for some outcome: the channel and plan do not fit.
struct ProtocolInfeasible : std::runtime_error {
    ProtocolInfeasible(const std::string &message, std::string outcome_bits)
        : std::runtime_error(message), outcome(std::move(outcome_bits)) {
    }
    std::string outcome;
};

/// The two computational basis strings a two-term message lives on.
struct Support {
    std::string zero;
    std::string one;

    /// |0...0>, |1...1> over n qubits.
    static Support ghz(size_t n);
    bool operator==(const Support &) const = default;
};

/// alpha|x> + beta|y> on labeled qubits held by one party.
class MessageState {
   public:
    static MessageState make(
        Amplitude alpha, Amplitude beta, Support support, std::vector<QubitLabel> labels, Party owner);
    /// alpha|0..0> + beta|1..1>
    static MessageState ghz(Amplitude alpha, Amplitude beta, std::vector<QubitLabel> labels, Party owner);

    Amplitude alpha() const {
        return alpha_;
    }
    Amplitude beta() const {
        return beta_;
    }
    const Support &support() const {
        return support_;
    }
    const std::vector<QubitLabel> &labels() const {
        return labels_;
    }
    Party owner() const {
        return owner_;
    }
    size_t size() const {
        return labels_.size();
    }

    PureState to_state() const;
    /// The same message written onto other qubits (same count, same order).
    PureState render(std::vector<QubitLabel> labels) const;

   private:
    Amplitude alpha_;
    Amplitude beta_;
    Support support_;
    std::vector<QubitLabel> labels_;
    Party owner_;
};

struct BellOutcome {
    int phase = 0;
    int parity = 0;

    std::string bits() const;
    BellIndex index() const;
};

struct GhzOutcome {
    int phase = 0;
    std::array<int, 2> parity{};

    std::string bits() const;
};

template <typename Outcome>
struct Measured {
    Outcome outcome;
    double probability;
    PureState post;
};

/// CNOT(q1->q2), H(q1), then Z measurement of (q1, q2). Enumerates every branch.
std::vector<Measured<BellOutcome>> bell_measure(const PureState &state, const QubitLabel &q1, const QubitLabel &q2);
Measured<BellOutcome> bell_measure(const PureState &state, const QubitLabel &q1, const QubitLabel &q2, Rng &rng);

/// CNOT(q1->q2), CNOT(q1->q3), H(q1), then Z measurement of (q1, q2, q3).
std::vector<Measured<GhzOutcome>> ghz_measure(
    const PureState &state, const QubitLabel &q1, const QubitLabel &q2, const QubitLabel &q3);
Measured<GhzOutcome> ghz_measure(
    const PureState &state, const QubitLabel &q1, const QubitLabel &q2, const QubitLabel &q3, Rng &rng);

/// Rotates the measured qubits (first one is the phase qubit) into the computational basis.
PureState to_entangled_basis(const PureState &state, std::span<const QubitLabel> qubits);

struct CompressResult {
    PureState state;
    QubitLabel carrier;
    /// Message qubits left in |0>.
    std::vector<QubitLabel> freed;
    /// Values the freed qubits held before they were reset to |0>.
    std::string freed_values;
    /// Whether the carrier was flipped so that the first support term reads 0 on it.
    bool carrier_flipped = false;
};

/// Moves alpha|x> + beta|y> onto a single carrier qubit (alpha|0> + beta|1>). The carrier is the first
/// position where x and y differ. Throws UnsupportedInput when the message qubits carry weight outside
/// span{|x>, |y>}.
CompressResult compress(const PureState &state, const MessageState &message);

/// Appends each aux qubit in |0> and applies CNOT(carrier -> aux): g|0> + d|1> becomes g|0..0> + d|1..1>.
PureState decompress(const PureState &state, const QubitLabel &carrier, std::span<const QubitLabel> aux);

/// Maps g|0..0> + d|1..1> on `reg` to g|x> + d|y>.
PureState shape_support(const PureState &state, std::span<const QubitLabel> reg, const Support &support);

struct TranscriptEntry {
    Party party;
    /// One of frame-fix, compress, bell, ghz, correct, aux, decompress.
    std::string kind;
    std::vector<QubitLabel> qubits;
    /// Measurement outcome, Pauli string, or freed-qubit values depending on kind.
    std::string bits;
};

/// One teleportation leg of a plan.
struct Direction {
    Party sender;
    size_t message_qubits;
    /// Width of the compressed message register fed into the measurement.
    size_t sent_width;
    /// Sender-held channel qubits measured together with the message register.
    std::vector<QubitLabel> measured_channel;
    /// Receiver-held channel qubits that end up carrying the message register.
    std::vector<QubitLabel> receive;

    Party receiver() const {
        return sender == Party::kAlice ? Party::kBob : Party::kAlice;
    }
    size_t measured_width() const {
        return sent_width + measured_channel.size();
    }
    size_t aux_needed() const {
        return message_qubits - receive.size();
    }
};

/// A local CZ one party applies to two of its own channel qubits before measuring.
struct FrameFix {
    Party party;
    QubitLabel first;
    QubitLabel second;

    bool operator==(const FrameFix &) const = default;
};

struct MeasurementPlan {
    std::string name;
    std::vector<ChannelSpec> channels;
    /// Outcome bits are keyed in this order.
    std::vector<Direction> directions;
    std::optional<FrameFix> frame_fix;

    PureState channel_state() const;
    size_t channel_qubits() const;
    size_t key_width() const;
    const Direction *direction_to(Party receiver) const;
};

/// Standard message labels: a1.. for Alice, b1.. for Bob.
std::vector<QubitLabel> message_labels(Party owner, size_t n);

/// Aux qubit labels the receiver introduces: auxA1.. for Alice, auxB1.. for Bob.
std::vector<QubitLabel> aux_labels(Party receiver, size_t n);

struct CorrectionEntry {
    /// Pauli string over Alice's receive qubits (empty when Alice receives nothing).
    std::string alice;
    std::string bob;
    bool reachable = true;
    /// How many candidate strings passed; 1 means the correction is unique.
    size_t alice_matches = 0;
    size_t bob_matches = 0;
};

struct CorrectionTable {
    std::string plan;
    std::optional<FrameFix> frame_fix;
    std::map<std::string, CorrectionEntry> entries;

    const CorrectionEntry &at(const std::string &bits) const;
    nlohmann::json to_json() const;
    static CorrectionTable from_json(const nlohmann::json &j);
};

/// Human-readable record of the bit-order and Bell-index conventions.
nlohmann::json convention_json();

/// Coefficient pairs used to pin down corrections.
std::vector<std::pair<Amplitude, Amplitude>> derivation_coefficients();

/// Searches {I,X,Z,Y}^k on each receiver's qubits for every outcome key, over all combinations of the
/// derivation coefficients. Keys that never occur are marked unreachable. Throws ProtocolInfeasible.
CorrectionTable derive_correction_table(const MeasurementPlan &plan);

struct ResolvedPlan {
    MeasurementPlan plan;
    CorrectionTable table;
};

/// Tries the plan as given, then with a CZ frame fix on either party's two channel qubits, and returns the
/// first one with a correction table.
ResolvedPlan resolve_plan(MeasurementPlan plan);

/// Four-qubit cluster-type channel; Alice Bell-measures (carrier, A1), Bob (carrier, B2); Bob receives on B1, Alice on A2.
MeasurementPlan improved_plan(TransferCase c);
/// Same legs over Phi+(A1,B1) x Phi+(A2,B2).
MeasurementPlan two_bell_pairs_plan(TransferCase c);
/// Textbook one-qubit teleportation from Alice to Bob over one Bell pair.
MeasurementPlan one_way_bell_plan(BellIndex index);
/// Six-qubit reference channel with GHZ measurements; the qubit grouping comes from a feasibility search.
MeasurementPlan find_zhou_plan(TransferCase c);

const ResolvedPlan &improved_protocol(TransferCase c);
const ResolvedPlan &zhou_protocol(TransferCase c);

struct MeasuredBranch {
    std::string bits;
    double probability;
    PureState state;
    std::vector<TranscriptEntry> transcript;
};

/// Builds messages (x) channel, applies the frame fix and compression, and measures every leg.
/// `messages` are given in direction order.
std::vector<MeasuredBranch> measurement_branches(const MeasurementPlan &plan, const std::vector<MessageState> &messages);
MeasuredBranch sample_branch(const MeasurementPlan &plan, const std::vector<MessageState> &messages, Rng &rng);

enum class CorrectionOrder { kBeforeDecompress, kAfterDecompress };

struct RunResult {
    std::string bits;
    double probability = 0;
    std::vector<TranscriptEntry> transcript;
    std::string alice_correction;
    std::string bob_correction;
    /// NaN-free; 1.0 reported for a leg the plan does not have.
    double fidelity_a_to_b = 1;
    double fidelity_b_to_a = 1;
    ResourceLedger ledger;

    double worst_fidelity() const {
        return std::min(fidelity_a_to_b, fidelity_b_to_a);
    }
};

/// Applies corrections and rebuilds each message at its receiver.
RunResult finish_branch(
    const MeasurementPlan &plan,
    const CorrectionTable &table,
    const MeasuredBranch &branch,
    const std::vector<MessageState> &messages,
    CorrectionOrder order = CorrectionOrder::kBeforeDecompress);

/// Resource counts read off a transcript.
ResourceLedger ledger_from_transcript(
    const MeasurementPlan &plan, const std::vector<MessageState> &messages, const std::vector<TranscriptEntry> &transcript);

std::vector<RunResult> run_protocol(const ResolvedPlan &resolved, const std::vector<MessageState> &messages);
RunResult run_protocol(const ResolvedPlan &resolved, const std::vector<MessageState> &messages, Rng &rng);

/// Alice's 2-qubit message, Bob's 2- or 3-qubit message. Enumerates every measurement branch.
std::vector<RunResult> run_bqt_improved(const MessageState &msg_a, const MessageState &msg_b);
RunResult run_bqt_improved(const MessageState &msg_a, const MessageState &msg_b, Rng &rng);
std::vector<RunResult> run_bqt_zhou(const MessageState &msg_a, const MessageState &msg_b);
RunResult run_bqt_zhou(const MessageState &msg_a, const MessageState &msg_b, Rng &rng);

/// 2 x (ceil(log2 m_A) + ceil(log2 m_B)) with m = 2 terms per message.
int64_t minimal_channel_qubits(const MessageState &msg_a, const MessageState &msg_b);

nlohmann::json transcript_json(const std::vector<TranscriptEntry> &transcript);
nlohmann::json run_result_json(const RunResult &result);

}  // namespace bqt

#endif
