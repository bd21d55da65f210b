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
#include "bqt/protocol.h"

#include <algorithm>
#include <cmath>
#include <set>

using namespace bqt;

namespace {

bool is_bitstring(const std::string &s) {
    return std::all_of(s.begin(), s.end(), [](char c) {
        return c == '0' || c == '1';
    });
}

size_t first_difference(const Support &support) {
    for (size_t k = 0; k < support.zero.size(); k++) {
        if (support.zero[k] != support.one[k]) {
            return k;
        }
    }
    throw ContractViolation("Support strings must differ.");
}

const char *measurement_kind(size_t width) {
    switch (width) {
        case 2:
            return "bell";
        case 3:
            return "ghz";
        default:
            return "entangled";
    }
}

/// All strings over {I,X,Z,Y} of the given length, in that letter order.
std::vector<std::string> pauli_candidates(size_t width) {
    std::vector<std::string> out{""};
    for (size_t k = 0; k < width; k++) {
        std::vector<std::string> next;
        for (const auto &prefix : out) {
            for (char c : {'I', 'X', 'Z', 'Y'}) {
                next.push_back(prefix + c);
            }
        }
        out = std::move(next);
    }
    return out;
}

const Gate &pauli_gate(char c) {
    static const Gate i = Gate::I(), x = Gate::X(), y = Gate::Y(), z = Gate::Z();
    switch (c) {
        case 'I':
            return i;
        case 'X':
            return x;
        case 'Y':
            return y;
        case 'Z':
            return z;
        default:
            throw ContractViolation("Unknown Pauli '" + std::string(1, c) + "'.");
    }
}

PureState apply_paulis(PureState state, const std::string &paulis, std::span<const QubitLabel> qubits) {
    if (paulis.size() != qubits.size()) {
        throw ContractViolation("Pauli string length does not match the qubit count.");
    }
    for (size_t k = 0; k < qubits.size(); k++) {
        if (paulis[k] != 'I') {
            state = apply_gate(state, pauli_gate(paulis[k]), {qubits[k]});
        }
    }
    return state;
}

void check_messages(const MeasurementPlan &plan, const std::vector<MessageState> &messages) {
    if (messages.size() != plan.directions.size()) {
        throw ContractViolation(
            "Plan '" + plan.name + "' has " + std::to_string(plan.directions.size()) + " legs but " +
            std::to_string(messages.size()) + " messages were given.");
    }
    for (size_t d = 0; d < messages.size(); d++) {
        const auto &leg = plan.directions[d];
        if (messages[d].owner() != leg.sender) {
            throw ContractViolation(std::string("Message ") + std::to_string(d) + " must be owned by " +
                                    party_name(leg.sender) + ".");
        }
        if (messages[d].size() != leg.message_qubits) {
            throw ContractViolation(
                std::string("Leg from ") + party_name(leg.sender) + " expects a " +
                std::to_string(leg.message_qubits) + "-qubit message.");
        }
    }
}

struct LegOutput {
    PureState state;
    std::vector<QubitLabel> reg;
    std::vector<QubitLabel> aux;
};

/// Correction plus reconstruction of one leg at its receiver.
LegOutput rebuild_leg(
    PureState state, const Direction &leg, const MessageState &message, const std::string &paulis, CorrectionOrder order) {
    if (order == CorrectionOrder::kBeforeDecompress) {
        state = apply_paulis(std::move(state), paulis, leg.receive);
    }
    auto aux = aux_labels(leg.receiver(), leg.aux_needed());
    if (!aux.empty()) {
        state = decompress(state, leg.receive.front(), aux);
    }
    std::vector<QubitLabel> reg = leg.receive;
    reg.insert(reg.end(), aux.begin(), aux.end());
    state = shape_support(state, reg, message.support());
    if (order == CorrectionOrder::kAfterDecompress) {
        state = apply_paulis(std::move(state), paulis, leg.receive);
    }
    return {std::move(state), std::move(reg), std::move(aux)};
}

double leg_fidelity(const LegOutput &out, const MessageState &message) {
    return fidelity(partial_trace(out.state, out.reg), message.render(out.reg));
}

struct Prepared {
    PureState state;
    std::vector<TranscriptEntry> transcript;
    /// Measured qubits per leg, phase qubit first.
    std::vector<std::vector<QubitLabel>> measured;
};

Prepared prepare(const MeasurementPlan &plan, const std::vector<MessageState> &messages) {
    check_messages(plan, messages);
    Prepared out{PureState(), {}, {}};
    for (const auto &m : messages) {
        out.state = tensor(out.state, m.to_state());
    }
    out.state = tensor(out.state, plan.channel_state());

    if (plan.frame_fix) {
        const auto &fix = *plan.frame_fix;
        out.state = apply_gate(out.state, Gate::CZ(), {fix.first, fix.second});
        out.transcript.push_back({fix.party, "frame-fix", {fix.first, fix.second}, "CZ"});
    }

    for (size_t d = 0; d < plan.directions.size(); d++) {
        const auto &leg = plan.directions[d];
        const auto &message = messages[d];
        std::vector<QubitLabel> sent;
        if (leg.sent_width == message.size() && message.support() == Support::ghz(message.size())) {
            sent = message.labels();
        } else {
            if (leg.sent_width == 0 || leg.sent_width > message.size()) {
                throw ContractViolation("Sent register width must be between 1 and the message size.");
            }
            CompressResult c = compress(out.state, message);
            out.transcript.push_back({leg.sender, "compress", message.labels(), c.freed_values});
            out.state = std::move(c.state);
            sent.push_back(c.carrier);
            std::vector<QubitLabel> spread;
            for (size_t k = 0; k + 1 < leg.sent_width; k++) {
                out.state = apply_gate(out.state, Gate::CNOT(), {c.carrier, c.freed[k]});
                sent.push_back(c.freed[k]);
                spread.push_back(c.freed[k]);
            }
            if (!spread.empty()) {
                spread.insert(spread.begin(), c.carrier);
                out.transcript.push_back({leg.sender, "decompress", spread, ""});
            }
        }
        sent.insert(sent.end(), leg.measured_channel.begin(), leg.measured_channel.end());
        out.measured.push_back(std::move(sent));
    }
    return out;
}

}  // namespace

Support Support::ghz(size_t n) {
    return Support{std::string(n, '0'), std::string(n, '1')};
}

MessageState MessageState::make(
    Amplitude alpha, Amplitude beta, Support support, std::vector<QubitLabel> labels, Party owner) {
    if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag()) || !std::isfinite(beta.real()) ||
        !std::isfinite(beta.imag())) {
        throw ContractViolation("Message coefficients must be finite.");
    }
    double norm = std::norm(alpha) + std::norm(beta);
    if (std::abs(norm - 1.0) > kTolerance) {
        throw NormalizationError("Message coefficients are not normalized (|alpha|^2 + |beta|^2 = " +
                                 std::to_string(norm) + ").");
    }
    if (labels.empty() || support.zero.size() != labels.size() || support.one.size() != labels.size()) {
        throw ContractViolation("Support strings must match the number of message qubits.");
    }
    if (!is_bitstring(support.zero) || !is_bitstring(support.one)) {
        throw ContractViolation("Support strings must be binary.");
    }
    if (support.zero == support.one) {
        throw ContractViolation("Support strings must differ.");
    }
    MessageState m;
    m.alpha_ = alpha;
    m.beta_ = beta;
    m.support_ = std::move(support);
    m.labels_ = std::move(labels);
    m.owner_ = owner;
    // Label validity.
    (void)m.to_state();
    return m;
}

MessageState MessageState::ghz(Amplitude alpha, Amplitude beta, std::vector<QubitLabel> labels, Party owner) {
    Support support = Support::ghz(labels.size());
    return make(alpha, beta, std::move(support), std::move(labels), owner);
}

PureState MessageState::to_state() const {
    return render(labels_);
}

PureState MessageState::render(std::vector<QubitLabel> labels) const {
    if (labels.size() != labels_.size()) {
        throw ContractViolation("render: label count mismatch.");
    }
    std::vector<Amplitude> amps(size_t{1} << labels.size(), 0.0);
    amps[std::stoull(support_.zero, nullptr, 2)] = alpha_;
    amps[std::stoull(support_.one, nullptr, 2)] = beta_;
    return PureState::from_amplitudes(std::move(labels), std::move(amps));
}

std::string BellOutcome::bits() const {
    return std::string{char('0' + phase), char('0' + parity)};
}

BellIndex BellOutcome::index() const {
    return static_cast<BellIndex>(2 * phase + parity);
}

std::string GhzOutcome::bits() const {
    return std::string{char('0' + phase), char('0' + parity[0]), char('0' + parity[1])};
}

PureState bqt::to_entangled_basis(const PureState &state, std::span<const QubitLabel> qubits) {
    if (qubits.size() < 2) {
        throw ContractViolation("Entangled-basis measurement needs at least two qubits.");
    }
    PureState s = state;
    for (size_t k = 1; k < qubits.size(); k++) {
        s = apply_gate(s, Gate::CNOT(), {qubits[0], qubits[k]});
    }
    return apply_gate(s, Gate::H(), {qubits[0]});
}

std::vector<Measured<BellOutcome>> bqt::bell_measure(const PureState &state, const QubitLabel &q1, const QubitLabel &q2) {
    std::vector<QubitLabel> qs{q1, q2};
    std::vector<Measured<BellOutcome>> out;
    for (auto &b : branch_enumerate(to_entangled_basis(state, qs), qs)) {
        out.push_back({BellOutcome{b.bits[0] - '0', b.bits[1] - '0'}, b.probability, std::move(b.post)});
    }
    return out;
}

Measured<BellOutcome> bqt::bell_measure(const PureState &state, const QubitLabel &q1, const QubitLabel &q2, Rng &rng) {
    std::vector<QubitLabel> qs{q1, q2};
    PureState rotated = to_entangled_basis(state, qs);
    auto s = sample_measure(rotated, qs, rng);
    double p = 0;
    for (const auto &b : branch_enumerate(rotated, qs)) {
        if (b.bits == s.bits) {
            p = b.probability;
        }
    }
    return {BellOutcome{s.bits[0] - '0', s.bits[1] - '0'}, p, std::move(s.post)};
}

std::vector<Measured<GhzOutcome>> bqt::ghz_measure(
    const PureState &state, const QubitLabel &q1, const QubitLabel &q2, const QubitLabel &q3) {
    std::vector<QubitLabel> qs{q1, q2, q3};
    std::vector<Measured<GhzOutcome>> out;
    for (auto &b : branch_enumerate(to_entangled_basis(state, qs), qs)) {
        out.push_back({GhzOutcome{b.bits[0] - '0', {b.bits[1] - '0', b.bits[2] - '0'}}, b.probability, std::move(b.post)});
    }
    return out;
}

Measured<GhzOutcome> bqt::ghz_measure(
    const PureState &state, const QubitLabel &q1, const QubitLabel &q2, const QubitLabel &q3, Rng &rng) {
    std::vector<QubitLabel> qs{q1, q2, q3};
    PureState rotated = to_entangled_basis(state, qs);
    auto s = sample_measure(rotated, qs, rng);
    double p = 0;
    for (const auto &b : branch_enumerate(rotated, qs)) {
        if (b.bits == s.bits) {
            p = b.probability;
        }
    }
    return {GhzOutcome{s.bits[0] - '0', {s.bits[1] - '0', s.bits[2] - '0'}}, p, std::move(s.post)};
}

CompressResult bqt::compress(const PureState &state, const MessageState &message) {
    const auto &labels = message.labels();
    const auto &support = message.support();
    size_t n = state.num_qubits();
    std::vector<size_t> weights;
    for (const auto &label : labels) {
        weights.push_back(size_t{1} << (n - 1 - state.position(label)));
    }
    size_t x = std::stoull(support.zero, nullptr, 2);
    size_t y = std::stoull(support.one, nullptr, 2);
    double outside = 0;
    for (size_t i = 0; i < state.amplitudes().size(); i++) {
        size_t local = 0;
        for (size_t w : weights) {
            local = (local << 1) | ((i & w) ? 1 : 0);
        }
        if (local != x && local != y) {
            outside += std::norm(state.amplitudes()[i]);
        }
    }
    if (outside > kTolerance) {
        throw UnsupportedInput("compress: message qubits have weight " + std::to_string(outside) +
                               " outside span{|" + support.zero + ">, |" + support.one + ">}.");
    }

    size_t pivot = first_difference(support);
    CompressResult out{state, labels[pivot], {}, "", false};
    if (support.zero[pivot] == '1') {
        out.state = apply_gate(out.state, Gate::X(), {labels[pivot]});
        out.carrier_flipped = true;
    }
    for (size_t j = 0; j < labels.size(); j++) {
        if (j != pivot && support.zero[j] != support.one[j]) {
            out.state = apply_gate(out.state, Gate::CNOT(), {labels[pivot], labels[j]});
        }
    }
    // Every other qubit now holds support.zero[j] in both terms.
    for (size_t j = 0; j < labels.size(); j++) {
        if (j == pivot) {
            continue;
        }
        out.freed.push_back(labels[j]);
        out.freed_values.push_back(support.zero[j]);
        if (support.zero[j] == '1') {
            out.state = apply_gate(out.state, Gate::X(), {labels[j]});
        }
    }
    return out;
}

PureState bqt::decompress(const PureState &state, const QubitLabel &carrier, std::span<const QubitLabel> aux) {
    if (!state.has_label(carrier)) {
        throw ContractViolation("decompress: unknown carrier '" + carrier + "'.");
    }
    PureState s = state;
    for (const auto &label : aux) {
        s = tensor(s, PureState::basis({label}, "0"));
        s = apply_gate(s, Gate::CNOT(), {carrier, label});
    }
    return s;
}

PureState bqt::shape_support(const PureState &state, std::span<const QubitLabel> reg, const Support &support) {
    if (reg.size() != support.zero.size()) {
        throw ContractViolation("shape_support: register and support sizes differ.");
    }
    size_t pivot = first_difference(support);
    PureState s = state;
    for (size_t j = 0; j < reg.size(); j++) {
        if (j == pivot) {
            continue;
        }
        if (support.zero[j] == support.one[j]) {
            s = apply_gate(s, Gate::CNOT(), {reg[pivot], reg[j]});
        }
        if (support.zero[j] == '1') {
            s = apply_gate(s, Gate::X(), {reg[j]});
        }
    }
    if (support.zero[pivot] == '1') {
        s = apply_gate(s, Gate::X(), {reg[pivot]});
    }
    return s;
}

PureState MeasurementPlan::channel_state() const {
    PureState s;
    for (const auto &c : channels) {
        s = tensor(s, c.state());
    }
    return s;
}

size_t MeasurementPlan::channel_qubits() const {
    size_t n = 0;
    for (const auto &c : channels) {
        n += c.labels.size();
    }
    return n;
}

size_t MeasurementPlan::key_width() const {
    size_t n = 0;
    for (const auto &d : directions) {
        n += d.measured_width();
    }
    return n;
}

const Direction *MeasurementPlan::direction_to(Party receiver) const {
    for (const auto &d : directions) {
        if (d.receiver() == receiver) {
            return &d;
        }
    }
    return nullptr;
}

std::vector<QubitLabel> bqt::message_labels(Party owner, size_t n) {
    std::vector<QubitLabel> out;
    for (size_t k = 1; k <= n; k++) {
        out.push_back((owner == Party::kAlice ? "a" : "b") + std::to_string(k));
    }
    return out;
}

std::vector<QubitLabel> bqt::aux_labels(Party receiver, size_t n) {
    std::vector<QubitLabel> out;
    for (size_t k = 1; k <= n; k++) {
        out.push_back((receiver == Party::kAlice ? "auxA" : "auxB") + std::to_string(k));
    }
    return out;
}

const CorrectionEntry &CorrectionTable::at(const std::string &bits) const {
    auto it = entries.find(bits);
    if (it == entries.end()) {
        throw ContractViolation("No correction entry for outcome '" + bits + "'.");
    }
    return it->second;
}

nlohmann::json bqt::convention_json() {
    return {
        {"bit_order", "first label is the most significant bit of the amplitude index"},
        {"bell_readout", "CNOT(q1->q2), H(q1), measure (q1,q2) -> (phase bit, parity bit)"},
        {"bell_index", {{"00", "phi+"}, {"01", "psi+"}, {"10", "phi-"}, {"11", "psi-"}}},
        {"ghz_readout", "CNOT(q1->q2), CNOT(q1->q3), H(q1), measure (q1,q2,q3) -> (phase bit, parity bits)"},
        {"key_order", "alice's outcome bits, then bob's"},
        {"pauli_y", "XZ = [[0,-1],[1,0]] (global phase dropped)"},
    };
}

nlohmann::json CorrectionTable::to_json() const {
    nlohmann::json j_entries = nlohmann::json::object();
    for (const auto &[bits, e] : entries) {
        nlohmann::json v = {
            {"alice", e.alice}, {"bob", e.bob}, {"alice_matches", e.alice_matches}, {"bob_matches", e.bob_matches}};
        if (!e.reachable) {
            v["reachable"] = false;
        }
        j_entries[bits] = std::move(v);
    }
    nlohmann::json fix = nullptr;
    if (frame_fix) {
        fix = {{"party", party_name(frame_fix->party)}, {"gate", "CZ"}, {"qubits", {frame_fix->first, frame_fix->second}}};
    }
    return {{"convention", convention_json()}, {"plan", plan}, {"frame_fix", fix}, {"entries", std::move(j_entries)}};
}

CorrectionTable CorrectionTable::from_json(const nlohmann::json &j) {
    CorrectionTable t;
    t.plan = j.at("plan").get<std::string>();
    const auto &fix = j.at("frame_fix");
    if (!fix.is_null()) {
        Party p = fix.at("party").get<std::string>() == "alice" ? Party::kAlice : Party::kBob;
        t.frame_fix = FrameFix{p, fix.at("qubits").at(0).get<std::string>(), fix.at("qubits").at(1).get<std::string>()};
    }
    for (const auto &[bits, v] : j.at("entries").items()) {
        CorrectionEntry e;
        e.alice = v.at("alice").get<std::string>();
        e.bob = v.at("bob").get<std::string>();
        e.alice_matches = v.at("alice_matches").get<size_t>();
        e.bob_matches = v.at("bob_matches").get<size_t>();
        e.reachable = v.value("reachable", true);
        t.entries[bits] = std::move(e);
    }
    return t;
}

std::vector<std::pair<Amplitude, Amplitude>> bqt::derivation_coefficients() {
    double s = std::sqrt(0.5);
    return {{1.0, 0.0}, {s, s}, {0.6, Amplitude(0.0, 0.8)}};
}

CorrectionTable bqt::derive_correction_table(const MeasurementPlan &plan) {
    size_t legs = plan.directions.size();
    if (legs == 0) {
        throw ContractViolation("Plan has no teleportation legs.");
    }
    auto coeffs = derivation_coefficients();

    struct Pending {
        bool seen = false;
        // Per leg, candidate strings still passing every test state that reached this key.
        std::vector<std::vector<std::string>> passing;
    };
    std::map<std::string, Pending> keys;
    std::vector<std::vector<std::string>> all_candidates;
    for (const auto &leg : plan.directions) {
        all_candidates.push_back(pauli_candidates(leg.receive.size()));
    }

    size_t combos = 1;
    for (size_t d = 0; d < legs; d++) {
        combos *= coeffs.size();
    }
    for (size_t combo = 0; combo < combos; combo++) {
        std::vector<MessageState> messages;
        size_t rest = combo;
        for (const auto &leg : plan.directions) {
            const auto &[alpha, beta] = coeffs[rest % coeffs.size()];
            rest /= coeffs.size();
            messages.push_back(
                MessageState::ghz(alpha, beta, message_labels(leg.sender, leg.message_qubits), leg.sender));
        }
        for (const auto &branch : measurement_branches(plan, messages)) {
            auto &pending = keys[branch.bits];
            if (!pending.seen) {
                pending.seen = true;
                pending.passing = all_candidates;
            }
            for (size_t d = 0; d < legs; d++) {
                auto &passing = pending.passing[d];
                std::erase_if(passing, [&](const std::string &paulis) {
                    auto out = rebuild_leg(
                        branch.state, plan.directions[d], messages[d], paulis, CorrectionOrder::kBeforeDecompress);
                    return leg_fidelity(out, messages[d]) < 1 - kProtocolTolerance;
                });
                if (passing.empty()) {
                    throw ProtocolInfeasible(
                        "Plan '" + plan.name + "': no Pauli correction on " +
                            party_name(plan.directions[d].receiver()) + "'s qubits recovers outcome " + branch.bits + ".",
                        branch.bits);
                }
            }
        }
    }

    CorrectionTable table;
    table.plan = plan.name;
    table.frame_fix = plan.frame_fix;
    size_t width = plan.key_width();
    for (size_t k = 0; k < (size_t{1} << width); k++) {
        std::string bits(width, '0');
        for (size_t j = 0; j < width; j++) {
            if (k & (size_t{1} << (width - 1 - j))) {
                bits[j] = '1';
            }
        }
        CorrectionEntry e;
        auto it = keys.find(bits);
        e.reachable = it != keys.end();
        for (size_t d = 0; d < legs; d++) {
            const auto &leg = plan.directions[d];
            std::string chosen = e.reachable ? it->second.passing[d].front() : std::string(leg.receive.size(), 'I');
            size_t matches = e.reachable ? it->second.passing[d].size() : 0;
            if (leg.receiver() == Party::kAlice) {
                e.alice = chosen;
                e.alice_matches = matches;
            } else {
                e.bob = chosen;
                e.bob_matches = matches;
            }
        }
        table.entries[bits] = std::move(e);
    }
    return table;
}

ResolvedPlan bqt::resolve_plan(MeasurementPlan plan) {
    std::vector<std::optional<FrameFix>> fixes{std::nullopt};
    for (Party party : {Party::kAlice, Party::kBob}) {
        std::vector<QubitLabel> own;
        for (const auto &c : plan.channels) {
            auto q = c.qubits_of(party);
            own.insert(own.end(), q.begin(), q.end());
        }
        if (own.size() == 2) {
            fixes.push_back(FrameFix{party, own[0], own[1]});
        }
    }
    std::optional<ProtocolInfeasible> first_failure;
    for (const auto &fix : fixes) {
        plan.frame_fix = fix;
        try {
            CorrectionTable table = derive_correction_table(plan);
            return ResolvedPlan{plan, std::move(table)};
        } catch (const ProtocolInfeasible &e) {
            if (!first_failure) {
                first_failure = e;
            }
        }
    }
    throw *first_failure;
}

MeasurementPlan bqt::improved_plan(TransferCase c) {
    size_t nb = c == TransferCase::kTwoTwo ? 2 : 3;
    return MeasurementPlan{
        "improved-eq4",
        {ChannelSpec::four_qubit_improved()},
        {Direction{Party::kAlice, 2, 1, {"A1"}, {"B1"}}, Direction{Party::kBob, nb, 1, {"B2"}, {"A2"}}},
        std::nullopt};
}

MeasurementPlan bqt::two_bell_pairs_plan(TransferCase c) {
    size_t nb = c == TransferCase::kTwoTwo ? 2 : 3;
    return MeasurementPlan{
        "improved-phi-plus-x2",
        {ChannelSpec::bell_pair(BellIndex::kPhiPlus, "A1", "B1"), ChannelSpec::bell_pair(BellIndex::kPhiPlus, "A2", "B2")},
        {Direction{Party::kAlice, 2, 1, {"A1"}, {"B1"}}, Direction{Party::kBob, nb, 1, {"B2"}, {"A2"}}},
        std::nullopt};
}

MeasurementPlan bqt::one_way_bell_plan(BellIndex index) {
    auto channel = ChannelSpec::bell_pair(index, "A1", "B1");
    return MeasurementPlan{
        "one-way-" + channel.name(), {channel}, {Direction{Party::kAlice, 1, 1, {"A1"}, {"B1"}}}, std::nullopt};
}

MeasurementPlan bqt::find_zhou_plan(TransferCase c) {
    size_t nb = c == TransferCase::kTwoTwo ? 2 : 3;
    // Each party holds three channel qubits and GHZ-measures a two-qubit message register together with one
    // of them; the other two receive. Groupings are tried in lexicographic order.
    std::vector<std::array<Party, 6>> splits;
    for (int a = 0; a < 6; a++) {
        for (int b = a + 1; b < 6; b++) {
            for (int d = b + 1; d < 6; d++) {
                std::array<Party, 6> owners;
                owners.fill(Party::kBob);
                owners[size_t(a)] = owners[size_t(b)] = owners[size_t(d)] = Party::kAlice;
                splits.push_back(owners);
            }
        }
    }
    for (const auto &owners : splits) {
        auto channel = ChannelSpec::six_qubit_zhou(owners);
        auto alice = channel.qubits_of(Party::kAlice);
        auto bob = channel.qubits_of(Party::kBob);
        for (size_t ia = 0; ia < 3; ia++) {
            for (size_t ib = 0; ib < 3; ib++) {
                std::vector<QubitLabel> alice_keep, bob_keep;
                for (size_t k = 0; k < 3; k++) {
                    if (k != ia) {
                        alice_keep.push_back(alice[k]);
                    }
                    if (k != ib) {
                        bob_keep.push_back(bob[k]);
                    }
                }
                MeasurementPlan plan{
                    "zhou-eq3",
                    {channel},
                    {Direction{Party::kAlice, 2, 2, {alice[ia]}, bob_keep},
                     Direction{Party::kBob, nb, 2, {bob[ib]}, alice_keep}},
                    std::nullopt};
                try {
                    derive_correction_table(plan);
                    return plan;
                } catch (const ProtocolInfeasible &) {
                }
            }
        }
    }
    throw ProtocolInfeasible("No qubit grouping of the six-qubit channel supports GHZ-basis teleportation.", "");
}

const ResolvedPlan &bqt::improved_protocol(TransferCase c) {
    static const ResolvedPlan two = resolve_plan(improved_plan(TransferCase::kTwoTwo));
    static const ResolvedPlan three = resolve_plan(improved_plan(TransferCase::kTwoThree));
    return c == TransferCase::kTwoTwo ? two : three;
}

const ResolvedPlan &bqt::zhou_protocol(TransferCase c) {
    static const ResolvedPlan two = resolve_plan(find_zhou_plan(TransferCase::kTwoTwo));
    static const ResolvedPlan three = resolve_plan(find_zhou_plan(TransferCase::kTwoThree));
    return c == TransferCase::kTwoTwo ? two : three;
}

std::vector<MeasuredBranch> bqt::measurement_branches(
    const MeasurementPlan &plan, const std::vector<MessageState> &messages) {
    Prepared prep = prepare(plan, messages);
    std::vector<MeasuredBranch> current{{"", 1.0, std::move(prep.state), std::move(prep.transcript)}};
    for (size_t d = 0; d < plan.directions.size(); d++) {
        const auto &qubits = prep.measured[d];
        const char *kind = measurement_kind(qubits.size());
        std::vector<MeasuredBranch> next;
        for (const auto &b : current) {
            for (auto &m : branch_enumerate(to_entangled_basis(b.state, qubits), qubits)) {
                MeasuredBranch nb{b.bits + m.bits, b.probability * m.probability, std::move(m.post), b.transcript};
                nb.transcript.push_back({plan.directions[d].sender, kind, qubits, m.bits});
                next.push_back(std::move(nb));
            }
        }
        current = std::move(next);
    }
    return current;
}

MeasuredBranch bqt::sample_branch(const MeasurementPlan &plan, const std::vector<MessageState> &messages, Rng &rng) {
    Prepared prep = prepare(plan, messages);
    MeasuredBranch b{"", 1.0, std::move(prep.state), std::move(prep.transcript)};
    for (size_t d = 0; d < plan.directions.size(); d++) {
        const auto &qubits = prep.measured[d];
        PureState rotated = to_entangled_basis(b.state, qubits);
        auto s = sample_measure(rotated, qubits, rng);
        for (const auto &m : branch_enumerate(rotated, qubits)) {
            if (m.bits == s.bits) {
                b.probability *= m.probability;
            }
        }
        b.bits += s.bits;
        b.state = std::move(s.post);
        b.transcript.push_back({plan.directions[d].sender, measurement_kind(qubits.size()), qubits, s.bits});
    }
    return b;
}

ResourceLedger bqt::ledger_from_transcript(
    const MeasurementPlan &plan, const std::vector<MessageState> &messages, const std::vector<TranscriptEntry> &transcript) {
    ResourceLedger ledger;
    for (const auto &m : messages) {
        ledger.info_qubits += int64_t(m.size());
    }
    ledger.channel_qubits = int64_t(plan.channel_qubits());
    for (const auto &e : transcript) {
        if (e.kind == "bell" || e.kind == "ghz" || e.kind == "entangled") {
            ledger.classical_bits += int64_t(e.bits.size());
        } else if (e.kind == "aux") {
            ledger.aux_qubits += int64_t(e.qubits.size());
        }
    }
    return ledger;
}

RunResult bqt::finish_branch(
    const MeasurementPlan &plan,
    const CorrectionTable &table,
    const MeasuredBranch &branch,
    const std::vector<MessageState> &messages,
    CorrectionOrder order) {
    check_messages(plan, messages);
    const auto &entry = table.at(branch.bits);
    if (!entry.reachable) {
        throw ProtocolInfeasible("Outcome " + branch.bits + " is marked unreachable in the table.", branch.bits);
    }
    RunResult r;
    r.bits = branch.bits;
    r.probability = branch.probability;
    r.transcript = branch.transcript;
    r.alice_correction = entry.alice;
    r.bob_correction = entry.bob;

    PureState state = branch.state;
    for (size_t d = 0; d < plan.directions.size(); d++) {
        const auto &leg = plan.directions[d];
        Party receiver = leg.receiver();
        const std::string &paulis = receiver == Party::kAlice ? entry.alice : entry.bob;
        LegOutput out = rebuild_leg(std::move(state), leg, messages[d], paulis, order);
        r.transcript.push_back({receiver, "correct", leg.receive, paulis});
        if (!out.aux.empty()) {
            r.transcript.push_back({receiver, "aux", out.aux, std::string(out.aux.size(), '0')});
            r.transcript.push_back({receiver, "decompress", out.reg, ""});
        }
        double f = leg_fidelity(out, messages[d]);
        if (leg.sender == Party::kAlice) {
            r.fidelity_a_to_b = f;
        } else {
            r.fidelity_b_to_a = f;
        }
        state = std::move(out.state);
    }
    r.ledger = ledger_from_transcript(plan, messages, r.transcript);
    return r;
}

std::vector<RunResult> bqt::run_protocol(const ResolvedPlan &resolved, const std::vector<MessageState> &messages) {
    std::vector<RunResult> out;
    for (const auto &b : measurement_branches(resolved.plan, messages)) {
        out.push_back(finish_branch(resolved.plan, resolved.table, b, messages));
    }
    return out;
}

RunResult bqt::run_protocol(const ResolvedPlan &resolved, const std::vector<MessageState> &messages, Rng &rng) {
    return finish_branch(resolved.plan, resolved.table, sample_branch(resolved.plan, messages, rng), messages);
}

namespace {

TransferCase check_pair(const MessageState &msg_a, const MessageState &msg_b) {
    if (msg_a.owner() != Party::kAlice || msg_b.owner() != Party::kBob) {
        throw ContractViolation("The first message must be Alice's and the second Bob's.");
    }
    if (msg_a.size() != 2) {
        throw ContractViolation("Alice's message must have 2 qubits.");
    }
    if (msg_b.size() != 2 && msg_b.size() != 3) {
        throw ContractViolation("Bob's message must have 2 or 3 qubits.");
    }
    return msg_b.size() == 2 ? TransferCase::kTwoTwo : TransferCase::kTwoThree;
}

}  // namespace

std::vector<RunResult> bqt::run_bqt_improved(const MessageState &msg_a, const MessageState &msg_b) {
    return run_protocol(improved_protocol(check_pair(msg_a, msg_b)), {msg_a, msg_b});
}

RunResult bqt::run_bqt_improved(const MessageState &msg_a, const MessageState &msg_b, Rng &rng) {
    return run_protocol(improved_protocol(check_pair(msg_a, msg_b)), {msg_a, msg_b}, rng);
}

std::vector<RunResult> bqt::run_bqt_zhou(const MessageState &msg_a, const MessageState &msg_b) {
    return run_protocol(zhou_protocol(check_pair(msg_a, msg_b)), {msg_a, msg_b});
}

RunResult bqt::run_bqt_zhou(const MessageState &msg_a, const MessageState &msg_b, Rng &rng) {
    return run_protocol(zhou_protocol(check_pair(msg_a, msg_b)), {msg_a, msg_b}, rng);
}

int64_t bqt::minimal_channel_qubits(const MessageState &msg_a, const MessageState &msg_b) {
    // Every MessageState is a two-term superposition.
    (void)msg_a;
    (void)msg_b;
    return minimal_channel_qubits(size_t{2}, size_t{2});
}

nlohmann::json bqt::transcript_json(const std::vector<TranscriptEntry> &transcript) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto &e : transcript) {
        out.push_back({{"party", party_name(e.party)}, {"kind", e.kind}, {"qubits", e.qubits}, {"bits", e.bits}});
    }
    return out;
}

nlohmann::json bqt::run_result_json(const RunResult &r) {
    return {
        {"bits", r.bits},
        {"probability", r.probability},
        {"transcript", transcript_json(r.transcript)},
        {"corrections", {{"alice", r.alice_correction}, {"bob", r.bob_correction}}},
        {"fidelity_a_to_b", r.fidelity_a_to_b},
        {"fidelity_b_to_a", r.fidelity_b_to_a},
        {"ledger",
         {{"q_i", r.ledger.info_qubits},
          {"q_r", r.ledger.channel_qubits},
          {"c_r", r.ledger.classical_bits},
          {"a_u", r.ledger.aux_qubits}}},
    };
}
