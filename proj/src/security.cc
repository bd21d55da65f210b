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
#include "bqt/security.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <thread>

using namespace bqt;

namespace {

const QubitLabel kEveAncilla = "eve";

/// Born probability of reading 1 when `qubit` is measured in `basis`. Works straight off the amplitudes:
/// the X-basis outcome 1 projects each (a0, a1) pair onto (a0 - a1) / sqrt 2.
double probability_of_one(const PureState &state, const QubitLabel &qubit, Basis basis) {
    size_t mask = size_t{1} << (state.num_qubits() - 1 - state.position(qubit));
    const auto &amps = state.amplitudes();
    double p = 0;
    for (size_t i = 0; i < amps.size(); i++) {
        if (i & mask) {
            continue;
        }
        p += basis == Basis::kZ ? std::norm(amps[i | mask]) : std::norm(amps[i] - amps[i | mask]) / 2;
    }
    return std::clamp(p, 0.0, 1.0);
}

/// Outcome of measuring one qubit. Only the bit is needed: every caller discards the post-state.
int measure_in(const PureState &state, const QubitLabel &qubit, Basis basis, Rng &rng) {
    return std::bernoulli_distribution(probability_of_one(state, qubit, basis))(rng) ? 1 : 0;
}

Basis random_basis(Rng &rng) {
    return std::bernoulli_distribution(0.5)(rng) ? Basis::kX : Basis::kZ;
}

}  // namespace

bool DecoyPlan::is_decoy(size_t position) const {
    return std::any_of(decoys.begin(), decoys.end(), [&](const DecoyQubit &d) {
        return d.position == position;
    });
}

EveStrategy EveStrategy::none() {
    return EveStrategy{Kind::kNone, MeasureBasis::kRandomPerQubit};
}

EveStrategy EveStrategy::intercept_resend(MeasureBasis basis) {
    return EveStrategy{Kind::kInterceptResend, basis};
}

EveStrategy EveStrategy::entangle_measure() {
    return EveStrategy{Kind::kEntangleMeasure, MeasureBasis::kRandomPerQubit};
}

std::string EveStrategy::name() const {
    switch (kind) {
        case Kind::kNone:
            return "none";
        case Kind::kEntangleMeasure:
            return "entangle-measure";
        case Kind::kInterceptResend:
            switch (basis) {
                case MeasureBasis::kZ:
                    return "intercept-resend-z";
                case MeasureBasis::kX:
                    return "intercept-resend-x";
                case MeasureBasis::kRandomPerQubit:
                    return "intercept-resend";
            }
    }
    return "?";
}

double EveStrategy::decoy_mismatch_probability() const {
    // Decoy bases are uniform over {Z, X}. A wrong-basis measurement or a CNOT onto an ancilla
    // randomizes X-basis (resp. wrong-basis) decoys, which then fail half the time.
    return kind == Kind::kNone ? 0.0 : 0.25;
}

EveStrategy bqt::parse_strategy(const std::string &text) {
    if (text == "none") {
        return EveStrategy::none();
    }
    if (text == "intercept-resend" || text == "intercept-resend-random") {
        return EveStrategy::intercept_resend(EveStrategy::MeasureBasis::kRandomPerQubit);
    }
    if (text == "intercept-resend-z") {
        return EveStrategy::intercept_resend(EveStrategy::MeasureBasis::kZ);
    }
    if (text == "intercept-resend-x") {
        return EveStrategy::intercept_resend(EveStrategy::MeasureBasis::kX);
    }
    if (text == "entangle-measure") {
        return EveStrategy::entangle_measure();
    }
    throw ContractViolation("Unknown strategy '" + text + "'.");
}

PureState bqt::prepare_decoy(Basis basis, int bit, const QubitLabel &label) {
    if (basis == Basis::kZ) {
        return PureState::basis({label}, bit ? "1" : "0");
    }
    const double r = std::sqrt(0.5);
    return PureState::from_amplitudes({label}, {r, bit ? -r : r});
}

DecoyPlan bqt::make_decoy_plan(size_t length, size_t n_decoys, Rng &rng) {
    if (n_decoys > length) {
        throw ContractViolation(
            "Cannot place " + std::to_string(n_decoys) + " decoys in a sequence of " + std::to_string(length) + ".");
    }
    std::vector<size_t> positions(length);
    std::iota(positions.begin(), positions.end(), size_t{0});
    // Partial Fisher-Yates: the first n_decoys slots are a uniform sample without replacement.
    for (size_t k = 0; k < n_decoys; k++) {
        size_t j = std::uniform_int_distribution<size_t>(k, length - 1)(rng);
        std::swap(positions[k], positions[j]);
    }
    DecoyPlan plan{length, {}};
    for (size_t k = 0; k < n_decoys; k++) {
        Basis basis = random_basis(rng);
        int bit = std::bernoulli_distribution(0.5)(rng) ? 1 : 0;
        plan.decoys.push_back(DecoyQubit{basis, bit, positions[k]});
    }
    std::sort(plan.decoys.begin(), plan.decoys.end(), [](const DecoyQubit &a, const DecoyQubit &b) {
        return a.position < b.position;
    });
    return plan;
}

std::vector<Transmitted> bqt::assemble_sequence(const DecoyPlan &plan, const std::vector<PureState> &payload) {
    if (payload.size() + plan.decoys.size() != plan.length) {
        throw ContractViolation("Payload size does not fill the non-decoy slots of the plan.");
    }
    std::vector<Transmitted> out;
    out.reserve(plan.length);
    size_t next_decoy = 0;
    size_t next_payload = 0;
    for (size_t pos = 0; pos < plan.length; pos++) {
        if (next_decoy < plan.decoys.size() && plan.decoys[next_decoy].position == pos) {
            const auto &d = plan.decoys[next_decoy++];
            QubitLabel label = "q" + std::to_string(pos);
            out.push_back({prepare_decoy(d.basis, d.bit, label), label});
        } else {
            const PureState &p = payload[next_payload++];
            if (p.num_qubits() != 1) {
                throw ContractViolation("Payload entries must be single-qubit states.");
            }
            out.push_back({p, p.labels()[0]});
        }
    }
    return out;
}

std::vector<Transmitted> bqt::transmit_with_eve(
    const std::vector<Transmitted> &sent, const EveStrategy &strategy, Rng &rng) {
    std::vector<Transmitted> out;
    out.reserve(sent.size());
    for (const auto &t : sent) {
        switch (strategy.kind) {
            case EveStrategy::Kind::kNone:
                out.push_back(t);
                break;
            case EveStrategy::Kind::kInterceptResend: {
                Basis basis = strategy.basis == EveStrategy::MeasureBasis::kZ   ? Basis::kZ
                              : strategy.basis == EveStrategy::MeasureBasis::kX ? Basis::kX
                                                                                : random_basis(rng);
                int bit = measure_in(t.state, t.qubit, basis, rng);
                out.push_back({prepare_decoy(basis, bit, t.qubit), t.qubit});
                break;
            }
            case EveStrategy::Kind::kEntangleMeasure: {
                PureState s = tensor(t.state, PureState::basis({kEveAncilla}, "0"));
                s = apply_gate(s, Gate::CNOT(), {t.qubit, kEveAncilla});
                out.push_back({std::move(s), t.qubit});
                break;
            }
        }
    }
    return out;
}

void DetectionStats::add(const DetectionStats &trial) {
    trials += trial.trials;
    decoys_per_trial = trial.decoys_per_trial;
    trials_detected += trial.trials_detected;
    decoy_mismatches += trial.decoy_mismatches;
    detection_rate = trials ? double(trials_detected) / double(trials) : 0.0;
    size_t checked = trials * decoys_per_trial;
    per_decoy_mismatch_rate = checked ? double(decoy_mismatches) / double(checked) : 0.0;
}

DetectionStats bqt::check_decoys(const DecoyPlan &plan, const std::vector<Transmitted> &received, Rng &rng) {
    if (received.size() != plan.length) {
        throw ContractViolation("Received sequence length does not match the decoy plan.");
    }
    DetectionStats stats;
    stats.trials = 1;
    stats.decoys_per_trial = plan.decoys.size();
    for (const auto &d : plan.decoys) {
        const auto &t = received[d.position];
        if (measure_in(t.state, t.qubit, d.basis, rng) != d.bit) {
            stats.decoy_mismatches++;
        }
    }
    stats.trials_detected = stats.decoy_mismatches > 0 ? 1 : 0;
    stats.detection_rate = double(stats.trials_detected);
    stats.per_decoy_mismatch_rate =
        plan.decoys.empty() ? 0.0 : double(stats.decoy_mismatches) / double(plan.decoys.size());
    return stats;
}

Rng bqt::trial_rng(uint64_t seed, uint64_t stream, uint64_t index) {
    // Chained splitmix64 finalizers fold the three words into one well-mixed engine seed. Seeding the
    // engine from a single word is far cheaper than a seed_seq, which matters at 10^5+ trials.
    auto mix = [](uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    return Rng(mix(mix(mix(seed) ^ stream) ^ index));
}

DetectionStats bqt::run_trials(
    const EveStrategy &strategy, size_t decoys, size_t payload_qubits, size_t trials, uint64_t seed) {
    if (trials == 0) {
        throw ContractViolation("At least one trial is required.");
    }
    size_t length = decoys + payload_qubits;
    std::vector<PureState> payload;
    for (size_t k = 0; k < payload_qubits; k++) {
        payload.push_back(PureState::basis({"p" + std::to_string(k)}, "0"));
    }
    auto run_range = [&](size_t begin, size_t end) {
        DetectionStats acc;
        acc.decoys_per_trial = decoys;
        for (size_t i = begin; i < end; i++) {
            Rng rng = trial_rng(seed, decoys, i);
            DecoyPlan plan = make_decoy_plan(length, decoys, rng);
            auto sent = assemble_sequence(plan, payload);
            auto received = transmit_with_eve(sent, strategy, rng);
            acc.add(check_decoys(plan, received, rng));
        }
        return acc;
    };

    size_t workers = std::clamp<size_t>(std::thread::hardware_concurrency(), 1, 16);
    workers = std::min(workers, trials);
    std::vector<DetectionStats> partial(workers);
    std::vector<std::thread> threads;
    size_t chunk = (trials + workers - 1) / workers;
    for (size_t w = 0; w < workers; w++) {
        size_t begin = std::min(trials, w * chunk);
        size_t end = std::min(trials, begin + chunk);
        threads.emplace_back([&, w, begin, end] {
            partial[w] = run_range(begin, end);
        });
    }
    for (auto &t : threads) {
        t.join();
    }
    DetectionStats total;
    total.decoys_per_trial = decoys;
    for (const auto &p : partial) {
        if (p.trials) {
            total.add(p);
        }
    }
    return total;
}

double bqt::analytic_detection_rate(const EveStrategy &strategy, size_t decoys) {
    return 1.0 - std::pow(1.0 - strategy.decoy_mismatch_probability(), double(decoys));
}

std::vector<CurvePoint> bqt::detection_curve(
    const EveStrategy &strategy, const std::vector<size_t> &decoy_counts, size_t trials, uint64_t seed,
    size_t payload_qubits) {
    std::vector<CurvePoint> out;
    for (size_t d : decoy_counts) {
        DetectionStats stats = run_trials(strategy, d, payload_qubits, trials, seed);
        double p = analytic_detection_rate(strategy, d);
        out.push_back(CurvePoint{
            d, stats.trials, stats.trials_detected, stats.detection_rate, p, std::sqrt(p * (1 - p) / double(trials))});
    }
    return out;
}

std::string bqt::curve_csv(const EveStrategy &strategy, const std::vector<CurvePoint> &curve) {
    std::ostringstream out;
    out << std::setprecision(17);
    out << "strategy,d,trials,empirical_rate,analytic_rate\n";
    for (const auto &p : curve) {
        out << strategy.name() << "," << p.decoys << "," << p.trials << "," << p.empirical_rate << ","
            << p.analytic_rate << "\n";
    }
    return out.str();
}

nlohmann::json bqt::curve_json(const EveStrategy &strategy, const std::vector<CurvePoint> &curve) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto &p : curve) {
        rows.push_back({
            {"strategy", strategy.name()},
            {"d", p.decoys},
            {"trials", p.trials},
            {"detected", p.detected},
            {"empirical_rate", p.empirical_rate},
            {"analytic_rate", p.analytic_rate},
            {"sigma", p.sigma},
        });
    }
    return rows;
}
