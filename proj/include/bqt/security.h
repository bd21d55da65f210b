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
#ifndef BQT_SECURITY_H
#define BQT_SECURITY_H

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "bqt/statevector.h"

namespace bqt {

enum class Basis { kZ, kX };

struct DecoyQubit {
    Basis basis;
    int bit;
    size_t position;
};

/// Where decoys sit inside a transmitted sequence of `length` qubits and how each was prepared.
struct DecoyPlan {
    size_t length = 0;
    /// Sorted by position.
    std::vector<DecoyQubit> decoys;

    bool is_decoy(size_t position) const;
};

struct EveStrategy {
    enum class Kind { kNone, kInterceptResend, kEntangleMeasure };
    enum class MeasureBasis { kZ, kX, kRandomPerQubit };

    Kind kind = Kind::kNone;
    MeasureBasis basis = MeasureBasis::kRandomPerQubit;

    static EveStrategy none();
    static EveStrategy intercept_resend(MeasureBasis basis);
    static EveStrategy entangle_measure();

    std::string name() const;
    /// Per-decoy probability that the receiver's check fails.
    double decoy_mismatch_probability() const;
};

/// Parses none | intercept-resend | intercept-resend-z | intercept-resend-x | entangle-measure.
EveStrategy parse_strategy(const std::string &text);

/// One transmitted qubit. `state` may also hold Eve's ancilla after an entangling attack.
struct Transmitted {
    PureState state;
    QubitLabel qubit;
};

/// Eigenstate of the basis: |0>,|1> for Z and |+>,|-> for X.
PureState prepare_decoy(Basis basis, int bit, const QubitLabel &label);

/// Positions uniform without replacement, bases and bits uniform. Throws ContractViolation when
/// n_decoys > length.
DecoyPlan make_decoy_plan(size_t length, size_t n_decoys, Rng &rng);

/// Interleaves decoys with the single-qubit payload states (length - n_decoys of them).
std::vector<Transmitted> assemble_sequence(const DecoyPlan &plan, const std::vector<PureState> &payload);

/// Passes every qubit of the sequence past Eve.
std::vector<Transmitted> transmit_with_eve(const std::vector<Transmitted> &sent, const EveStrategy &strategy, Rng &rng);

struct DetectionStats {
    size_t trials = 0;
    size_t decoys_per_trial = 0;
    size_t trials_detected = 0;
    size_t decoy_mismatches = 0;
    double detection_rate = 0;
    double per_decoy_mismatch_rate = 0;

    void add(const DetectionStats &trial);
};

/// Measures each decoy in its preparation basis; any mismatch flags the trial.
DetectionStats check_decoys(const DecoyPlan &plan, const std::vector<Transmitted> &received, Rng &rng);

/// Generator for trial `index` of a seeded batch; independent of how trials are scheduled.
Rng trial_rng(uint64_t seed, uint64_t stream, uint64_t index);

/// Runs `trials` independent plan/transmit/check rounds with d decoys and `payload_qubits` payload qubits.
DetectionStats run_trials(const EveStrategy &strategy, size_t decoys, size_t payload_qubits, size_t trials, uint64_t seed);

struct CurvePoint {
    size_t decoys;
    size_t trials;
    size_t detected;
    double empirical_rate;
    double analytic_rate;
    /// Binomial standard deviation of the empirical rate under the analytic rate.
    double sigma;
};

/// 1 - (1 - p)^d with p the per-decoy mismatch probability.
double analytic_detection_rate(const EveStrategy &strategy, size_t decoys);

std::vector<CurvePoint> detection_curve(
    const EveStrategy &strategy, const std::vector<size_t> &decoy_counts, size_t trials, uint64_t seed,
    size_t payload_qubits = 2);

std::string curve_csv(const EveStrategy &strategy, const std::vector<CurvePoint> &curve);
nlohmann::json curve_json(const EveStrategy &strategy, const std::vector<CurvePoint> &curve);

}  // namespace bqt

#endif
