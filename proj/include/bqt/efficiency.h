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
#ifndef BQT_EFFICIENCY_H
#define BQT_EFFICIENCY_H

#include <cstdint>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "json.hpp"

namespace bqt {

using Rational = boost::rational<std::int64_t>;

/// Resource counts entering the intrinsic efficiency q_i / (q_r + c_r + a_u).
struct ResourceLedger {
    /// Qubits of quantum information transferred (both directions).
    int64_t info_qubits = 0;
    /// Qubits in the shared entangled channel.
    int64_t channel_qubits = 0;
    /// Classical bits broadcast.
    int64_t classical_bits = 0;
    /// Auxiliary qubits introduced by the receivers.
    int64_t aux_qubits = 0;

    bool operator==(const ResourceLedger &) const = default;
};

Rational intrinsic_efficiency(const ResourceLedger &ledger);

enum class Scheme { kZhouAsClaimed, kZhouCorrected, kImproved };
enum class TransferCase { kTwoTwo, kTwoThree };

const char *scheme_name(Scheme scheme);
const char *case_name(TransferCase c);
Scheme parse_scheme(const std::string &text);
TransferCase parse_case(const std::string &text);

/// Canonical ledgers. kZhouAsClaimed is reverse-engineered from the originally published 40% and 45.5%
/// figures (four classical bits) and is reported as non-canonical.
ResourceLedger ledger_for(Scheme scheme, TransferCase c);

struct EfficiencyReport {
    Scheme scheme;
    TransferCase transfer_case;
    ResourceLedger ledger;
    Rational eta;
    double eta_percent;
    bool canonical;
};

EfficiencyReport efficiency_report(Scheme scheme, TransferCase c);

/// Reports sorted by efficiency, highest first (stable for ties).
std::vector<EfficiencyReport> compare_report(const std::vector<std::pair<Scheme, TransferCase>> &schemes);

/// The six standard rows: claimed, corrected and improved for both cases.
std::vector<std::pair<Scheme, TransferCase>> all_schemes();

/// Percent rounded to one decimal, e.g. "33.3".
std::string format_percent(const Rational &eta);

std::string report_markdown(const std::vector<EfficiencyReport> &rows);
nlohmann::json report_json(const std::vector<EfficiencyReport> &rows);
std::string report_csv(const std::vector<EfficiencyReport> &rows);

/// Channel qubits needed for two two-term messages: two per teleported carrier qubit.
int64_t minimal_channel_qubits(size_t terms_a, size_t terms_b);

}  // namespace bqt

#endif
