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
#include "bqt/efficiency.h"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "bqt/statevector.h"

using namespace bqt;

Rational bqt::intrinsic_efficiency(const ResourceLedger &ledger) {
    if (ledger.info_qubits < 0 || ledger.channel_qubits < 0 || ledger.classical_bits < 0 || ledger.aux_qubits < 0) {
        throw ContractViolation("Resource counts must be non-negative.");
    }
    int64_t denominator = ledger.channel_qubits + ledger.classical_bits + ledger.aux_qubits;
    if (denominator == 0) {
        throw ContractViolation("Intrinsic efficiency needs q_r + c_r + a_u > 0.");
    }
    return Rational(ledger.info_qubits, denominator);
}

const char *bqt::scheme_name(Scheme scheme) {
    switch (scheme) {
        case Scheme::kZhouAsClaimed:
            return "zhou-as-claimed";
        case Scheme::kZhouCorrected:
            return "zhou-corrected";
        case Scheme::kImproved:
            return "improved";
    }
    return "?";
}

const char *bqt::case_name(TransferCase c) {
    return c == TransferCase::kTwoTwo ? "2x2" : "2x3";
}

Scheme bqt::parse_scheme(const std::string &text) {
    if (text == "zhou-as-claimed") {
        return Scheme::kZhouAsClaimed;
    }
    if (text == "zhou-corrected" || text == "zhou") {
        return Scheme::kZhouCorrected;
    }
    if (text == "improved") {
        return Scheme::kImproved;
    }
    throw ContractViolation("Unknown scheme '" + text + "'.");
}

TransferCase bqt::parse_case(const std::string &text) {
    if (text == "2x2") {
        return TransferCase::kTwoTwo;
    }
    if (text == "2x3") {
        return TransferCase::kTwoThree;
    }
    throw ContractViolation("Unknown case '" + text + "' (expected 2x2 or 2x3).");
}

ResourceLedger bqt::ledger_for(Scheme scheme, TransferCase c) {
    int64_t info = c == TransferCase::kTwoTwo ? 4 : 5;
    switch (scheme) {
        case Scheme::kZhouAsClaimed:
            return {info, 6, 4, c == TransferCase::kTwoTwo ? 0 : 1};
        case Scheme::kZhouCorrected:
            // Two GHZ-basis measurements at three bits each.
            return {info, 6, 6, c == TransferCase::kTwoTwo ? 0 : 1};
        case Scheme::kImproved:
            // Two Bell measurements; receivers rebuild from one carrier qubit each.
            return {info, 4, 4, c == TransferCase::kTwoTwo ? 2 : 3};
    }
    throw ContractViolation("Unknown scheme.");
}

EfficiencyReport bqt::efficiency_report(Scheme scheme, TransferCase c) {
    ResourceLedger ledger = ledger_for(scheme, c);
    Rational eta = intrinsic_efficiency(ledger);
    return EfficiencyReport{
        scheme,
        c,
        ledger,
        eta,
        100.0 * double(eta.numerator()) / double(eta.denominator()),
        scheme != Scheme::kZhouAsClaimed};
}

std::vector<EfficiencyReport> bqt::compare_report(const std::vector<std::pair<Scheme, TransferCase>> &schemes) {
    if (schemes.empty()) {
        throw ContractViolation("compare_report needs at least one scheme.");
    }
    std::vector<EfficiencyReport> rows;
    for (const auto &[scheme, c] : schemes) {
        rows.push_back(efficiency_report(scheme, c));
    }
    std::stable_sort(rows.begin(), rows.end(), [](const EfficiencyReport &a, const EfficiencyReport &b) {
        return a.eta > b.eta;
    });
    return rows;
}

std::vector<std::pair<Scheme, TransferCase>> bqt::all_schemes() {
    std::vector<std::pair<Scheme, TransferCase>> out;
    for (auto c : {TransferCase::kTwoTwo, TransferCase::kTwoThree}) {
        for (auto s : {Scheme::kZhouAsClaimed, Scheme::kZhouCorrected, Scheme::kImproved}) {
            out.emplace_back(s, c);
        }
    }
    return out;
}

std::string bqt::format_percent(const Rational &eta) {
    // Round half up on the exact value, in tenths of a percent.
    int64_t num = eta.numerator();
    int64_t den = eta.denominator();
    if (num < 0) {
        throw ContractViolation("format_percent expects a non-negative efficiency.");
    }
    int64_t tenths = (2 * num * 1000 + den) / (2 * den);
    return std::to_string(tenths / 10) + "." + std::to_string(tenths % 10);
}

std::string bqt::report_markdown(const std::vector<EfficiencyReport> &rows) {
    std::ostringstream out;
    out << "| scheme | case | q_i | q_r | c_r | a_u | eta | eta % |\n";
    out << "|---|---|---|---|---|---|---|---|\n";
    for (const auto &r : rows) {
        out << "| " << scheme_name(r.scheme) << (r.canonical ? "" : " (non-canonical)") << " | "
            << case_name(r.transfer_case) << " | " << r.ledger.info_qubits << " | " << r.ledger.channel_qubits
            << " | " << r.ledger.classical_bits << " | " << r.ledger.aux_qubits << " | " << r.eta.numerator() << "/"
            << r.eta.denominator() << " | " << format_percent(r.eta) << " |\n";
    }
    return out.str();
}

nlohmann::json bqt::report_json(const std::vector<EfficiencyReport> &rows) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto &r : rows) {
        out.push_back({
            {"scheme", scheme_name(r.scheme)},
            {"case", case_name(r.transfer_case)},
            {"q_i", r.ledger.info_qubits},
            {"q_r", r.ledger.channel_qubits},
            {"c_r", r.ledger.classical_bits},
            {"a_u", r.ledger.aux_qubits},
            {"eta_num", r.eta.numerator()},
            {"eta_den", r.eta.denominator()},
            {"eta_percent", r.eta_percent},
            {"canonical", r.canonical},
        });
    }
    return out;
}

std::string bqt::report_csv(const std::vector<EfficiencyReport> &rows) {
    std::ostringstream out;
    out << "scheme,case,q_i,q_r,c_r,a_u,eta_num,eta_den,eta_percent,canonical\n";
    for (const auto &r : rows) {
        out << scheme_name(r.scheme) << "," << case_name(r.transfer_case) << "," << r.ledger.info_qubits << ","
            << r.ledger.channel_qubits << "," << r.ledger.classical_bits << "," << r.ledger.aux_qubits << ","
            << r.eta.numerator() << "," << r.eta.denominator() << "," << format_percent(r.eta) << ","
            << (r.canonical ? "true" : "false") << "\n";
    }
    return out.str();
}

int64_t bqt::minimal_channel_qubits(size_t terms_a, size_t terms_b) {
    auto carriers = [](size_t terms) {
        if (terms < 2) {
            throw ContractViolation("A message needs at least two terms to carry information.");
        }
        int64_t bits = 0;
        while ((size_t{1} << bits) < terms) {
            bits++;
        }
        return bits;
    };
    return 2 * (carriers(terms_a) + carriers(terms_b));
}
