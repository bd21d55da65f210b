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
#include "cli.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <regex>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "bqt/channels.h"
#include "bqt/efficiency.h"
#include "bqt/protocol.h"
#include "bqt/security.h"

using namespace bqt;

namespace {

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct GlobalOptions {
    uint64_t seed = 0;
    std::string format;
    std::string out_path;
    bool quiet = false;
};

struct RunOptions {
    std::string scheme = "improved";
    std::string transfer_case = "2x2";
    std::string alpha_a, beta_a, alpha_b, beta_b;
    bool random = false;
    std::string mode = "enumerate";
};

struct EfficiencyOptions {
    std::string scheme;
    std::string transfer_case;
};

struct AttackOptions {
    std::string strategy = "intercept-resend";
    std::string decoys = "1..10";
    size_t trials = 100000;
    size_t payload = 2;
};

struct DeriveOptions {
    std::string channel = "eq4";
    std::string transfer_case = "2x2";
    bool no_frame_fix = false;
};

std::string convention_line() {
    return "bit order: first label is the most significant bit; Bell readout (phase, parity): "
           "00=phi+ 01=psi+ 10=phi- 11=psi-; keys: alice bits then bob bits";
}

std::string resolve_format(const std::string &requested, const std::string &fallback) {
    std::string f = requested.empty() ? fallback : requested;
    if (f != "json" && f != "csv" && f != "markdown") {
        throw UsageError("Unknown format '" + f + "' (expected json, csv or markdown).");
    }
    return f;
}

std::pair<Amplitude, Amplitude> coefficient_pair(
    const std::string &alpha, const std::string &beta, bool random, Rng &rng, const char *who, const GlobalOptions &g,
    std::ostream &err) {
    Amplitude a, b;
    if (!alpha.empty() || !beta.empty()) {
        if (alpha.empty() || beta.empty()) {
            throw UsageError(std::string("Give both --alpha-") + who + " and --beta-" + who + ".");
        }
        a = cli::parse_coefficient(alpha);
        b = cli::parse_coefficient(beta);
    } else if (random) {
        std::normal_distribution<double> normal;
        a = {normal(rng), normal(rng)};
        b = {normal(rng), normal(rng)};
    } else {
        throw UsageError(std::string("Coefficients for party ") + who + " are missing (or pass --random).");
    }
    double norm2 = std::norm(a) + std::norm(b);
    if (!std::isfinite(norm2) || norm2 == 0) {
        throw UsageError(std::string("Coefficients for party ") + who + " have zero or non-finite norm.");
    }
    double norm = std::sqrt(norm2);
    if (std::abs(norm - 1.0) > kTolerance) {
        if (!g.quiet && !(random && alpha.empty())) {
            err << "warning: coefficients for party " << who << " have norm " << norm << "; renormalizing.\n";
        }
        a /= norm;
        b /= norm;
    }
    return {a, b};
}

nlohmann::json amplitude_json(Amplitude a) {
    return {a.real(), a.imag()};
}

nlohmann::json message_json(const MessageState &m) {
    return {
        {"owner", party_name(m.owner())},
        {"labels", m.labels()},
        {"support", {m.support().zero, m.support().one}},
        {"alpha", amplitude_json(m.alpha())},
        {"beta", amplitude_json(m.beta())},
    };
}

nlohmann::json plan_json(const MeasurementPlan &plan) {
    nlohmann::json legs = nlohmann::json::array();
    for (const auto &d : plan.directions) {
        legs.push_back({
            {"sender", party_name(d.sender)},
            {"message_qubits", d.message_qubits},
            {"sent_width", d.sent_width},
            {"measured_channel", d.measured_channel},
            {"receive", d.receive},
        });
    }
    nlohmann::json channels = nlohmann::json::array();
    for (const auto &c : plan.channels) {
        nlohmann::json owners = nlohmann::json::object();
        for (const auto &label : c.labels) {
            owners[label] = party_name(c.ownership.at(label));
        }
        channels.push_back({{"kind", c.name()}, {"labels", c.labels}, {"ownership", owners}});
    }
    nlohmann::json fix = nullptr;
    if (plan.frame_fix) {
        fix = {{"party", party_name(plan.frame_fix->party)}, {"gate", "CZ"},
               {"qubits", {plan.frame_fix->first, plan.frame_fix->second}}};
    }
    return {{"name", plan.name}, {"channels", channels}, {"legs", legs}, {"frame_fix", fix}};
}

void emit(const std::string &text, const GlobalOptions &g, std::ostream &out) {
    if (g.out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(g.out_path, std::ios::binary);
    if (!f) {
        throw UsageError("Cannot open '" + g.out_path + "' for writing.");
    }
    f << text;
}

int cmd_run(const RunOptions &o, const GlobalOptions &g, std::ostream &out, std::ostream &err) {
    std::string format = resolve_format(g.format, "json");
    Scheme scheme;
    try {
        scheme = parse_scheme(o.scheme);
    } catch (const ContractViolation &e) {
        throw UsageError(e.what());
    }
    if (scheme == Scheme::kZhouAsClaimed) {
        throw UsageError("zhou-as-claimed is an accounting entry, not a runnable protocol.");
    }
    TransferCase c;
    try {
        c = parse_case(o.transfer_case);
    } catch (const ContractViolation &e) {
        throw UsageError(e.what());
    }
    if (o.mode != "enumerate" && o.mode != "sample") {
        throw UsageError("Unknown mode '" + o.mode + "'.");
    }

    Rng rng = trial_rng(g.seed, 0, 0);
    auto [aa, ba] = coefficient_pair(o.alpha_a, o.beta_a, o.random, rng, "a", g, err);
    auto [ab, bb] = coefficient_pair(o.alpha_b, o.beta_b, o.random, rng, "b", g, err);
    size_t nb = c == TransferCase::kTwoTwo ? 2 : 3;
    MessageState msg_a = MessageState::ghz(aa, ba, message_labels(Party::kAlice, 2), Party::kAlice);
    MessageState msg_b = MessageState::ghz(ab, bb, message_labels(Party::kBob, nb), Party::kBob);

    const ResolvedPlan &resolved = scheme == Scheme::kImproved ? improved_protocol(c) : zhou_protocol(c);
    std::vector<RunResult> results;
    if (o.mode == "enumerate") {
        results = run_protocol(resolved, {msg_a, msg_b});
    } else {
        Rng sample_rng = trial_rng(g.seed, 1, 0);
        results.push_back(run_protocol(resolved, {msg_a, msg_b}, sample_rng));
    }

    const RunResult *worst = &results.front();
    for (const auto &r : results) {
        if (r.worst_fidelity() < worst->worst_fidelity()) {
            worst = &r;
        }
    }
    bool passed = worst->worst_fidelity() >= 1 - kProtocolTolerance;

    std::ostringstream text;
    text << std::setprecision(17);
    if (format == "json") {
        nlohmann::json branches = nlohmann::json::array();
        for (const auto &r : results) {
            branches.push_back(run_result_json(r));
        }
        nlohmann::json report = {
            {"convention", convention_json()},
            {"command", "run"},
            {"scheme", o.scheme == "zhou" ? "zhou-corrected" : scheme_name(scheme)},
            {"case", case_name(c)},
            {"mode", o.mode},
            {"seed", g.seed},
            {"plan", plan_json(resolved.plan)},
            {"messages", {message_json(msg_a), message_json(msg_b)}},
            {"branches", branches},
            {"summary",
             {{"branches", results.size()},
              {"min_fidelity", worst->worst_fidelity()},
              {"passed", passed},
              {"ledger",
               {{"q_i", worst->ledger.info_qubits},
                {"q_r", worst->ledger.channel_qubits},
                {"c_r", worst->ledger.classical_bits},
                {"a_u", worst->ledger.aux_qubits}}}}},
        };
        text << report.dump(2) << "\n";
    } else {
        if (format == "csv") {
            text << "# convention: " << convention_line() << "\n";
            text << "bits,probability,alice_correction,bob_correction,fidelity_a_to_b,fidelity_b_to_a\n";
        } else {
            text << "> convention: " << convention_line() << "\n\n";
            text << "| bits | probability | alice | bob | F(A->B) | F(B->A) |\n|---|---|---|---|---|---|\n";
        }
        for (const auto &r : results) {
            if (format == "csv") {
                text << r.bits << "," << r.probability << "," << r.alice_correction << "," << r.bob_correction << ","
                     << r.fidelity_a_to_b << "," << r.fidelity_b_to_a << "\n";
            } else {
                text << "| " << r.bits << " | " << r.probability << " | " << r.alice_correction << " | "
                     << r.bob_correction << " | " << r.fidelity_a_to_b << " | " << r.fidelity_b_to_a << " |\n";
            }
        }
    }
    emit(text.str(), g, out);

    if (!passed) {
        err << "error: branch " << worst->bits << " reached fidelities (" << worst->fidelity_a_to_b << ", "
            << worst->fidelity_b_to_a << ").\n";
        return cli::kExitFailure;
    }
    return cli::kExitOk;
}

int cmd_efficiency(const EfficiencyOptions &o, const GlobalOptions &g, std::ostream &out) {
    std::string format = resolve_format(g.format, "markdown");
    std::vector<std::pair<Scheme, TransferCase>> picked;
    try {
        for (const auto &[s, c] : all_schemes()) {
            if (!o.scheme.empty() && parse_scheme(o.scheme) != s) {
                continue;
            }
            if (!o.transfer_case.empty() && parse_case(o.transfer_case) != c) {
                continue;
            }
            picked.emplace_back(s, c);
        }
    } catch (const ContractViolation &e) {
        throw UsageError(e.what());
    }
    auto rows = compare_report(picked);
    std::string text;
    if (format == "json") {
        nlohmann::json report = {{"convention", convention_json()}, {"rows", report_json(rows)}};
        text = report.dump(2) + "\n";
    } else if (format == "csv") {
        text = "# convention: " + convention_line() + "\n" + report_csv(rows);
    } else {
        text = "> convention: " + convention_line() + "\n\n" + report_markdown(rows);
    }
    emit(text, g, out);
    return cli::kExitOk;
}

int cmd_attack(const AttackOptions &o, const GlobalOptions &g, std::ostream &out) {
    std::string format = resolve_format(g.format, "csv");
    EveStrategy strategy;
    try {
        strategy = parse_strategy(o.strategy);
    } catch (const ContractViolation &e) {
        throw UsageError(e.what());
    }
    if (o.trials == 0) {
        throw UsageError("--trials must be at least 1.");
    }
    auto decoys = cli::parse_decoy_range(o.decoys);
    auto curve = detection_curve(strategy, decoys, o.trials, g.seed, o.payload);

    std::string text;
    if (format == "json") {
        nlohmann::json report = {
            {"convention", convention_json()},
            {"seed", g.seed},
            {"payload_qubits", o.payload},
            {"rows", curve_json(strategy, curve)}};
        text = report.dump(2) + "\n";
    } else if (format == "csv") {
        text = "# convention: " + convention_line() + "\n" + curve_csv(strategy, curve);
    } else {
        std::ostringstream md;
        md << std::setprecision(6);
        md << "> convention: " << convention_line() << "\n\n";
        md << "| strategy | d | trials | empirical | analytic |\n|---|---|---|---|---|\n";
        for (const auto &p : curve) {
            md << "| " << strategy.name() << " | " << p.decoys << " | " << p.trials << " | " << p.empirical_rate
               << " | " << p.analytic_rate << " |\n";
        }
        text = md.str();
    }
    emit(text, g, out);

    if (strategy.kind == EveStrategy::Kind::kNone) {
        for (const auto &p : curve) {
            if (p.detected != 0) {
                return cli::kExitFailure;
            }
        }
    }
    return cli::kExitOk;
}

int cmd_derive(const DeriveOptions &o, const GlobalOptions &g, std::ostream &out, std::ostream &err) {
    std::string format = resolve_format(g.format, "json");
    TransferCase c;
    try {
        c = parse_case(o.transfer_case);
    } catch (const ContractViolation &e) {
        throw UsageError(e.what());
    }
    MeasurementPlan plan;
    if (o.channel == "eq4") {
        plan = improved_plan(c);
    } else if (o.channel == "phi-plus-x2") {
        plan = two_bell_pairs_plan(c);
    } else if (o.channel == "eq3") {
        plan = find_zhou_plan(c);
    } else if (o.channel == "bell-phi-plus") {
        plan = one_way_bell_plan(BellIndex::kPhiPlus);
    } else if (o.channel == "bell-psi-plus") {
        plan = one_way_bell_plan(BellIndex::kPsiPlus);
    } else if (o.channel == "bell-phi-minus") {
        plan = one_way_bell_plan(BellIndex::kPhiMinus);
    } else if (o.channel == "bell-psi-minus") {
        plan = one_way_bell_plan(BellIndex::kPsiMinus);
    } else {
        throw UsageError("Unknown channel '" + o.channel + "'.");
    }

    CorrectionTable table;
    try {
        table = o.no_frame_fix ? derive_correction_table(plan) : resolve_plan(plan).table;
    } catch (const ProtocolInfeasible &e) {
        err << "error: " << e.what() << "\n";
        err << "failing outcome: " << e.outcome << "\n";
        return cli::kExitFailure;
    }

    std::ostringstream text;
    if (format == "json") {
        text << table.to_json().dump(2) << "\n";
    } else {
        if (format == "csv") {
            text << "# convention: " << convention_line() << "\n";
            text << "bits,alice,bob,reachable\n";
        } else {
            text << "> convention: " << convention_line() << "\n\n";
            text << "| bits | alice | bob | reachable |\n|---|---|---|---|\n";
        }
        for (const auto &[bits, e] : table.entries) {
            if (format == "csv") {
                text << bits << "," << e.alice << "," << e.bob << "," << (e.reachable ? "true" : "false") << "\n";
            } else {
                text << "| " << bits << " | " << e.alice << " | " << e.bob << " | " << (e.reachable ? "yes" : "no")
                     << " |\n";
            }
        }
    }
    emit(text.str(), g, out);
    return cli::kExitOk;
}

}  // namespace

Amplitude cli::parse_coefficient(const std::string &text) {
    static const std::string number = R"([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)";
    static const std::regex real_only("^\\s*(" + number + ")\\s*$");
    static const std::regex imag_only("^\\s*(" + number + ")[jJ]\\s*$");
    static const std::regex full("^\\s*(" + number + ")\\s*([+-])\\s*((?:\\d+\\.?\\d*|\\.\\d+)(?:[eE][+-]?\\d+)?)[jJ]\\s*$");
    std::smatch m;
    if (std::regex_match(text, m, real_only)) {
        return {std::stod(m[1]), 0.0};
    }
    if (std::regex_match(text, m, imag_only)) {
        return {0.0, std::stod(m[1])};
    }
    if (std::regex_match(text, m, full)) {
        double im = std::stod(m[3]);
        return {std::stod(m[1]), m[2] == "-" ? -im : im};
    }
    throw UsageError("Cannot parse coefficient '" + text + "' (expected re or re+imj).");
}

std::vector<size_t> cli::parse_decoy_range(const std::string &text) {
    static const std::regex range(R"(^\s*(\d+)\s*\.\.\s*(\d+)\s*$)");
    static const std::regex list(R"(^\s*\d+(\s*,\s*\d+)*\s*$)");
    std::smatch m;
    std::vector<size_t> out;
    if (std::regex_match(text, m, range)) {
        size_t lo = std::stoul(m[1]);
        size_t hi = std::stoul(m[2]);
        if (lo > hi) {
            throw UsageError("Empty decoy range '" + text + "'.");
        }
        for (size_t d = lo; d <= hi; d++) {
            out.push_back(d);
        }
        return out;
    }
    if (std::regex_match(text, list)) {
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ',')) {
            out.push_back(std::stoul(item));
        }
        return out;
    }
    throw UsageError("Cannot parse decoy counts '" + text + "' (expected 5, 1..10 or 1,2,4).");
}

int cli::run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Bidirectional teleportation simulator"};
    app.require_subcommand(1);
    GlobalOptions g;
    app.add_option("--seed", g.seed, "Master RNG seed")->capture_default_str();
    app.add_option("--format", g.format, "json | csv | markdown");
    app.add_option("--out", g.out_path, "Write the report to this path");
    app.add_flag("--quiet", g.quiet, "Suppress warnings");

    RunOptions run;
    auto *run_cmd = app.add_subcommand("run", "Run a bidirectional teleportation protocol");
    run_cmd->fallthrough();
    run_cmd->add_option("--scheme", run.scheme, "improved | zhou")->capture_default_str();
    run_cmd->add_option("--case", run.transfer_case, "2x2 | 2x3")->capture_default_str();
    run_cmd->add_option("--alpha-a", run.alpha_a, "Alice's alpha (re or re+imj)");
    run_cmd->add_option("--beta-a", run.beta_a, "Alice's beta");
    run_cmd->add_option("--alpha-b", run.alpha_b, "Bob's alpha");
    run_cmd->add_option("--beta-b", run.beta_b, "Bob's beta");
    run_cmd->add_flag("--random", run.random, "Draw missing coefficients from the seed");
    run_cmd->add_option("--mode", run.mode, "enumerate | sample")->capture_default_str();

    EfficiencyOptions eff;
    auto *eff_cmd = app.add_subcommand("efficiency", "Intrinsic-efficiency comparison");
    eff_cmd->fallthrough();
    eff_cmd->add_option("--scheme", eff.scheme, "zhou-as-claimed | zhou-corrected | improved");
    eff_cmd->add_option("--case", eff.transfer_case, "2x2 | 2x3");

    AttackOptions atk;
    auto *atk_cmd = app.add_subcommand("attack", "Decoy-qubit eavesdropping detection curve");
    atk_cmd->fallthrough();
    atk_cmd->add_option("--strategy", atk.strategy, "none | intercept-resend[-z|-x] | entangle-measure")
        ->capture_default_str();
    atk_cmd->add_option("--decoys", atk.decoys, "Decoy counts: 5, 1..10 or 1,2,4")->capture_default_str();
    atk_cmd->add_option("--trials", atk.trials, "Trials per decoy count")->capture_default_str();
    atk_cmd->add_option("--payload", atk.payload, "Payload qubits per transmission")->capture_default_str();

    DeriveOptions der;
    auto *der_cmd = app.add_subcommand("derive", "Derive and verify a Pauli correction table");
    der_cmd->fallthrough();
    der_cmd->add_option("--channel", der.channel, "eq4 | eq3 | phi-plus-x2 | bell-phi-plus | ...")
        ->capture_default_str();
    der_cmd->add_option("--case", der.transfer_case, "2x2 | 2x3")->capture_default_str();
    der_cmd->add_flag("--no-frame-fix", der.no_frame_fix, "Use the plan exactly as given");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (run_cmd->parsed()) {
            return cmd_run(run, g, out, err);
        }
        if (eff_cmd->parsed()) {
            return cmd_efficiency(eff, g, out);
        }
        if (atk_cmd->parsed()) {
            return cmd_attack(atk, g, out);
        }
        if (der_cmd->parsed()) {
            return cmd_derive(der, g, out, err);
        }
    } catch (const UsageError &e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitUsage;
}
