// Copyright 2026 The walkport authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "walkport/protocol.hpp"
#include "walkport/qasm.hpp"
#include "walkport/report.hpp"
#include "walkport/state_prep.hpp"
#include "walkport/tomography.hpp"

namespace {

using walkport::Json;

struct CommonFlags {
    int n = 0;  // 0 means "derive from the state spec"
    std::string state;
    std::uint64_t shots = 8192;
    std::uint64_t repeats = 1;
    std::uint64_t seed = 0;
    bool exact = false;
    std::string noise;
    std::string out;
    bool no_meta = false;
};

void add_common_flags(CLI::App* cmd, CommonFlags* flags, bool with_repeats) {
    cmd->add_option("--n", flags->n, "Payload qubit count (derived from --state when omitted)");
    cmd->add_option("--state", flags->state,
                    "Input state: bell | ghz | w | u3:<t>,<p>,<l> | vec:<re,im;...>")
        ->required();
    cmd->add_option("--shots", flags->shots, "Shots per run")->capture_default_str();
    if (with_repeats) {
        cmd->add_option("--repeats", flags->repeats, "Independent runs to aggregate")
            ->capture_default_str();
    }
    cmd->add_option("--seed", flags->seed, "Base RNG seed")->envname("WALKPORT_SEED");
    cmd->add_flag("--exact", flags->exact, "Exact branch enumeration instead of sampling");
    cmd->add_option("--noise", flags->noise,
                    "Noise preset 'paperlike' or explicit 'p1,p2,readout'");
    cmd->add_option("--out", flags->out, "Write the JSON report here instead of stdout");
    cmd->add_flag("--no-meta", flags->no_meta, "Omit timing metadata (byte-stable output)");
}

std::optional<walkport::NoiseParams> parse_noise(const std::string& text) {
    if (text.empty()) return std::nullopt;
    if (text == "paperlike") return walkport::NoiseParams::paperlike();
    const std::vector<double> v = walkport::detail::parse_doubles(text, ',');
    if (v.size() != 3) {
        throw CLI::ValidationError("--noise", "expected 'paperlike' or 'p1,p2,readout'");
    }
    walkport::NoiseParams params{v[0], v[1], v[2]};
    params.validate();
    return params;
}

int resolve_n(const CommonFlags& flags) {
    const int from_state = walkport::state_spec_qubits(flags.state);
    if (flags.n != 0 && flags.n != from_state) {
        throw CLI::ValidationError("--n", "does not match the state spec's qubit count");
    }
    return from_state;
}

Json config_json(const CommonFlags& flags, int n,
                 const std::optional<walkport::NoiseParams>& noise) {
    Json config;
    config["n"] = n;
    config["state"] = flags.state;
    config["mode"] = flags.exact ? "exact" : "sampled";
    config["shots"] = flags.shots;
    config["repeats"] = flags.repeats;
    config["seed"] = flags.seed;
    if (noise) {
        config["noise"] = {{"p1", noise->p1}, {"p2", noise->p2},
                           {"readout_flip", noise->readout_flip}};
    } else {
        config["noise"] = nullptr;
    }
    return config;
}

void attach_meta(Json& report, const CommonFlags& flags,
                 std::chrono::steady_clock::time_point start) {
    if (flags.no_meta) return;
    const auto elapsed = std::chrono::steady_clock::now() - start;
    Json meta;
    meta["duration_ms"] =
        std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(elapsed).count();
    const std::time_t now = std::time(nullptr);
    char stamp[32];
    std::strftime(stamp, sizeof(stamp), "%FT%TZ", std::gmtime(&now));
    meta["timestamp"] = stamp;
    report["meta"] = meta;
}

void write_report(const Json& report, const std::string& out) {
    const std::string text = report.dump(2) + "\n";
    if (out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream file(out, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write " + out);
    file << text;
}

int cmd_teleport(const CommonFlags& flags, const std::string& csv_path) {
    const auto start = std::chrono::steady_clock::now();
    if (flags.repeats < 1) {
        throw CLI::ValidationError("--repeats", "must be at least 1");
    }
    const auto noise = parse_noise(flags.noise);
    const int n = resolve_n(flags);
    const walkport::StateVector phi = walkport::prepare_from_spec(flags.state);

    Json report;
    report["command"] = "teleport";
    report["config"] = config_json(flags, n, noise);

    if (flags.exact) {
        if (noise) {
            throw CLI::ValidationError("--exact", "exact mode is noiseless");
        }
        walkport::ProtocolConfig config;
        config.n = n;
        config.mode = walkport::RunMode::ExactBranches;
        const std::vector<double> dist = walkport::exact_bob_distribution(phi, config);
        Json probabilities = Json::object();
        for (std::uint64_t z = 0; z < dist.size(); ++z) {
            if (dist[z] > 1e-12) {
                probabilities[walkport::outcome_bits(z, n)] = dist[z];
            }
        }
        report["results"] = {{"probabilities", probabilities}};
        attach_meta(report, flags, start);
        write_report(report, flags.out);
        return 0;
    }

    std::vector<walkport::ShotHistogram> repeats;
    for (std::uint64_t r = 0; r < flags.repeats; ++r) {
        walkport::ProtocolConfig config;
        config.n = n;
        config.mode = walkport::RunMode::Sampled;
        config.shots = flags.shots;
        config.seed = flags.seed;
        config.stream_base = r * flags.shots;
        config.noise = noise;
        repeats.push_back(walkport::run_protocol_sampled(phi, config).histogram);
    }
    const walkport::ShotHistogram merged = walkport::merge_histograms(repeats);

    Json results;
    Json per_repeat = Json::array();
    for (const walkport::ShotHistogram& h : repeats) {
        per_repeat.push_back(walkport::histogram_to_json(h));
    }
    results["repeats"] = per_repeat;
    results["histogram"] = walkport::histogram_to_json(merged);
    results["stats"] = walkport::repeat_stats_json(repeats);
    report["results"] = results;

    if (!csv_path.empty()) {
        std::ofstream csv(csv_path, std::ios::binary);
        if (!csv) throw std::runtime_error("cannot write " + csv_path);
        csv << walkport::histogram_to_csv(merged);
    }
    attach_meta(report, flags, start);
    write_report(report, flags.out);
    return 0;
}

int cmd_tomo(const CommonFlags& flags, const std::string& rho_e_path) {
    const auto start = std::chrono::steady_clock::now();
    const auto noise = parse_noise(flags.noise);
    const int n = resolve_n(flags);
    if (n != 1) {
        throw CLI::ValidationError("--state", "tomography supports single qubits");
    }
    const walkport::StateVector phi = walkport::prepare_from_spec(flags.state);
    const walkport::DensityMatrix rho_t = walkport::rho_theoretical(phi, {0});

    Json report;
    report["command"] = "tomo";
    report["config"] = config_json(flags, n, noise);

    walkport::DensityMatrix rho_e;
    if (!rho_e_path.empty()) {
        std::ifstream in(rho_e_path);
        if (!in) throw std::runtime_error("cannot open " + rho_e_path);
        rho_e = nlohmann::json::parse(in).get<walkport::DensityMatrix>();
    } else if (flags.exact) {
        if (noise) {
            throw CLI::ValidationError("--exact", "exact mode is noiseless");
        }
        walkport::ProtocolConfig config;
        config.n = 1;
        config.mode = walkport::RunMode::ExactBranches;
        config.seed = flags.seed;
        const walkport::TeleportResult r = walkport::run_protocol_branch(phi, 0, 0, config);
        const walkport::PauliTriple t = walkport::exact_expectations(r.bob_state, 0);
        rho_e = walkport::rho_from_expectations(t);
        report["expectations"] = {{"x", t.x}, {"y", t.y}, {"z", t.z}};
    } else {
        walkport::ProtocolConfig config;
        config.n = 1;
        config.mode = walkport::RunMode::Sampled;
        config.shots = flags.shots;
        config.seed = flags.seed;
        config.noise = noise;
        const walkport::ShotRunner runner = walkport::make_teleport_runner(phi, config);
        const walkport::PauliTriple t =
            walkport::estimate_expectations(runner, flags.shots, flags.seed);
        rho_e = walkport::rho_from_expectations(t);
        report["expectations"] = {{"x", t.x}, {"y", t.y}, {"z", t.z}};
    }

    report["rho_t"] = nlohmann::json(rho_t);
    report["rho_e"] = nlohmann::json(rho_e);
    report["fidelity"] = walkport::fidelity(rho_t, rho_e);
    attach_meta(report, flags, start);
    write_report(report, flags.out);
    return 0;
}

int cmd_export(int n_flag, const std::string& state, const std::string& out_path, bool verify,
               std::uint64_t shots, std::uint64_t seed) {
    const int n = n_flag != 0 ? n_flag : walkport::state_spec_qubits(state);
    const walkport::CircuitIR ir = walkport::build_protocol_circuit(n, state);
    const std::string text = walkport::emit_qasm(ir);
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream file(out_path, std::ios::binary);
        if (!file) throw std::runtime_error("cannot write " + out_path);
        file << text;
    }
    if (!verify) return 0;

    walkport::ProtocolConfig config;
    config.n = n;
    const std::vector<double> exact =
        walkport::exact_bob_distribution(walkport::prepare_from_spec(state), config);
    const walkport::ShotHistogram hist =
        walkport::sample_circuit_bob_histogram(ir, shots, seed);
    bool pass = true;
    for (std::uint64_t z = 0; z < exact.size(); ++z) {
        const auto it = hist.counts.find(z);
        const double p = it == hist.counts.end()
                             ? 0.0
                             : static_cast<double>(it->second) / static_cast<double>(shots);
        const double sigma = std::sqrt(exact[z] * (1.0 - exact[z]) / static_cast<double>(shots));
        if (std::abs(p - exact[z]) > 3.0 * sigma + 1e-9) pass = false;
    }
    std::cout << "verification " << (pass ? "PASS" : "FAIL") << ": re-simulated distribution "
              << (pass ? "within" : "outside") << " 3 sigma of the direct protocol ("
              << shots << " shots)\n";
    return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coined-quantum-walk teleportation simulator"};
    app.require_subcommand(1);

    CommonFlags teleport_flags;
    std::string csv_path;
    CLI::App* teleport = app.add_subcommand("teleport", "Run teleportation experiments");
    add_common_flags(teleport, &teleport_flags, true);
    teleport->add_option("--csv", csv_path, "Also write the merged histogram as CSV");

    CommonFlags tomo_flags;
    std::string rho_e_path;
    CLI::App* tomo = app.add_subcommand("tomo", "Single-qubit tomography of the teleported state");
    add_common_flags(tomo, &tomo_flags, false);
    tomo->add_option("--rho-e", rho_e_path,
                     "Compare against this density-matrix JSON instead of simulating");

    int export_n = 0;
    std::string export_state, export_out;
    bool export_verify = false;
    std::uint64_t export_shots = 8192, export_seed = 0;
    CLI::App* exporter = app.add_subcommand("export", "Emit the protocol as OpenQASM 2.0");
    exporter->add_option("--n", export_n, "Payload qubit count");
    exporter->add_option("--state", export_state, "Synthesizable state spec")->required();
    exporter->add_option("-o,--out", export_out, "Output .qasm path (stdout when omitted)");
    exporter->add_flag("--verify", export_verify, "Re-simulate and compare distributions");
    exporter->add_option("--shots", export_shots, "Verification shots")->capture_default_str();
    exporter->add_option("--seed", export_seed, "Verification seed")->envname("WALKPORT_SEED");

    CLI11_PARSE(app, argc, argv);

    try {
        if (teleport->parsed()) return cmd_teleport(teleport_flags, csv_path);
        if (tomo->parsed()) return cmd_tomo(tomo_flags, rho_e_path);
        return cmd_export(export_n, export_state, export_out, export_verify, export_shots,
                          export_seed);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
