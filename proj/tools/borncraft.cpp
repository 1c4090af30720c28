// Copyright 2026 The borncraft Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end:
//
//   borncraft simulate <circuit-file> [--backend stab|sv] [--samples N] [--seed S]
//   borncraft learn closure --circuit <file> --delta D --seed S
//   borncraft experiment <name> --grid <json> --trials T --seed S --out <path> [--format json|csv]
//
// Exit codes: 0 success, 2 bad arguments or input, 3 infeasible grid.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "borncraft/harness.hpp"
#include "borncraft/learn.hpp"
#include "borncraft/stabilizer.hpp"
#include "borncraft/statevector.hpp"

namespace {

using namespace borncraft;

constexpr int kExitOk = 0;
constexpr int kExitBadArgs = 2;
constexpr int kExitInfeasible = 3;

Circuit load_circuit(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open circuit file '" + path + "'");
    }
    return parse_circuit(in);
}

int cmd_simulate(const std::string &path, const std::string &backend, std::uint64_t samples, std::uint64_t seed) {
    const Circuit c = load_circuit(path);
    Rng rng(seed);
    if (backend == "stab") {
        if (!c.is_clifford()) {
            throw std::invalid_argument("circuit contains a T gate; use --backend sv");
        }
        const StabTableau tab = simulate_clifford(c);
        if (samples == 0) {
            std::cout << to_json(Dist::affine_uniform(support(tab))).dump(2) << '\n';
        }
        for (std::uint64_t i = 0; i < samples; ++i) {
            std::cout << sample(tab, rng).to_string() << '\n';
        }
        return kExitOk;
    }
    const Dist d = Dist::dense(sv_distribution(c));
    if (samples == 0) {
        std::cout << to_json(d).dump(2) << '\n';
    }
    for (std::uint64_t i = 0; i < samples; ++i) {
        std::cout << d.sample(rng).to_string() << '\n';
    }
    return kExitOk;
}

int cmd_learn_closure(const std::string &path, double delta, std::uint64_t seed) {
    const Circuit c = load_circuit(path);
    if (!c.is_clifford()) {
        throw std::invalid_argument("closure learning needs a Clifford circuit (no T gates)");
    }
    if (c.num_qubits() == 0) {
        throw std::invalid_argument("closure learning needs at least one qubit");
    }
    StabilizerSampler oracle(simulate_clifford(c), Rng(seed));
    const AffineSubspace truth = oracle.support_space();
    const auto start = std::chrono::steady_clock::now();
    const LearnedAffine learned = closure_learn(oracle, c.num_qubits(), delta);
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const Dist model = learned.to_dist();
    nlohmann::json out;
    out["learned"] = to_json(model);
    out["m"] = learned.m;
    out["true_m"] = truth.dim();
    out["samples_used"] = learned.samples_used;
    out["success"] = learned.subspace().same_set(truth);
    out["tv_to_truth"] = tv(model, Dist::affine_uniform(truth));
    out["wall_time_s"] = elapsed;
    std::cout << out.dump(2) << '\n';
    return kExitOk;
}

nlohmann::json read_grid(const std::string &grid) {
    std::string text = grid;
    std::error_code ec;
    if (!grid.empty() && grid.front() != '{' && std::filesystem::is_regular_file(grid, ec)) {
        std::ifstream in(grid);
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception &e) {
        throw ParseError(std::string("--grid is not valid JSON: ") + e.what());
    }
}

int cmd_experiment(const std::string &name, const std::string &grid, std::uint64_t trials, std::uint64_t seed,
                   const std::string &out_path, const std::string &format, unsigned threads) {
    ExperimentSpec spec{name, read_grid(grid), trials, seed};
    const ExperimentResult result = run(spec, {threads});
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        throw std::invalid_argument("cannot write '" + out_path + "'");
    }
    if (format == "csv") {
        out << to_csv(result);
    } else {
        out << to_json(result).dump(2) << '\n';
    }
    for (const auto &p : result.points) {
        std::cerr << p.params.dump() << "  success_rate=" << p.success_rate << " [" << p.ci.lo << ", " << p.ci.hi
                  << "]  mean_tv=" << p.mean_tv << '\n';
    }
    return kExitOk;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"borncraft: Born-distribution simulation and learning experiments"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);

    auto *simulate = app.add_subcommand("simulate", "Simulate a circuit file and print its distribution or samples");
    std::string sim_path;
    std::string backend = "stab";
    std::uint64_t samples = 0;
    std::uint64_t sim_seed = 0;
    simulate->add_option("circuit-file", sim_path, "Circuit in the text format")->required();
    simulate->add_option("--backend", backend, "stab (Clifford tableau) or sv (statevector)")
        ->check(CLI::IsMember({"stab", "sv"}));
    simulate->add_option("--samples", samples, "Print this many samples instead of the distribution");
    simulate->add_option("--seed", sim_seed, "Sampling seed");

    auto *learn = app.add_subcommand("learn", "Run a learner on a circuit's output distribution");
    learn->require_subcommand(1);
    auto *closure = learn->add_subcommand("closure", "Affine-subspace recovery from stabilizer samples");
    std::string learn_path;
    double delta = 0.01;
    std::uint64_t learn_seed = 0;
    closure->add_option("--circuit", learn_path, "Clifford circuit file")->required();
    closure->add_option("--delta", delta, "Failure probability in (0, 1)")->required();
    closure->add_option("--seed", learn_seed, "Sampling seed")->required();

    auto *experiment = app.add_subcommand("experiment", "Run a seeded experiment grid");
    std::string exp_name;
    std::string grid = "{}";
    std::uint64_t trials = 100;
    std::uint64_t exp_seed = 0;
    std::string out_path;
    std::string format = "json";
    unsigned threads = 0;
    experiment->add_option("name", exp_name, "Experiment name")
        ->required()
        ->check(CLI::IsMember(experiment_names()));
    experiment->add_option("--grid", grid, "Parameter grid as JSON text or a JSON file path");
    experiment->add_option("--trials", trials, "Trials per grid point")->required();
    experiment->add_option("--seed", exp_seed, "Master seed")->required();
    experiment->add_option("--out", out_path, "Output file")->required();
    experiment->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    experiment->add_option("--threads", threads, "Worker threads (0 = all cores)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitBadArgs;
    }

    try {
        if (simulate->parsed()) {
            return cmd_simulate(sim_path, backend, samples, sim_seed);
        }
        if (closure->parsed()) {
            return cmd_learn_closure(learn_path, delta, learn_seed);
        }
        return cmd_experiment(exp_name, grid, trials, exp_seed, out_path, format, threads);
    } catch (const Infeasible &e) {
        std::cerr << "borncraft: infeasible: " << e.what() << '\n';
        return kExitInfeasible;
    } catch (const std::exception &e) {
        std::cerr << "borncraft: " << e.what() << '\n';
        return kExitBadArgs;
    }
}
