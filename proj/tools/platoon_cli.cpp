/*
 * Copyright 2026 The platoon-game Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// platoon: solve, verify and sweep multi-fleet platoon-matching games.

#include "platoon/experiments.hpp"
#include "platoon/scenario.hpp"
#include "platoon/solvers.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

using namespace platoon;

namespace {

std::string profile_text(const Profile& s)
{
    std::string out = "(";
    for (Eigen::Index k = 0; k < s.size(); ++k)
        out += fmt::format("{}{}", k ? ", " : "", s(k));
    return out + ")";
}

// Writes `body` to `path`, or stdout when path is empty.
void emit(const std::string& path, const std::string& body)
{
    if (path.empty()) {
        std::cout << body;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << body;
}

void dump_if_requested(const std::string& path, const Instance& instance)
{
    if (path.empty())
        return;
    std::ostringstream text;
    write_scenario(text, instance);
    emit(path, text.str());
}

struct SolveArgs
{
    std::string scenario;
    std::string mode = "ne";
    std::string out;
    std::string format = "csv";
    std::string dump;
};

int cmd_solve(const SolveArgs& args)
{
    const Instance instance = load_scenario(args.scenario).instance();
    dump_if_requested(args.dump, instance);
    const SolveReport report = args.mode == "coop" ? coop_solve(instance) : brd_solve(instance);
    std::ostringstream text;
    write_solution(text, instance, report, args.mode,
                   args.format == "json" ? OutputFormat::json : OutputFormat::csv);
    emit(args.out, text.str());
    return 0;
}

struct OracleArgs
{
    std::string scenario;
    std::size_t cap = default_enumeration_cap;
    std::string dump;
};

int cmd_oracle(const OracleArgs& args)
{
    const Instance instance = load_scenario(args.scenario).instance();
    dump_if_requested(args.dump, instance);
    const auto equilibria = brute_force_nash(instance, args.cap);
    const Profile brd = brd_solve(instance).final_profile;

    bool member = false;
    fmt::print("profiles enumerated: {}\n", profile_space_size(instance));
    fmt::print("pure equilibria: {}\n", equilibria.size());
    for (const Profile& s : equilibria) {
        const bool is_brd = s == brd;
        member = member || is_brd;
        fmt::print("  {} potential={}{}\n", profile_text(s), potential(instance, s), is_brd ? "  <- brd" : "");
    }
    fmt::print("brd answer {} {}\n", profile_text(brd), member ? "is an equilibrium" : "NOT FOUND");
    return !equilibria.empty() && member ? 0 : 1;
}

struct SweepArgs
{
    std::string preset = "paper-fig3";
    std::size_t n = 10;
    std::string alphas = "0:1500:150";
    std::size_t reps = 100;
    std::uint64_t seed = 1;
    double window = 500.0;
    double k_p = 5e-5;
    double k_t = 1.5e-2;
    unsigned threads = 0;
    std::string out;
    std::string format = "csv";
};

int cmd_sweep(const SweepArgs& args)
{
    ScenarioConfig config = paper_config();
    config.vehicle_count = args.n;
    config.window_halfwidth = args.window;
    config.params.k_p = args.k_p;
    config.params.k_t = args.k_t;
    config.seed = args.seed;

    const SweepResult result =
        sweep_alpha(config, parse_alpha_grid(args.alphas), {args.reps, args.threads});
    std::ostringstream text;
    if (args.format == "json")
        write_sweep_json(text, result);
    else
        write_sweep_csv(text, result);
    emit(args.out, text.str());

    const TrendSummary t = trends(result);
    fmt::print(std::cerr,
               "spearman vs alpha: ne_saving={:.4f} ne_nonplatooning={:.4f} coop_saving={:.4f} "
               "coop_nonplatooning={:.4f}\n",
               t.ne_saving, t.ne_nonplatooning, t.coop_saving, t.coop_nonplatooning);
    return 0;
}

int cmd_demo_fig4(std::uint64_t seed)
{
    const Instance instance = generate_scenario(fig4_demo_config(seed));
    fmt::print("five vehicles, alpha = 15000 s, seed {}\n", seed);
    fmt::print("vehicle,destination,preferred_time\n");
    for (std::size_t i = 0; i < instance.size(); ++i)
        fmt::print("{},{},{}\n", i + 1, instance.vehicles()[i].destination,
                   instance.vehicles()[i].preferred_time);

    const SolveReport report = brd_solve(instance);
    fmt::print("\nsweep,potential,profile\n");
    for (std::size_t q = 0; q < report.history.size(); ++q)
        fmt::print("{},{},\"{}\"\n", q, report.trace[q], profile_text(report.history[q]));

    fmt::print("\nplatoons:\n");
    for (const Platoon& p : platoon_partition(instance, report.final_profile)) {
        std::string members;
        for (std::size_t i : p.members)
            members += fmt::format("{}{}", members.empty() ? "" : " ", i + 1);
        fmt::print("  t={} vehicles {}\n", p.time, members);
    }
    const bool nash = is_nash(instance, report.final_profile);
    fmt::print("converged after {} sweeps; pure Nash equilibrium: {}\n", report.rounds, nash ? "yes" : "no");
    return nash ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Platoon matching as a potential game: equilibria, cooperative baseline, Monte-Carlo sweeps"};
    app.require_subcommand(1);

    SolveArgs solve;
    auto* solve_cmd = app.add_subcommand("solve", "Solve one scenario by best-response dynamics or cooperatively");
    solve_cmd->add_option("scenario", solve.scenario, "Scenario file")->required();
    solve_cmd->add_option("--mode", solve.mode, "ne or coop")->check(CLI::IsMember({"ne", "coop"}));
    solve_cmd->add_option("--out", solve.out, "Output file (default stdout)");
    solve_cmd->add_option("--format", solve.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    solve_cmd->add_option("--dump-scenario", solve.dump, "Write the resolved scenario in explicit form");

    OracleArgs oracle;
    auto* oracle_cmd = app.add_subcommand("oracle", "Enumerate every pure equilibrium and cross-check BRD");
    oracle_cmd->add_option("scenario", oracle.scenario, "Scenario file")->required();
    oracle_cmd->add_option("--cap", oracle.cap, "Largest joint action space to enumerate");
    oracle_cmd->add_option("--dump-scenario", oracle.dump, "Write the resolved scenario in explicit form");

    SweepArgs sweep;
    auto* sweep_cmd = app.add_subcommand("sweep", "Monte-Carlo sweep over the preferred-time spread alpha");
    sweep_cmd->add_option("--preset", sweep.preset, "Network preset")->check(CLI::IsMember({"paper-fig3"}));
    sweep_cmd->add_option("--n", sweep.n, "Vehicles per replication")->check(CLI::PositiveNumber);
    sweep_cmd->add_option("--alphas", sweep.alphas, "start:stop:step or comma list");
    sweep_cmd->add_option("--reps", sweep.reps, "Replications per alpha")->check(CLI::PositiveNumber);
    sweep_cmd->add_option("--seed", sweep.seed, "Root seed");
    sweep_cmd->add_option("--window", sweep.window, "Window half-width in seconds");
    sweep_cmd->add_option("--kp", sweep.k_p, "Follower saving, dollars per meter");
    sweep_cmd->add_option("--kt", sweep.k_t, "Deviation penalty, dollars per second");
    sweep_cmd->add_option("--threads", sweep.threads, "Worker threads (0 = all cores)");
    sweep_cmd->add_option("--out", sweep.out, "Output file (default stdout)");
    sweep_cmd->add_option("--format", sweep.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    std::uint64_t demo_seed = 1;
    auto* demo_cmd = app.add_subcommand("demo-fig4", "Five-vehicle convergence demo with the per-sweep trace");
    demo_cmd->add_option("--seed", demo_seed, "Seed for the random draw");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*solve_cmd)
            return cmd_solve(solve);
        if (*oracle_cmd)
            return cmd_oracle(oracle);
        if (*sweep_cmd)
            return cmd_sweep(sweep);
        if (*demo_cmd)
            return cmd_demo_fig4(demo_seed);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
