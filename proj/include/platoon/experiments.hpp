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

#pragma once

#include "platoon/game.hpp"
#include "platoon/solvers.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace platoon {

/// Random-scenario recipe: preferred times ~ U[0, alpha], windows t +/- window_halfwidth.
struct ScenarioConfig
{
    RoadNetwork network = fig3_network();
    std::size_t vehicle_count = 10;
    double alpha = 0.0;
    double window_halfwidth = 500.0;
    ModelParams params;
    std::vector<NodeId> destination_pool; ///< empty means every non-root node
    std::uint64_t seed = 0;
};

/// N = 10, h = 500, k_p = 5e-5, k_t = 1.5e-2, destinations v2..v13 on the thirteen-node network.
ScenarioConfig paper_config();

/// Throws std::invalid_argument on alpha < 0, N == 0, negative half-width or a bad pool.
void validate(const ScenarioConfig& config);

/// Deterministic in `config.seed`.
Instance generate_scenario(const ScenarioConfig& config);

struct SolverMetrics
{
    double total_fuel_saving = 0.0;
    double nonplatooning_fraction = 0.0;
    std::size_t rounds = 0;
    double objective_initial = 0.0; ///< cooperative utility at s0
    double objective_final = 0.0;   ///< cooperative utility at the returned profile
};

struct ReplicationResult
{
    SolverMetrics ne;
    SolverMetrics coop;
};

/// Runs brd_solve and coop_solve on the same instance.
ReplicationResult run_replication(const Instance& instance);

/// Seed of replication `rep` at spread `alpha`: root ^ mix(bits(alpha), rep).
std::uint64_t replication_seed(std::uint64_t root, double alpha, std::size_t rep);

struct Summary
{
    double mean = 0.0;
    double stddev = 0.0; ///< sample standard deviation, 0 for a single value
};

Summary summarize(std::span<const double> values);

struct SweepRow
{
    double alpha = 0.0;
    std::size_t replications = 0;
    Summary ne_saving;
    Summary ne_nonplatooning;
    Summary coop_saving;
    Summary coop_nonplatooning;
    Summary ne_rounds;
    Summary coop_rounds;
};

struct SweepResult
{
    std::vector<SweepRow> rows; ///< ascending alpha
    std::size_t replications = 0;
    /// per_replication[a][r] is replication r at rows[a].alpha
    std::vector<std::vector<ReplicationResult>> per_replication;
};

struct SweepOptions
{
    std::size_t replications = 100;
    unsigned workers = 0; ///< 0 picks std::thread::hardware_concurrency()
};

/// Default grid 0, 150, ..., 1500.
std::vector<double> default_alpha_grid();

/// "start:stop:step" (inclusive of stop within 1e-9 step) or a comma list "0,150,300".
std::vector<double> parse_alpha_grid(std::string_view text);

/// Five vehicles, alpha = 15000, otherwise the paper_config() setting.
ScenarioConfig fig4_demo_config(std::uint64_t seed);

/**
 * Monte-Carlo sweep. `config.alpha` and `config.seed` are overridden per
 * replication. Output is independent of the worker count.
 */
SweepResult sweep_alpha(const ScenarioConfig& config, std::vector<double> alphas,
                        const SweepOptions& options = {});

/// Spearman rank correlation with average ranks for ties; NaN if either side is constant.
double spearman(std::span<const double> x, std::span<const double> y);

struct TrendSummary
{
    double ne_saving = 0.0;
    double ne_nonplatooning = 0.0;
    double coop_saving = 0.0;
    double coop_nonplatooning = 0.0;
};

/// Spearman coefficient of each mean curve against alpha.
TrendSummary trends(const SweepResult& result);

/// Frozen column order, see README.
inline constexpr const char* sweep_csv_header =
    "alpha,replications,ne_saving_mean,ne_saving_std,ne_nonplatooning_mean,ne_nonplatooning_std,"
    "coop_saving_mean,coop_saving_std,coop_nonplatooning_mean,coop_nonplatooning_std,"
    "ne_rounds_mean,ne_rounds_std,coop_rounds_mean,coop_rounds_std";

void write_sweep_csv(std::ostream& out, const SweepResult& result);
void write_sweep_json(std::ostream& out, const SweepResult& result);

} // namespace platoon
