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

#include "platoon/experiments.hpp"
#include "platoon/game.hpp"
#include "platoon/solvers.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace platoon {

/// Parse or validation failure; what() reads "<origin>:<line>: <message>".
class ScenarioError : public std::runtime_error
{
public:
    ScenarioError(std::string origin, std::size_t line, const std::string& message);

    const std::string& origin() const noexcept { return origin_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::string origin_;
    std::size_t line_;
};

/**
 * A parsed scenario file. Exactly one of an explicit vehicle list or a
 * generator recipe is present; `source` holds whichever it was.
 *
 * Grammar (one directive per line, `#` starts a comment):
 *
 *   [network]   preset paper-fig3
 *               | root <node>, node <node>..., edge <tail> <head> <meters>
 *   [params]    k_p <dollars/meter>, k_t <dollars/second>
 *   [vehicles]  vehicle <destination> <preferred> <window-lower> <window-upper>
 *   [generator] count <N>, alpha <s>, window_halfwidth <s>, pool <node>..., seed <u64>
 */
struct ScenarioFile
{
    RoadNetwork network = fig3_network();
    ModelParams params;
    std::variant<std::vector<Vehicle>, ScenarioConfig> source;

    /// Builds the game, drawing vehicles first when the file holds a generator.
    Instance instance() const;
};

ScenarioFile parse_scenario(std::istream& in, std::string origin = "<input>");
ScenarioFile load_scenario(const std::filesystem::path& path);

/// Writes the explicit form (network, params, vehicles); parsing it back gives an equal Instance.
void write_scenario(std::ostream& out, const Instance& instance);

enum class OutputFormat
{
    csv,
    json,
};

/// Solve result as documented in the README: a per-vehicle CSV table plus a metric,value table, or JSON.
void write_solution(std::ostream& out, const Instance& instance, const SolveReport& report,
                    std::string_view mode, OutputFormat format);

} // namespace platoon
