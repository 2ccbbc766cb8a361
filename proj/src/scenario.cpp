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

#include "platoon/scenario.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace platoon {

ScenarioError::ScenarioError(std::string origin, std::size_t line, const std::string& message)
    : std::runtime_error(origin + ":" + std::to_string(line) + ": " + message),
      origin_(std::move(origin)),
      line_(line)
{
}

namespace {

enum class Section
{
    none,
    network,
    params,
    vehicles,
    generator,
};

struct EdgeLine
{
    Edge edge;
    std::size_t line;
};

struct VehicleLine
{
    Vehicle vehicle;
    std::size_t line;
};

class Parser
{
public:
    explicit Parser(std::string origin) : origin_(std::move(origin)) {}

    ScenarioFile run(std::istream& in)
    {
        std::string raw;
        while (std::getline(in, raw)) {
            ++line_;
            if (auto hash = raw.find('#'); hash != std::string::npos)
                raw.erase(hash);
            std::istringstream tokens(raw);
            std::vector<std::string> words;
            for (std::string w; tokens >> w;)
                words.push_back(std::move(w));
            if (words.empty())
                continue;
            if (words[0].front() == '[')
                open_section(words);
            else
                directive(words);
        }
        return finish();
    }

private:
    [[noreturn]] void fail(const std::string& message, std::size_t line = 0) const
    {
        throw ScenarioError(origin_, line ? line : line_, message);
    }

    double number(const std::string& word) const
    {
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), value);
        if (ec != std::errc() || ptr != word.data() + word.size() || !std::isfinite(value))
            fail("expected a finite number, got '" + word + "'");
        return value;
    }

    std::uint64_t unsigned_integer(const std::string& word) const
    {
        std::uint64_t value = 0;
        auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), value);
        if (ec != std::errc() || ptr != word.data() + word.size())
            fail("expected a nonnegative integer, got '" + word + "'");
        return value;
    }

    void arity(const std::vector<std::string>& words, std::size_t n) const
    {
        if (words.size() != n)
            fail("'" + words[0] + "' takes " + std::to_string(n - 1) + " argument(s)");
    }

    void once(const std::string& key)
    {
        if (!seen_keys_.insert({section_, key}).second)
            fail("duplicate '" + key + "'");
    }

    void open_section(const std::vector<std::string>& words)
    {
        if (words.size() != 1 || words[0].back() != ']')
            fail("malformed section header");
        static const std::map<std::string, Section> names{{"[network]", Section::network},
                                                          {"[params]", Section::params},
                                                          {"[vehicles]", Section::vehicles},
                                                          {"[generator]", Section::generator}};
        auto it = names.find(words[0]);
        if (it == names.end())
            fail("unknown section " + words[0]);
        if (section_lines_.contains(it->second))
            fail("section " + words[0] + " appears twice");
        section_ = it->second;
        section_lines_[section_] = line_;
    }

    void directive(const std::vector<std::string>& words)
    {
        const std::string& key = words[0];
        switch (section_) {
        case Section::none:
            fail("directive '" + key + "' outside any section");
        case Section::network:
            if (key == "preset") {
                arity(words, 2);
                once(key);
                if (words[1] != "paper-fig3")
                    fail("unknown preset '" + words[1] + "'");
                preset_line_ = line_;
            } else if (key == "root") {
                arity(words, 2);
                once(key);
                root_ = words[1];
                explicit_line_ = explicit_line_ ? explicit_line_ : line_;
            } else if (key == "node") {
                if (words.size() < 2)
                    fail("'node' needs at least one id");
                nodes_.insert(nodes_.end(), words.begin() + 1, words.end());
                explicit_line_ = explicit_line_ ? explicit_line_ : line_;
            } else if (key == "edge") {
                arity(words, 4);
                edges_.push_back({{words[1], words[2], number(words[3])}, line_});
                explicit_line_ = explicit_line_ ? explicit_line_ : line_;
            } else {
                fail("unknown network directive '" + key + "'");
            }
            return;
        case Section::params:
            arity(words, 2);
            once(key);
            if (key == "k_p") {
                params_.k_p = number(words[1]);
                if (params_.k_p < 0.0)
                    fail("k_p must be nonnegative");
            } else if (key == "k_t") {
                params_.k_t = number(words[1]);
                if (params_.k_t < 0.0)
                    fail("k_t must be nonnegative");
            } else {
                fail("unknown parameter '" + key + "'");
            }
            return;
        case Section::vehicles:
            if (key != "vehicle")
                fail("unknown vehicles directive '" + key + "'");
            arity(words, 5);
            vehicles_.push_back(
                {{words[1], number(words[2]), number(words[3]), number(words[4])}, line_});
            return;
        case Section::generator:
            if (key == "pool") {
                once(key);
                if (words.size() < 2)
                    fail("'pool' needs at least one node");
                generator_.destination_pool.assign(words.begin() + 1, words.end());
                return;
            }
            arity(words, 2);
            once(key);
            if (key == "count")
                generator_.vehicle_count = unsigned_integer(words[1]);
            else if (key == "alpha")
                generator_.alpha = number(words[1]);
            else if (key == "window_halfwidth")
                generator_.window_halfwidth = number(words[1]);
            else if (key == "seed")
                generator_.seed = unsigned_integer(words[1]);
            else
                fail("unknown generator directive '" + key + "'");
            return;
        }
    }

    RoadNetwork build_network() const
    {
        if (!section_lines_.contains(Section::network))
            fail("missing [network] section", 1);
        const std::size_t header = section_lines_.at(Section::network);
        if (preset_line_ && explicit_line_)
            fail("'preset' cannot be combined with root/node/edge directives", explicit_line_);
        if (preset_line_)
            return fig3_network();
        if (root_.empty())
            fail("network needs a 'root' directive", header);

        std::vector<NodeId> nodes = nodes_;
        auto add = [&](const NodeId& v) {
            if (std::find(nodes.begin(), nodes.end(), v) == nodes.end())
                nodes.push_back(v);
        };
        add(root_);
        std::vector<Edge> edges;
        for (const auto& [edge, line] : edges_) {
            add(edge.tail);
            add(edge.head);
            edges.push_back(edge);
        }
        try {
            return RoadNetwork(std::move(nodes), std::move(edges), root_);
        } catch (const NetworkError& e) {
            fail(e.what(), e.edge ? edges_[*e.edge].line : header);
        }
    }

    ScenarioFile finish()
    {
        ScenarioFile file;
        file.network = build_network();
        file.params = params_;

        const bool has_vehicles = section_lines_.contains(Section::vehicles);
        const bool has_generator = section_lines_.contains(Section::generator);
        if (has_vehicles == has_generator)
            fail("exactly one of [vehicles] or [generator] is required",
                 has_vehicles ? section_lines_.at(Section::generator) : line_);

        if (has_vehicles) {
            if (vehicles_.empty())
                fail("[vehicles] lists no vehicle", section_lines_.at(Section::vehicles));
            std::vector<Vehicle> vehicles;
            for (const auto& [v, line] : vehicles_) {
                if (!file.network.has_node(v.destination))
                    fail("unknown destination '" + v.destination + "'", line);
                if (v.destination == file.network.root())
                    fail("destination equals the root '" + v.destination + "'", line);
                if (!(v.window_lower <= v.preferred_time && v.preferred_time <= v.window_upper))
                    fail("preferred time lies outside the window", line);
                vehicles.push_back(v);
            }
            file.source = std::move(vehicles);
        } else {
            ScenarioConfig config = generator_;
            config.network = file.network;
            config.params = params_;
            try {
                validate(config);
            } catch (const std::invalid_argument& e) {
                fail(e.what(), section_lines_.at(Section::generator));
            }
            file.source = std::move(config);
        }
        return file;
    }

    std::string origin_;
    std::size_t line_ = 0;
    Section section_ = Section::none;
    std::map<Section, std::size_t> section_lines_;
    std::set<std::pair<Section, std::string>> seen_keys_;

    std::size_t preset_line_ = 0;
    std::size_t explicit_line_ = 0;
    NodeId root_;
    std::vector<NodeId> nodes_;
    std::vector<EdgeLine> edges_;
    ModelParams params_;
    std::vector<VehicleLine> vehicles_;
    ScenarioConfig generator_;
};

} // namespace

Instance ScenarioFile::instance() const
{
    if (const auto* vehicles = std::get_if<std::vector<Vehicle>>(&source))
        return Instance(network, *vehicles, params);
    return generate_scenario(std::get<ScenarioConfig>(source));
}

ScenarioFile parse_scenario(std::istream& in, std::string origin)
{
    return Parser(std::move(origin)).run(in);
}

ScenarioFile load_scenario(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ScenarioError(path.string(), 0, "cannot open file");
    return parse_scenario(in, path.string());
}

void write_scenario(std::ostream& out, const Instance& instance)
{
    const RoadNetwork& net = instance.network();
    out << "[network]\n";
    fmt::print(out, "root {}\n", net.root());
    out << "node";
    for (const NodeId& v : net.nodes())
        out << ' ' << v;
    out << '\n';
    for (const Edge& e : net.edges())
        fmt::print(out, "edge {} {} {}\n", e.tail, e.head, e.length);
    out << "\n[params]\n";
    fmt::print(out, "k_p {}\nk_t {}\n", instance.params().k_p, instance.params().k_t);
    out << "\n[vehicles]\n";
    for (const Vehicle& v : instance.vehicles())
        fmt::print(out, "vehicle {} {} {} {}\n", v.destination, v.preferred_time, v.window_lower,
                   v.window_upper);
}

void write_solution(std::ostream& out, const Instance& instance, const SolveReport& report,
                    std::string_view mode, OutputFormat format)
{
    const Outcome outcome = evaluate(instance, report.final_profile);
    std::vector<std::size_t> platoon_of(instance.size());
    for (std::size_t p = 0; p < outcome.partition.size(); ++p)
        for (std::size_t i : outcome.partition[p].members)
            platoon_of[i] = p;

    if (format == OutputFormat::csv) {
        out << "vehicle,destination,preferred_time,chosen_time,platoon,platoon_size,utility\n";
        for (std::size_t i = 0; i < instance.size(); ++i) {
            const auto k = static_cast<Eigen::Index>(i);
            const Platoon& p = outcome.partition[platoon_of[i]];
            fmt::print(out, "{},{},{},{},{},{},{}\n", i + 1, instance.vehicles()[i].destination,
                       instance.vehicles()[i].preferred_time, report.final_profile(k),
                       platoon_of[i] + 1, p.members.size(), outcome.utilities(k));
        }
        out << "\nmetric,value\n";
        fmt::print(out, "mode,{}\nrounds,{}\nconverged,{}\npotential,{}\ncooperative_utility,{}\n"
                        "total_fuel_saving,{}\nnonplatooning_fraction,{}\n",
                   mode, report.rounds, report.converged, outcome.potential,
                   outcome.cooperative_utility, outcome.total_fuel_saving,
                   outcome.nonplatooning_fraction);
        return;
    }

    nlohmann::ordered_json vehicles = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < instance.size(); ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        vehicles.push_back({{"id", i + 1},
                            {"destination", instance.vehicles()[i].destination},
                            {"preferred_time", instance.vehicles()[i].preferred_time},
                            {"chosen_time", report.final_profile(k)},
                            {"platoon", platoon_of[i] + 1},
                            {"utility", outcome.utilities(k)}});
    }
    nlohmann::ordered_json platoons = nlohmann::ordered_json::array();
    for (const Platoon& p : outcome.partition) {
        nlohmann::ordered_json members = nlohmann::ordered_json::array();
        for (std::size_t i : p.members)
            members.push_back(i + 1);
        platoons.push_back({{"time", p.time}, {"members", members}});
    }
    nlohmann::ordered_json doc{{"mode", mode},
                       {"rounds", report.rounds},
                       {"converged", report.converged},
                       {"vehicles", vehicles},
                       {"platoons", platoons},
                       {"potential", outcome.potential},
                       {"cooperative_utility", outcome.cooperative_utility},
                       {"total_fuel_saving", outcome.total_fuel_saving},
                       {"nonplatooning_fraction", outcome.nonplatooning_fraction}};
    out << doc.dump(2) << '\n';
}

} // namespace platoon
