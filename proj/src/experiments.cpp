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

#include "platoon/experiments.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <ostream>
#include <random>
#include <stdexcept>
#include <thread>

namespace platoon {

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Uniform on [0, 1) from the top 53 bits; std::uniform_real_distribution is not portable.
double unit_interval(std::mt19937_64& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t uniform_index(std::mt19937_64& rng, std::size_t n)
{
    return std::min(n - 1, static_cast<std::size_t>(unit_interval(rng) * static_cast<double>(n)));
}

std::vector<NodeId> resolved_pool(const ScenarioConfig& config)
{
    if (!config.destination_pool.empty())
        return config.destination_pool;
    std::vector<NodeId> pool;
    for (const NodeId& v : config.network.nodes())
        if (v != config.network.root())
            pool.push_back(v);
    return pool;
}

SolverMetrics metrics_of(const Instance& instance, const SolveReport& report)
{
    SolverMetrics m;
    m.total_fuel_saving = total_fuel_saving(instance, report.final_profile);
    m.nonplatooning_fraction = nonplatooning_fraction(instance, report.final_profile);
    m.rounds = report.rounds;
    m.objective_initial = cooperative_utility(instance, report.history.front());
    m.objective_final = cooperative_utility(instance, report.final_profile);
    return m;
}

std::vector<double> ranks(std::span<const double> v)
{
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t lo = 0; lo < order.size();) {
        std::size_t hi = lo;
        while (hi + 1 < order.size() && v[order[hi + 1]] == v[order[lo]])
            ++hi;
        const double avg = 0.5 * static_cast<double>(lo + hi) + 1.0;
        for (std::size_t k = lo; k <= hi; ++k)
            r[order[k]] = avg;
        lo = hi + 1;
    }
    return r;
}

template <typename Get>
Summary summarize_by(const std::vector<ReplicationResult>& reps, Get get)
{
    std::vector<double> values;
    values.reserve(reps.size());
    for (const auto& r : reps)
        values.push_back(get(r));
    return summarize(values);
}

} // namespace

ScenarioConfig paper_config()
{
    ScenarioConfig config;
    config.network = fig3_network();
    config.vehicle_count = 10;
    config.window_halfwidth = 500.0;
    config.params = ModelParams{5e-5, 1.5e-2, {}, {}};
    for (int k = 2; k <= 13; ++k)
        config.destination_pool.push_back("v" + std::to_string(k));
    return config;
}

void validate(const ScenarioConfig& config)
{
    if (!(std::isfinite(config.alpha) && config.alpha >= 0.0))
        throw std::invalid_argument("alpha must be finite and nonnegative");
    if (config.vehicle_count == 0)
        throw std::invalid_argument("vehicle count must be at least 1");
    if (!(std::isfinite(config.window_halfwidth) && config.window_halfwidth >= 0.0))
        throw std::invalid_argument("window half-width must be finite and nonnegative");
    for (const NodeId& v : config.destination_pool) {
        if (!config.network.has_node(v))
            throw std::invalid_argument("destination pool names unknown node '" + v + "'");
        if (v == config.network.root())
            throw std::invalid_argument("destination pool contains the root '" + v + "'");
    }
}

Instance generate_scenario(const ScenarioConfig& config)
{
    validate(config);
    const std::vector<NodeId> pool = resolved_pool(config);
    std::mt19937_64 rng(config.seed);

    std::vector<Vehicle> vehicles;
    vehicles.reserve(config.vehicle_count);
    for (std::size_t i = 0; i < config.vehicle_count; ++i) {
        Vehicle v;
        v.destination = pool[uniform_index(rng, pool.size())];
        v.preferred_time = config.alpha * unit_interval(rng);
        v.window_lower = v.preferred_time - config.window_halfwidth;
        v.window_upper = v.preferred_time + config.window_halfwidth;
        vehicles.push_back(std::move(v));
    }
    return Instance(config.network, std::move(vehicles), config.params);
}

ReplicationResult run_replication(const Instance& instance)
{
    return {metrics_of(instance, brd_solve(instance)), metrics_of(instance, coop_solve(instance))};
}

std::uint64_t replication_seed(std::uint64_t root, double alpha, std::size_t rep)
{
    return root ^ splitmix64(std::bit_cast<std::uint64_t>(alpha) ^ splitmix64(rep));
}

Summary summarize(std::span<const double> values)
{
    Summary s;
    if (values.empty())
        return s;
    const double n = static_cast<double>(values.size());
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values)
            ss += (v - s.mean) * (v - s.mean);
        s.stddev = std::sqrt(ss / (n - 1.0));
    }
    return s;
}

std::vector<double> default_alpha_grid()
{
    std::vector<double> grid;
    for (int k = 0; k <= 10; ++k)
        grid.push_back(150.0 * k);
    return grid;
}

SweepResult sweep_alpha(const ScenarioConfig& config, std::vector<double> alphas,
                        const SweepOptions& options)
{
    if (options.replications == 0)
        throw std::invalid_argument("replications must be at least 1");
    if (alphas.empty())
        throw std::invalid_argument("alpha list is empty");
    std::sort(alphas.begin(), alphas.end());
    alphas.erase(std::unique(alphas.begin(), alphas.end()), alphas.end());
    for (double a : alphas) {
        ScenarioConfig probe = config;
        probe.alpha = a;
        validate(probe);
    }

    const std::size_t reps = options.replications;
    SweepResult result;
    result.replications = reps;
    result.per_replication.assign(alphas.size(), std::vector<ReplicationResult>(reps));

    const std::size_t jobs = alphas.size() * reps;
    unsigned workers = options.workers ? options.workers : std::thread::hardware_concurrency();
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(jobs)));

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (std::size_t job = next++; job < jobs; job = next++) {
            const std::size_t a = job / reps;
            const std::size_t r = job % reps;
            try {
                ScenarioConfig c = config;
                c.alpha = alphas[a];
                c.seed = replication_seed(config.seed, alphas[a], r);
                result.per_replication[a][r] = run_replication(generate_scenario(c));
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
                next = jobs;
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 1; w < workers; ++w)
            pool.emplace_back(work);
        work();
    }
    if (failure)
        std::rethrow_exception(failure);

    for (std::size_t a = 0; a < alphas.size(); ++a) {
        const auto& reps_a = result.per_replication[a];
        SweepRow row;
        row.alpha = alphas[a];
        row.replications = reps;
        row.ne_saving = summarize_by(reps_a, [](auto& r) { return r.ne.total_fuel_saving; });
        row.ne_nonplatooning = summarize_by(reps_a, [](auto& r) { return r.ne.nonplatooning_fraction; });
        row.coop_saving = summarize_by(reps_a, [](auto& r) { return r.coop.total_fuel_saving; });
        row.coop_nonplatooning =
            summarize_by(reps_a, [](auto& r) { return r.coop.nonplatooning_fraction; });
        row.ne_rounds = summarize_by(reps_a, [](auto& r) { return static_cast<double>(r.ne.rounds); });
        row.coop_rounds =
            summarize_by(reps_a, [](auto& r) { return static_cast<double>(r.coop.rounds); });
        result.rows.push_back(row);
    }
    return result;
}

std::vector<double> parse_alpha_grid(std::string_view text)
{
    auto to_number = [&](std::string_view word) {
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), value);
        if (word.empty() || ec != std::errc() || ptr != word.data() + word.size() || !std::isfinite(value))
            throw std::invalid_argument("bad number '" + std::string(word) + "' in alpha grid");
        return value;
    };
    auto split = [](std::string_view s, char sep) {
        std::vector<std::string_view> parts;
        for (std::size_t pos = 0;;) {
            const std::size_t next = s.find(sep, pos);
            parts.push_back(s.substr(pos, next == std::string_view::npos ? next : next - pos));
            if (next == std::string_view::npos)
                return parts;
            pos = next + 1;
        }
    };

    std::vector<double> grid;
    if (text.find(':') != std::string_view::npos) {
        const auto parts = split(text, ':');
        if (parts.size() != 3)
            throw std::invalid_argument("alpha range must read start:stop:step");
        const double start = to_number(parts[0]), stop = to_number(parts[1]), step = to_number(parts[2]);
        if (!(step > 0.0) || stop < start)
            throw std::invalid_argument("alpha range needs step > 0 and stop >= start");
        for (std::size_t k = 0;; ++k) {
            const double a = start + static_cast<double>(k) * step;
            if (a > stop + 1e-9 * step)
                break;
            grid.push_back(a);
        }
    } else {
        for (std::string_view word : split(text, ','))
            grid.push_back(to_number(word));
    }
    return grid;
}

ScenarioConfig fig4_demo_config(std::uint64_t seed)
{
    ScenarioConfig config = paper_config();
    config.vehicle_count = 5;
    config.alpha = 15000.0;
    config.seed = seed;
    return config;
}

double spearman(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size())
        throw std::invalid_argument("spearman: length mismatch");
    if (x.size() < 2)
        return std::numeric_limits<double>::quiet_NaN();
    const std::vector<double> rx = ranks(x);
    const std::vector<double> ry = ranks(y);
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
    const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t k = 0; k < rx.size(); ++k) {
        sxy += (rx[k] - mx) * (ry[k] - my);
        sxx += (rx[k] - mx) * (rx[k] - mx);
        syy += (ry[k] - my) * (ry[k] - my);
    }
    if (sxx == 0.0 || syy == 0.0)
        return std::numeric_limits<double>::quiet_NaN();
    return sxy / std::sqrt(sxx * syy);
}

TrendSummary trends(const SweepResult& result)
{
    std::vector<double> alpha, ne_s, ne_f, co_s, co_f;
    for (const SweepRow& row : result.rows) {
        alpha.push_back(row.alpha);
        ne_s.push_back(row.ne_saving.mean);
        ne_f.push_back(row.ne_nonplatooning.mean);
        co_s.push_back(row.coop_saving.mean);
        co_f.push_back(row.coop_nonplatooning.mean);
    }
    return {spearman(alpha, ne_s), spearman(alpha, ne_f), spearman(alpha, co_s), spearman(alpha, co_f)};
}

void write_sweep_csv(std::ostream& out, const SweepResult& result)
{
    out << sweep_csv_header << '\n';
    for (const SweepRow& r : result.rows) {
        fmt::print(out, "{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", r.alpha, r.replications,
                   r.ne_saving.mean, r.ne_saving.stddev, r.ne_nonplatooning.mean,
                   r.ne_nonplatooning.stddev, r.coop_saving.mean, r.coop_saving.stddev,
                   r.coop_nonplatooning.mean, r.coop_nonplatooning.stddev, r.ne_rounds.mean,
                   r.ne_rounds.stddev, r.coop_rounds.mean, r.coop_rounds.stddev);
    }
}

void write_sweep_json(std::ostream& out, const SweepResult& result)
{
    auto summary = [](const Summary& s) { return nlohmann::ordered_json{{"mean", s.mean}, {"std", s.stddev}}; };
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const SweepRow& r : result.rows) {
        rows.push_back({{"alpha", r.alpha},
                        {"replications", r.replications},
                        {"ne_saving", summary(r.ne_saving)},
                        {"ne_nonplatooning", summary(r.ne_nonplatooning)},
                        {"coop_saving", summary(r.coop_saving)},
                        {"coop_nonplatooning", summary(r.coop_nonplatooning)},
                        {"ne_rounds", summary(r.ne_rounds)},
                        {"coop_rounds", summary(r.coop_rounds)}});
    }
    out << nlohmann::ordered_json{{"replications", result.replications}, {"rows", rows}}.dump(2) << '\n';
}

} // namespace platoon
