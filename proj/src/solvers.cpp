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

#include "platoon/solvers.hpp"

#include <limits>
#include <string>

namespace platoon {

namespace {

double objective_value(const Instance& instance, const Profile& s, std::size_t i, Objective objective)
{
    return objective == Objective::own_utility ? vehicle_utility(instance, s, i)
                                               : cooperative_utility(instance, s);
}

SolveReport sweep_until_fixed_point(const Instance& instance, Objective objective,
                                    const SolveOptions& options)
{
    const std::size_t cap =
        options.max_sweeps.value_or(10 * instance.size() * instance.preferred_times().size());
    auto tracked = [&](const Profile& s) {
        return objective == Objective::own_utility ? potential(instance, s)
                                                   : cooperative_utility(instance, s);
    };

    SolveReport report;
    Profile s = instance.preferred_profile();
    report.history.push_back(s);
    report.trace.push_back(tracked(s));

    while (report.rounds < cap) {
        bool changed = false;
        for (std::size_t i = 0; i < instance.size(); ++i) {
            const auto k = static_cast<Eigen::Index>(i);
            const double next = best_response(instance, s, i, objective);
            if (next != s(k)) {
                s(k) = next;
                changed = true;
            }
        }
        ++report.rounds;
        report.history.push_back(s);
        report.trace.push_back(tracked(s));
        if (!changed) {
            report.converged = true;
            report.final_profile = s;
            return report;
        }
    }
    throw SolverError("no fixed point after " + std::to_string(cap) + " sweeps");
}

} // namespace

double best_response(const Instance& instance, const Profile& s, std::size_t i, Objective objective)
{
    const auto k = static_cast<Eigen::Index>(i);
    Profile trial = s;
    const double current = objective_value(instance, trial, i, objective);

    double best_time = s(k);
    double best_value = current;
    for (double a : instance.actions(i)) {
        if (a == s(k))
            continue;
        trial(k) = a;
        const double value = objective_value(instance, trial, i, objective);
        // ascending scan: the first strict improvement wins among near-ties
        if (value > best_value + improvement_threshold) {
            best_value = value;
            best_time = a;
        }
    }
    if (best_time == s(k))
        return best_time;

    // A later action may have edged out an earlier one by less than the threshold;
    // settle on the smallest time within threshold of the maximum.
    for (double a : instance.actions(i)) {
        trial(k) = a;
        const double value = objective_value(instance, trial, i, objective);
        if (value >= best_value - improvement_threshold && value > current + improvement_threshold)
            return a;
    }
    return best_time;
}

SolveReport brd_solve(const Instance& instance, const SolveOptions& options)
{
    return sweep_until_fixed_point(instance, Objective::own_utility, options);
}

SolveReport coop_solve(const Instance& instance, const SolveOptions& options)
{
    return sweep_until_fixed_point(instance, Objective::cooperative, options);
}

bool is_nash(const Instance& instance, const Profile& s)
{
    check_profile(instance, s);
    Profile trial = s;
    for (std::size_t i = 0; i < instance.size(); ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        const double current = vehicle_utility(instance, s, i);
        for (double a : instance.actions(i)) {
            trial(k) = a;
            if (vehicle_utility(instance, trial, i) > current + improvement_threshold)
                return false;
        }
        trial(k) = s(k);
    }
    return true;
}

std::size_t profile_space_size(const Instance& instance)
{
    std::size_t total = 1;
    for (std::size_t i = 0; i < instance.size(); ++i) {
        const std::size_t m = instance.actions(i).size();
        if (total > std::numeric_limits<std::size_t>::max() / m)
            return std::numeric_limits<std::size_t>::max();
        total *= m;
    }
    return total;
}

std::vector<Profile> brute_force_nash(const Instance& instance, std::size_t cap)
{
    const std::size_t space = profile_space_size(instance);
    if (space > cap)
        throw EnumerationCapExceeded("joint action space (" + std::to_string(space) +
                                     " profiles) exceeds the enumeration cap of " +
                                     std::to_string(cap));

    const std::size_t n = instance.size();
    std::vector<std::size_t> digit(n, 0);
    Profile s(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i)
        s(static_cast<Eigen::Index>(i)) = instance.actions(i).front();

    std::vector<Profile> equilibria;
    for (;;) {
        if (is_nash(instance, s))
            equilibria.push_back(s);
        // odometer increment, last vehicle fastest
        std::size_t pos = n;
        while (pos > 0) {
            --pos;
            const auto& acts = instance.actions(pos);
            if (++digit[pos] < acts.size()) {
                s(static_cast<Eigen::Index>(pos)) = acts[digit[pos]];
                break;
            }
            digit[pos] = 0;
            s(static_cast<Eigen::Index>(pos)) = acts.front();
            if (pos == 0)
                return equilibria;
        }
    }
}

} // namespace platoon
