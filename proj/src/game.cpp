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

#include "platoon/game.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace platoon {

double ModelParams::f(std::size_t n) const
{
    if (n == 0)
        return 0.0;
    if (saving)
        return saving(n);
    return k_p * static_cast<double>(n - 1) / static_cast<double>(n);
}

double ModelParams::beta(double chosen, double preferred) const
{
    if (penalty)
        return penalty(chosen, preferred);
    return k_t * std::abs(chosen - preferred);
}

Instance::Instance(RoadNetwork network, std::vector<Vehicle> vehicles, ModelParams params)
    : network_(std::move(network)), vehicles_(std::move(vehicles)), params_(std::move(params))
{
    if (!(std::isfinite(params_.k_p) && params_.k_p >= 0.0))
        throw std::invalid_argument("k_p must be finite and nonnegative");
    if (!(std::isfinite(params_.k_t) && params_.k_t >= 0.0))
        throw std::invalid_argument("k_t must be finite and nonnegative");

    if (vehicles_.empty())
        throw std::invalid_argument("an instance needs at least one vehicle");
    const std::size_t n = vehicles_.size();
    routes_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vehicle& v = vehicles_[i];
        const std::string who = "vehicle " + std::to_string(i + 1);
        if (!std::isfinite(v.preferred_time) || !std::isfinite(v.window_lower) ||
            !std::isfinite(v.window_upper))
            throw std::invalid_argument(who + ": times must be finite");
        if (!(v.window_lower <= v.preferred_time && v.preferred_time <= v.window_upper))
            throw std::invalid_argument(who + ": preferred time outside its window");
        try {
            routes_.push_back(route_to(network_, v.destination));
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument(who + ": " + e.what());
        }
    }
    incidence_ = route_incidence(network_, routes_);

    for (const Vehicle& v : vehicles_)
        distinct_times_.push_back(v.preferred_time);
    std::sort(distinct_times_.begin(), distinct_times_.end());
    distinct_times_.erase(std::unique(distinct_times_.begin(), distinct_times_.end()),
                          distinct_times_.end());

    actions_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vehicle& v = vehicles_[i];
        auto lo = std::lower_bound(distinct_times_.begin(), distinct_times_.end(), v.window_lower);
        auto hi = std::upper_bound(distinct_times_.begin(), distinct_times_.end(), v.window_upper);
        actions_[i].assign(lo, hi);
    }

    saving_table_.assign(n + 1, 0.0);
    cumulative_table_.assign(n + 1, 0.0);
    for (std::size_t m = 1; m <= n; ++m) {
        double fm = params_.f(m);
        if (!(std::isfinite(fm) && fm >= 0.0))
            throw std::invalid_argument("saving function must be finite and nonnegative at n = " +
                                        std::to_string(m));
        saving_table_[m] = fm;
        cumulative_table_[m] = cumulative_table_[m - 1] + fm;
    }
}

Profile Instance::preferred_profile() const
{
    Profile s(static_cast<Eigen::Index>(vehicles_.size()));
    for (std::size_t i = 0; i < vehicles_.size(); ++i)
        s(static_cast<Eigen::Index>(i)) = vehicles_[i].preferred_time;
    return s;
}

bool operator==(const Instance& a, const Instance& b)
{
    return a.network_ == b.network_ && a.vehicles_ == b.vehicles_ &&
           a.params_.k_p == b.params_.k_p && a.params_.k_t == b.params_.k_t &&
           static_cast<bool>(a.params_.saving) == static_cast<bool>(b.params_.saving) &&
           static_cast<bool>(a.params_.penalty) == static_cast<bool>(b.params_.penalty);
}

const std::vector<double>& feasible_actions(const Instance& instance, std::size_t i)
{
    return instance.actions(i);
}

void check_profile(const Instance& instance, const Profile& s)
{
    if (static_cast<std::size_t>(s.size()) != instance.size())
        throw std::invalid_argument("profile has " + std::to_string(s.size()) + " entries, expected " +
                                    std::to_string(instance.size()));
    for (std::size_t i = 0; i < instance.size(); ++i) {
        const auto& acts = instance.actions(i);
        if (!std::binary_search(acts.begin(), acts.end(), s(static_cast<Eigen::Index>(i))))
            throw std::invalid_argument("vehicle " + std::to_string(i + 1) +
                                        ": departure time is not a feasible action");
    }
}

std::vector<Platoon> platoon_partition(const Instance& instance, const Profile& s)
{
    std::map<double, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < instance.size(); ++i)
        groups[s(static_cast<Eigen::Index>(i))].push_back(i);

    std::vector<Platoon> out;
    out.reserve(groups.size());
    for (auto& [time, members] : groups)
        out.push_back({time, std::move(members)});
    return out;
}

Eigen::VectorXd platoon_edge_counts(const Instance& instance, const Profile& s, double time)
{
    const Eigen::VectorXd members = (s.array() == time).cast<double>().matrix();
    return instance.incidence().transpose() * members;
}

namespace {

// f(n(e,C)) * d(e) per edge
Eigen::VectorXd shared_saving_per_edge(const Instance& instance, const Eigen::VectorXd& counts)
{
    return counts.unaryExpr([&](double n) { return instance.saving(static_cast<std::size_t>(n)); })
        .cwiseProduct(instance.network().lengths());
}

} // namespace

double vehicle_utility(const Instance& instance, const Profile& s, std::size_t i)
{
    const auto row = static_cast<Eigen::Index>(i);
    const double chosen = s(row);
    const Eigen::VectorXd counts = platoon_edge_counts(instance, s, chosen);
    const double saving = instance.incidence().row(row).dot(shared_saving_per_edge(instance, counts));
    return saving - instance.params().beta(chosen, instance.vehicles()[i].preferred_time);
}

double potential(const Instance& instance, const Profile& s)
{
    double value = 0.0;
    for (const Platoon& p : platoon_partition(instance, s)) {
        const Eigen::VectorXd counts = platoon_edge_counts(instance, s, p.time);
        value += counts
                     .unaryExpr([&](double n) {
                         return instance.cumulative_saving(static_cast<std::size_t>(n));
                     })
                     .dot(instance.network().lengths());
    }
    for (std::size_t l = 0; l < instance.size(); ++l)
        value -= instance.params().beta(s(static_cast<Eigen::Index>(l)),
                                        instance.vehicles()[l].preferred_time);
    return value;
}

double cooperative_utility(const Instance& instance, const Profile& s)
{
    double value = 0.0;
    for (std::size_t k = 0; k < instance.size(); ++k)
        value += vehicle_utility(instance, s, k);
    return value;
}

double total_fuel_saving(const Instance& instance, const Profile& s)
{
    // Every member of C on edge e receives f(n(e,C)) d(e), so a platoon contributes n f(n) d per edge.
    double value = 0.0;
    for (const Platoon& p : platoon_partition(instance, s)) {
        const Eigen::VectorXd counts = platoon_edge_counts(instance, s, p.time);
        value += counts.dot(shared_saving_per_edge(instance, counts));
    }
    return value;
}

double nonplatooning_fraction(const Instance& instance, const Profile& s)
{
    if (instance.size() == 0)
        return 0.0;
    std::size_t alone = 0;
    for (const Platoon& p : platoon_partition(instance, s))
        alone += p.members.size() == 1 ? 1 : 0;
    return static_cast<double>(alone) / static_cast<double>(instance.size());
}

Outcome evaluate(const Instance& instance, const Profile& s)
{
    check_profile(instance, s);
    Outcome out;
    out.partition = platoon_partition(instance, s);
    out.utilities.resize(static_cast<Eigen::Index>(instance.size()));
    for (std::size_t i = 0; i < instance.size(); ++i)
        out.utilities(static_cast<Eigen::Index>(i)) = vehicle_utility(instance, s, i);
    out.potential = potential(instance, s);
    out.cooperative_utility = cooperative_utility(instance, s);
    out.total_fuel_saving = total_fuel_saving(instance, s);
    out.nonplatooning_fraction = nonplatooning_fraction(instance, s);
    return out;
}

} // namespace platoon
