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

#include "platoon/network.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <functional>
#include <vector>

namespace platoon {

/// Departure times, one per vehicle, in seconds. Index k is vehicle k + 1.
using Profile = Eigen::VectorXd;

struct Vehicle
{
    NodeId destination;
    double preferred_time = 0.0;
    double window_lower = 0.0;
    double window_upper = 0.0;

    friend bool operator==(const Vehicle&, const Vehicle&) = default;
};

/// Per-member saving per meter for a platoon of size n (n >= 1).
using SavingFunction = std::function<double(std::size_t n)>;
/// Loss for departing at `chosen` instead of `preferred`.
using PenaltyFunction = std::function<double(double chosen, double preferred)>;

/**
 * Utility model parameters.
 *
 * With `saving` and `penalty` left empty the defaults are
 *   f(n) = k_p (n - 1) / n        (dollars per meter, shared equally)
 *   beta(chosen, preferred) = k_t |chosen - preferred|
 * so a platoon follower saves k_p dollars (= liters) per followed meter.
 */
struct ModelParams
{
    double k_p = 5e-5;
    double k_t = 1.5e-2;
    SavingFunction saving;
    PenaltyFunction penalty;

    double f(std::size_t n) const;
    double beta(double chosen, double preferred) const;
};

struct Platoon
{
    double time = 0.0;
    std::vector<std::size_t> members; // 0-based vehicle indices, ascending
};

/// Everything reported for a strategy profile.
struct Outcome
{
    std::vector<Platoon> partition;
    Eigen::VectorXd utilities;
    double potential = 0.0;
    double cooperative_utility = 0.0;
    double total_fuel_saving = 0.0;
    double nonplatooning_fraction = 0.0;
};

/**
 * A validated game: network, vehicles and model parameters, plus the derived
 * routes, route-incidence matrix and feasible action sets.
 *
 * Vehicles are addressed by 0-based index. Every destination must be a
 * non-root node, every window must contain its preferred time, and a
 * custom saving function must be finite and nonnegative on 1..N.
 */
class Instance
{
public:
    Instance(RoadNetwork network, std::vector<Vehicle> vehicles, ModelParams params = {});

    const RoadNetwork& network() const noexcept { return network_; }
    const std::vector<Vehicle>& vehicles() const noexcept { return vehicles_; }
    const ModelParams& params() const noexcept { return params_; }
    std::size_t size() const noexcept { return vehicles_.size(); }

    const Route& route(std::size_t i) const { return routes_.at(i); }
    const Eigen::MatrixXd& incidence() const noexcept { return incidence_; }

    /// Distinct preferred times, ascending.
    const std::vector<double>& preferred_times() const noexcept { return distinct_times_; }
    /// S_i: distinct preferred times inside vehicle i's window, ascending.
    const std::vector<double>& actions(std::size_t i) const { return actions_.at(i); }

    /// f(n) for 0 <= n <= N, with f(0) = 0.
    double saving(std::size_t n) const { return saving_table_.at(n); }
    /// r(n) = f(1) + ... + f(n), r(0) = 0.
    double cumulative_saving(std::size_t n) const { return cumulative_table_.at(n); }

    /// s0: every vehicle at its preferred time.
    Profile preferred_profile() const;

    // Custom saving/penalty callables are compared by presence only.
    friend bool operator==(const Instance& a, const Instance& b);

private:
    RoadNetwork network_;
    std::vector<Vehicle> vehicles_;
    ModelParams params_;
    std::vector<Route> routes_;
    Eigen::MatrixXd incidence_;
    std::vector<double> distinct_times_;
    std::vector<std::vector<double>> actions_;
    std::vector<double> saving_table_;
    std::vector<double> cumulative_table_;
};

/// S_i for vehicle i.
const std::vector<double>& feasible_actions(const Instance& instance, std::size_t i);

/// Throws std::invalid_argument unless s has N entries and s_i lies in S_i for all i.
void check_profile(const Instance& instance, const Profile& s);

/// Groups vehicles by chosen departure time; platoons are ordered by time.
std::vector<Platoon> platoon_partition(const Instance& instance, const Profile& s);

/// n(e, C) for every edge, where C is the set of vehicles departing at `time`.
Eigen::VectorXd platoon_edge_counts(const Instance& instance, const Profile& s, double time);

double vehicle_utility(const Instance& instance, const Profile& s, std::size_t i);

/// Exact potential: sum over platoons of sum_e r(n(e,C)) d(e), minus all deviation penalties.
double potential(const Instance& instance, const Profile& s);

/// Common objective of the cooperative mode; the sum of all vehicle utilities.
double cooperative_utility(const Instance& instance, const Profile& s);

/// Platooning savings of all vehicles without penalties, in liters.
double total_fuel_saving(const Instance& instance, const Profile& s);

/// Share of vehicles whose departure time no other vehicle shares.
double nonplatooning_fraction(const Instance& instance, const Profile& s);

Outcome evaluate(const Instance& instance, const Profile& s);

} // namespace platoon
