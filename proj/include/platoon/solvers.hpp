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

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

namespace platoon {

/// Gains at or below this many dollars are treated as ties.
inline constexpr double improvement_threshold = 1e-12;

inline constexpr std::size_t default_enumeration_cap = 1'000'000;

enum class Objective
{
    own_utility, ///< non-cooperative: each vehicle maximizes u_i
    cooperative, ///< every vehicle maximizes the common sum of utilities
};

/// Raised when a sweep loop exceeds its iteration cap.
class SolverError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Raised when the joint action space is larger than the enumeration cap.
class EnumerationCapExceeded : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

struct SolveReport
{
    Profile final_profile;
    std::vector<Profile> history; ///< s0 followed by the profile after every sweep
    std::vector<double> trace;    ///< objective value at each history entry
    std::size_t rounds = 0;       ///< sweeps performed, including the final unchanged one
    bool converged = false;
};

struct SolveOptions
{
    /// Defaults to 10 * N * |distinct preferred times|.
    std::optional<std::size_t> max_sweeps;
};

/**
 * Best action of vehicle i against the other coordinates of s.
 *
 * The current action is kept when no alternative beats it by more than
 * improvement_threshold; otherwise the smallest maximizing time is returned.
 */
double best_response(const Instance& instance, const Profile& s, std::size_t i,
                     Objective objective = Objective::own_utility);

/**
 * Best-response dynamics from the preferred-time profile.
 *
 * Vehicles update in ascending index order and each update is visible to the
 * vehicles after it in the same sweep. Stops after the first sweep that
 * changes nothing. Throws SolverError when the sweep cap is hit.
 */
SolveReport brd_solve(const Instance& instance, const SolveOptions& options = {});

/// Same sweep loop as brd_solve, maximizing the cooperative utility instead.
SolveReport coop_solve(const Instance& instance, const SolveOptions& options = {});

/// True iff no vehicle gains more than improvement_threshold by a unilateral deviation.
bool is_nash(const Instance& instance, const Profile& s);

/// Product of the action-set sizes, saturating at SIZE_MAX.
std::size_t profile_space_size(const Instance& instance);

/**
 * Every pure Nash equilibrium, by enumerating the joint action space in
 * lexicographic order (vehicle 1 slowest). Throws EnumerationCapExceeded when
 * profile_space_size exceeds `cap`.
 */
std::vector<Profile> brute_force_nash(const Instance& instance,
                                      std::size_t cap = default_enumeration_cap);

} // namespace platoon
