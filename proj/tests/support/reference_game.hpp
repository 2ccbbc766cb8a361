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

// Test-only reference evaluator. Works from the raw edge list with maps and
// plain loops; shares nothing with the library's route or incidence code.

#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace platoon::reference {

struct RawEdge
{
    std::string tail;
    std::string head;
    double length;
};

struct RawVehicle
{
    std::string destination;
    double preferred;
    double lower;
    double upper;
};

struct RawGame
{
    std::vector<RawEdge> edges;
    std::string root;
    std::vector<RawVehicle> vehicles;
    double k_p = 5e-5;
    double k_t = 1.5e-2;
};

inline double f(const RawGame& g, std::size_t n)
{
    return n == 0 ? 0.0 : g.k_p * (static_cast<double>(n) - 1.0) / static_cast<double>(n);
}

// r(n) by direct summation of f(1..n)
inline double r(const RawGame& g, std::size_t n)
{
    double acc = 0.0;
    for (std::size_t m = 1; m <= n; ++m)
        acc += f(g, m);
    return acc;
}

// Edge keys "tail>head" along the path, found by repeatedly scanning for the incoming edge.
inline std::set<std::string> path_edges(const RawGame& g, const std::string& destination)
{
    std::set<std::string> out;
    std::string cur = destination;
    while (cur != g.root) {
        bool found = false;
        for (const RawEdge& e : g.edges) {
            if (e.head == cur) {
                out.insert(e.tail + ">" + e.head);
                cur = e.tail;
                found = true;
                break;
            }
        }
        if (!found)
            return {};
    }
    return out;
}

inline double edge_length(const RawGame& g, const std::string& key)
{
    for (const RawEdge& e : g.edges)
        if (e.tail + ">" + e.head == key)
            return e.length;
    return 0.0;
}

inline std::vector<double> action_set(const RawGame& g, std::size_t i)
{
    std::set<double> times;
    for (const RawVehicle& v : g.vehicles)
        if (v.preferred >= g.vehicles[i].lower && v.preferred <= g.vehicles[i].upper)
            times.insert(v.preferred);
    return {times.begin(), times.end()};
}

inline double utility(const RawGame& g, const std::vector<double>& s, std::size_t i)
{
    const auto mine = path_edges(g, g.vehicles[i].destination);
    double total = 0.0;
    for (const std::string& e : mine) {
        std::size_t n = 0;
        for (std::size_t k = 0; k < s.size(); ++k)
            if (s[k] == s[i] && path_edges(g, g.vehicles[k].destination).count(e))
                ++n;
        total += f(g, n) * edge_length(g, e);
    }
    return total - g.k_t * std::abs(s[i] - g.vehicles[i].preferred);
}

inline double potential(const RawGame& g, const std::vector<double>& s)
{
    std::set<double> times(s.begin(), s.end());
    double total = 0.0;
    for (double t : times) {
        std::map<std::string, std::size_t> counts;
        for (std::size_t k = 0; k < s.size(); ++k)
            if (s[k] == t)
                for (const std::string& e : path_edges(g, g.vehicles[k].destination))
                    ++counts[e];
        for (const auto& [e, n] : counts)
            total += r(g, n) * edge_length(g, e);
    }
    for (std::size_t l = 0; l < s.size(); ++l)
        total -= g.k_t * std::abs(g.vehicles[l].preferred - s[l]);
    return total;
}

inline double social(const RawGame& g, const std::vector<double>& s)
{
    double total = 0.0;
    for (std::size_t k = 0; k < s.size(); ++k)
        total += utility(g, s, k);
    return total;
}

/// Calls visit(s) for every joint profile.
inline void for_each_profile(const RawGame& g, const std::function<void(const std::vector<double>&)>& visit)
{
    std::vector<std::vector<double>> sets;
    for (std::size_t i = 0; i < g.vehicles.size(); ++i)
        sets.push_back(action_set(g, i));
    std::vector<double> s(sets.size());
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == sets.size()) {
            visit(s);
            return;
        }
        for (double a : sets[i]) {
            s[i] = a;
            rec(i + 1);
        }
    };
    rec(0);
}

inline bool is_equilibrium(const RawGame& g, const std::vector<double>& s)
{
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double base = utility(g, s, i);
        std::vector<double> t = s;
        for (double a : action_set(g, i)) {
            t[i] = a;
            if (utility(g, t, i) > base + 1e-12)
                return false;
        }
    }
    return true;
}

} // namespace platoon::reference
