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

#include <gtest/gtest.h>

#include "platoon/game.hpp"
#include "support/random_instance.hpp"

#include <algorithm>
#include <numeric>
#include <random>

using namespace platoon;
using namespace platoon::test_support;

namespace {

Profile profile(std::initializer_list<double> values)
{
    return to_profile(std::vector<double>(values));
}

// vehicle 1 -> v4 prefers 0, vehicle 2 -> v5 prefers 100, both with +/-500 windows
Instance v4_v5_pair()
{
    return Instance(fig3_network(), {{"v4", 0.0, -500.0, 500.0}, {"v5", 100.0, -400.0, 600.0}});
}

} // namespace

TEST(Game, DefaultSavingAndPenalty)
{
    ModelParams p;
    EXPECT_EQ(p.f(1), 0.0);
    EXPECT_DOUBLE_EQ(p.f(2), 2.5e-5);
    EXPECT_DOUBLE_EQ(p.f(4), 3.75e-5);
    EXPECT_EQ(p.beta(7.0, 7.0), 0.0);
    EXPECT_DOUBLE_EQ(p.beta(0.0, 100.0), 1.5);
}

TEST(Game, InstanceValidation)
{
    EXPECT_THROW(Instance(fig3_network(), {}), std::invalid_argument);
    EXPECT_THROW(Instance(fig3_network(), {{"v1", 0, 0, 0}}), std::invalid_argument);
    EXPECT_THROW(Instance(fig3_network(), {{"v42", 0, 0, 0}}), std::invalid_argument);
    EXPECT_THROW(Instance(fig3_network(), {{"v4", 10, 11, 20}}), std::invalid_argument);
    ModelParams bad;
    bad.k_t = -1.0;
    EXPECT_THROW(Instance(fig3_network(), {{"v4", 0, 0, 0}}, bad), std::invalid_argument);
    ModelParams negative_saving;
    negative_saving.saving = [](std::size_t) { return -1.0; };
    EXPECT_THROW(Instance(fig3_network(), {{"v4", 0, 0, 0}, {"v5", 0, 0, 0}}, negative_saving),
                 std::invalid_argument);
}

TEST(Game, FeasibleActionsWindowSubset)
{
    // five preferred times; vehicle 3's window spans t2..t4 only
    const Instance inst(fig3_network(), {{"v4", 0, 0, 0},
                                         {"v5", 10, 10, 10},
                                         {"v7", 20, 5, 35},
                                         {"v9", 30, 30, 30},
                                         {"v12", 40, 40, 40}});
    EXPECT_EQ(feasible_actions(inst, 2), (std::vector<double>{10, 20, 30}));
    EXPECT_EQ(feasible_actions(inst, 0), (std::vector<double>{0}));
}

TEST(Game, FeasibleActionsDegenerate)
{
    const Instance single(fig3_network(), {{"v4", 3, 0, 10}});
    EXPECT_EQ(feasible_actions(single, 0), (std::vector<double>{3}));

    const Instance same(fig3_network(), {{"v4", 0, -500, 500}, {"v5", 0, -500, 500}, {"v9", 0, -500, 500}});
    EXPECT_EQ(same.preferred_times(), (std::vector<double>{0}));
    for (std::size_t i = 0; i < 3; ++i)
        EXPECT_EQ(feasible_actions(same, i), (std::vector<double>{0}));
}

TEST(Game, PlatoonPartition)
{
    const Instance inst(fig3_network(), {{"v4", 7, 0, 10}, {"v5", 1, 0, 10}, {"v9", 7, 0, 10}});

    auto parts = platoon_partition(inst, profile({7, 7, 7}));
    ASSERT_EQ(parts.size(), 1u);
    EXPECT_EQ(parts[0].members, (std::vector<std::size_t>{0, 1, 2}));

    parts = platoon_partition(inst, profile({7, 1, 7}));
    ASSERT_EQ(parts.size(), 2u);
    EXPECT_EQ(parts[0].time, 1.0);
    EXPECT_EQ(parts[0].members, (std::vector<std::size_t>{1}));
    EXPECT_EQ(parts[1].members, (std::vector<std::size_t>{0, 2}));
}

TEST(Game, FourMatchedOneAlone)
{
    const Instance inst(fig3_network(), {{"v4", 0, -500, 500},
                                         {"v5", 2000, 1500, 2500},
                                         {"v7", 100, -400, 600},
                                         {"v9", 200, -300, 700},
                                         {"v13", 300, -200, 800}});
    const Profile s = profile({100, 2000, 100, 100, 100});
    const auto parts = platoon_partition(inst, s);
    ASSERT_EQ(parts.size(), 2u);
    EXPECT_EQ(parts[0].members, (std::vector<std::size_t>{0, 2, 3, 4}));
    EXPECT_EQ(parts[1].members, (std::vector<std::size_t>{1}));
    EXPECT_DOUBLE_EQ(nonplatooning_fraction(inst, s), 0.2);
}

TEST(Game, SingletonAtPreferredTimeIsZero)
{
    const Instance inst(fig3_network(), {{"v4", 0, -500, 500}, {"v12", 1000, 900, 1100}});
    const Profile s = inst.preferred_profile();
    EXPECT_EQ(vehicle_utility(inst, s, 0), 0.0);
    EXPECT_EQ(vehicle_utility(inst, s, 1), 0.0);
    EXPECT_EQ(potential(inst, s), 0.0);
    EXPECT_EQ(cooperative_utility(inst, s), 0.0);
    EXPECT_EQ(total_fuel_saving(inst, s), 0.0);
    EXPECT_EQ(nonplatooning_fraction(inst, s), 1.0);
}

// Expected values: hand evaluation with k_p = 5e-5, k_t = 1.5e-2, shared edges v1->v2, v2->v3 (160 km),
// cross-checked against the reference evaluator below.
TEST(Game, TwoVehicleHandValues)
{
    const Instance inst = v4_v5_pair();
    const Profile s = profile({0, 0});
    EXPECT_NEAR(vehicle_utility(inst, s, 0), 4.0, 1e-9);
    EXPECT_NEAR(vehicle_utility(inst, s, 1), 2.5, 1e-9);
    EXPECT_NEAR(potential(inst, s), 2.5, 1e-9);
    EXPECT_NEAR(cooperative_utility(inst, s), 6.5, 1e-9);
    EXPECT_NEAR(total_fuel_saving(inst, s), 8.0, 1e-9);
    EXPECT_EQ(nonplatooning_fraction(inst, s), 0.0);

    reference::RawGame raw;
    raw.root = "v1";
    raw.vehicles = {{"v4", 0, -500, 500}, {"v5", 100, -400, 600}};
    const RoadNetwork net = fig3_network();
    for (const Edge& e : net.edges())
        raw.edges.push_back({e.tail, e.head, e.length});
    EXPECT_NEAR(reference::utility(raw, {0, 0}, 0), 4.0, 1e-12);
    EXPECT_NEAR(reference::utility(raw, {0, 0}, 1), 2.5, 1e-12);
    EXPECT_NEAR(reference::potential(raw, {0, 0}), 2.5, 1e-12);
}

TEST(Game, ThreeVehiclesSameEdge)
{
    const Instance inst(fig3_network(), {{"v2", 5, 0, 10}, {"v2", 5, 0, 10}, {"v2", 5, 0, 10}});
    const Profile s = inst.preferred_profile();
    for (std::size_t i = 0; i < 3; ++i)
        EXPECT_NEAR(vehicle_utility(inst, s, i), 8.0 / 3.0, 1e-12);
    EXPECT_NEAR(total_fuel_saving(inst, s), 8.0, 1e-12);
}

TEST(Game, AllTogetherSavesMaximum)
{
    // alpha = 0: everyone shares t = 0, so every vehicle platoons on its whole route
    const Instance inst(fig3_network(), {{"v4", 0, -500, 500}, {"v5", 0, -500, 500}, {"v13", 0, -500, 500}});
    const Profile s = inst.preferred_profile();
    // v1->v2 carries 3, v2->v3 carries 2: 3 f(3) 80000 + 2 f(2) 80000
    EXPECT_NEAR(total_fuel_saving(inst, s), 3 * (2.0 / 3.0) * 5e-5 * 80000 + 2 * 0.5 * 5e-5 * 80000, 1e-12);
    EXPECT_EQ(nonplatooning_fraction(inst, s), 0.0);
}

TEST(Game, CheckProfile)
{
    const Instance inst = v4_v5_pair();
    EXPECT_NO_THROW(check_profile(inst, profile({100, 0})));
    EXPECT_THROW(check_profile(inst, profile({50, 0})), std::invalid_argument);
    EXPECT_THROW(check_profile(inst, profile({0})), std::invalid_argument);
    EXPECT_THROW(evaluate(inst, profile({0, 1})), std::invalid_argument);
}

TEST(Game, TelescopingCumulativeSaving)
{
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        auto game = random_game(rng);
        const Instance& inst = game.instance;
        EXPECT_EQ(inst.cumulative_saving(0), 0.0);
        for (std::size_t n = 0; n < inst.size(); ++n)
            EXPECT_NEAR(inst.cumulative_saving(n + 1) - inst.cumulative_saving(n), inst.saving(n + 1), 1e-18);
        EXPECT_NEAR(inst.cumulative_saving(inst.size()), reference::r(game.raw, inst.size()), 1e-15);
    }
}

TEST(Game, AgreesWithReferenceEvaluator)
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        auto game = random_game(rng);
        const Instance& inst = game.instance;
        for (int k = 0; k < 5; ++k) {
            const Profile s = random_profile(rng, inst);
            const auto v = to_vector(s);
            for (std::size_t i = 0; i < inst.size(); ++i)
                EXPECT_NEAR(vehicle_utility(inst, s, i), reference::utility(game.raw, v, i), 1e-9);
            EXPECT_NEAR(potential(inst, s), reference::potential(game.raw, v), 1e-9);
        }
        for (std::size_t i = 0; i < inst.size(); ++i)
            EXPECT_EQ(feasible_actions(inst, i), reference::action_set(game.raw, i));
    }
}

TEST(Game, ExactPotentialIdentity)
{
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        auto game = random_game(rng);
        const Instance& inst = game.instance;
        for (int k = 0; k < 4; ++k) {
            Profile s = random_profile(rng, inst);
            for (std::size_t i = 0; i < inst.size(); ++i) {
                const auto idx = static_cast<Eigen::Index>(i);
                for (double a : inst.actions(i)) {
                    for (double b : inst.actions(i)) {
                        Profile sa = s, sb = s;
                        sa(idx) = a;
                        sb(idx) = b;
                        const double dphi = potential(inst, sa) - potential(inst, sb);
                        const double du = vehicle_utility(inst, sa, i) - vehicle_utility(inst, sb, i);
                        ASSERT_NEAR(dphi, du, 1e-9);
                    }
                }
            }
        }
    }
}

TEST(Game, ExactPotentialHoldsForCustomSavingFunctions)
{
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        auto base = random_game(rng);
        std::vector<double> table(9);
        for (double& v : table)
            v = std::uniform_real_distribution<double>(0.0, 1e-4)(rng);
        ModelParams params = base.instance.params();
        params.saving = [table](std::size_t n) { return table.at(n); };
        params.penalty = [](double chosen, double preferred) {
            const double d = chosen - preferred;
            return d * d * 1e-5;
        };
        const Instance inst(base.instance.network(), base.instance.vehicles(), params);
        Profile s = random_profile(rng, inst);
        for (std::size_t i = 0; i < inst.size(); ++i) {
            const auto idx = static_cast<Eigen::Index>(i);
            const double phi0 = potential(inst, s), u0 = vehicle_utility(inst, s, i);
            for (double a : inst.actions(i)) {
                Profile sa = s;
                sa(idx) = a;
                ASSERT_NEAR(potential(inst, sa) - phi0, vehicle_utility(inst, sa, i) - u0, 1e-9);
            }
        }
    }
}

TEST(Game, CooperativeUtilityIsSumOfUtilities)
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        auto game = random_game(rng);
        const Profile s = random_profile(rng, game.instance);
        double sum = 0.0;
        for (std::size_t i = 0; i < game.instance.size(); ++i)
            sum += vehicle_utility(game.instance, s, i);
        EXPECT_EQ(cooperative_utility(game.instance, s), sum);

        // saving computed per platoon equals the per-vehicle sum with penalties added back
        double penalties = 0.0;
        for (std::size_t i = 0; i < game.instance.size(); ++i)
            penalties += game.instance.params().beta(s(static_cast<Eigen::Index>(i)),
                                                     game.instance.vehicles()[i].preferred_time);
        EXPECT_NEAR(total_fuel_saving(game.instance, s), sum + penalties, 1e-9);
    }
}

TEST(Game, FuelSavingInvariantUnderRelabeling)
{
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        auto game = random_game(rng);
        const Instance& inst = game.instance;
        const Profile s = random_profile(rng, inst);

        std::vector<std::size_t> perm(inst.size());
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<Vehicle> shuffled;
        Profile t(s.size());
        for (std::size_t k = 0; k < perm.size(); ++k) {
            shuffled.push_back(inst.vehicles()[perm[k]]);
            t(static_cast<Eigen::Index>(k)) = s(static_cast<Eigen::Index>(perm[k]));
        }
        const Instance relabeled(inst.network(), shuffled, inst.params());
        EXPECT_NEAR(total_fuel_saving(relabeled, t), total_fuel_saving(inst, s), 1e-9);
        EXPECT_NEAR(potential(relabeled, t), potential(inst, s), 1e-9);
        EXPECT_EQ(nonplatooning_fraction(relabeled, t), nonplatooning_fraction(inst, s));
    }
}

TEST(Game, UtilitiesAreBounded)
{
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        auto game = random_game(rng);
        const Instance& inst = game.instance;
        double f_max = 0.0;
        for (std::size_t n = 1; n <= inst.size(); ++n)
            f_max = std::max(f_max, inst.saving(n));
        const Profile s = random_profile(rng, inst);
        for (std::size_t i = 0; i < inst.size(); ++i) {
            const auto& acts = inst.actions(i);
            double worst = 0.0;
            for (double a : acts)
                worst = std::max(worst, inst.params().beta(a, inst.vehicles()[i].preferred_time));
            EXPECT_LE(std::abs(vehicle_utility(inst, s, i)), f_max * inst.route(i).length + worst + 1e-9);
        }
    }
}

TEST(Game, EvaluateBundlesEverything)
{
    const Instance inst = v4_v5_pair();
    const Outcome out = evaluate(inst, profile({0, 0}));
    ASSERT_EQ(out.partition.size(), 1u);
    EXPECT_NEAR(out.utilities(0), 4.0, 1e-9);
    EXPECT_NEAR(out.utilities(1), 2.5, 1e-9);
    EXPECT_NEAR(out.potential, 2.5, 1e-9);
    EXPECT_NEAR(out.cooperative_utility, 6.5, 1e-9);
    EXPECT_NEAR(out.total_fuel_saving, 8.0, 1e-9);
    EXPECT_EQ(out.nonplatooning_fraction, 0.0);
}
