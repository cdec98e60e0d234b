#include "otfbandit/environment.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>

namespace otf {
namespace {

Vector vec(std::initializer_list<double> xs) {
    Vector v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) v[i++] = x;
    return v;
}

TEST(ActionSetGeneration, OneDimensionalIsUnitVector) {
    Rng rng(1);
    const auto set = generate_action_set(rng, 1, 4);
    ASSERT_EQ(set.size(), 4u);
    for (const auto& a : set.actions()) EXPECT_DOUBLE_EQ(a[0], 1.0);
}

TEST(ActionSetGeneration, ActionsAreNormalizedBinaryVectors) {
    Rng rng(2);
    const Vector theta = Vector::Constant(5, 1.0 / std::sqrt(5.0));
    // Enumerate every nonzero binary vector: <a, theta> = sqrt(k/5) in (0, 1].
    std::set<long> reachable;
    for (int mask = 1; mask < 32; ++mask) {
        const int k = __builtin_popcount(static_cast<unsigned>(mask));
        const double ip = std::sqrt(k / 5.0);
        EXPECT_GT(ip, 0.0);
        EXPECT_LE(ip, 1.0);
        reachable.insert(std::lround(ip * 1e9));
    }
    for (int round = 0; round < 200; ++round) {
        const auto set = generate_action_set(rng, 5, 10);
        for (const auto& a : set.actions()) {
            EXPECT_NEAR(a.norm(), 1.0, 1e-9);
            const int k = static_cast<int>((a.array() > 0).count());
            ASSERT_GE(k, 1);
            for (Eigen::Index j = 0; j < 5; ++j) {
                if (a[j] != 0.0) EXPECT_NEAR(a[j], 1.0 / std::sqrt(static_cast<double>(k)), 1e-12);
            }
            EXPECT_NEAR(a.dot(theta), std::sqrt(k / 5.0), 1e-12);
            EXPECT_TRUE(reachable.count(std::lround(a.dot(theta) * 1e9)));
        }
    }
}

TEST(ActionSetGeneration, RejectsEmptyRequests) {
    Rng rng(3);
    EXPECT_THROW(generate_action_set(rng, 0, 3), ConfigError);
    EXPECT_THROW(generate_action_set(rng, 3, 0), ConfigError);
    EXPECT_THROW(ActionSet({}), ConfigError);
    EXPECT_THROW(ActionSet({vec({2.0, 0.0})}), ConfigError);
}

TEST(EnvironmentStep, ZeroDelayRevealsInSameRound) {
    Environment env(vec({1.0}), DelayDistribution::fixed(0), Rng(4));
    const ActionSet set({vec({1.0})});
    for (Round t = 1; t <= 20; ++t) {
        const auto out = env.step(0, set);
        EXPECT_EQ(out.reward, 1);
        ASSERT_EQ(out.events.size(), 1u);
        EXPECT_EQ(out.events[0].round, t);
        EXPECT_EQ(out.events[0].value, 1);
    }
}

TEST(EnvironmentStep, OrthogonalThetaNeverConverts) {
    Environment env(vec({1.0, 0.0}), DelayDistribution::geometric(2), Rng(5));
    const ActionSet set({vec({0.0, 1.0})});
    for (int t = 0; t < 2000; ++t) EXPECT_TRUE(env.step(0, set).events.empty());
    EXPECT_EQ(env.pending_count(), 0u);
}

TEST(EnvironmentStep, FixedDelayRevealsExactlyThreeRoundsLater) {
    Environment env(vec({0.5}), DelayDistribution::fixed(3), Rng(6));
    const ActionSet set({vec({1.0})});
    std::vector<int> rewards{0}; // 1-based
    for (Round t = 1; t <= 300; ++t) {
        const auto out = env.step(0, set);
        rewards.push_back(out.reward);
        EXPECT_EQ(out.delay, 3);
        const bool expect_event = t > 3 && rewards[static_cast<std::size_t>(t - 3)] == 1;
        ASSERT_EQ(out.events.size(), expect_event ? 1u : 0u) << "t=" << t;
        if (expect_event) EXPECT_EQ(out.events[0].round, t - 3);
    }
}

TEST(EnvironmentStep, ValidatesMeanRewardRange) {
    Environment env(vec({-0.5, 0.5}), DelayDistribution::fixed(0), Rng(7));
    const ActionSet set({vec({0.0, 1.0}), vec({1.0, 0.0})});
    try {
        env.step(0, set);
        FAIL() << "expected an error";
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("mean reward out of range"), std::string::npos);
    }
}

TEST(EnvironmentStep, EventConservationWithBoundedDelays) {
    const std::vector<double> support{0, 1, 2, 3, 4, 5};
    constexpr Round kBound = 5;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Environment env(vec({0.6, 0.0}), DelayDistribution::empirical(support, 1.0), Rng(seed));
        const ActionSet set({vec({1.0, 0.0}), vec({0.0, 1.0})});
        constexpr Round T = 400;
        std::set<Round> positives;
        std::set<Round> seen;
        for (Round t = 1; t <= T + kBound; ++t) {
            // Drain with the zero-mean action so no new conversions are created.
            const auto out = env.step(t <= T ? 0 : 1, set);
            if (out.reward == 1) positives.insert(t);
            for (const auto& e : out.events) {
                EXPECT_EQ(e.value, 1);
                EXPECT_LE(e.round, t);
                EXPECT_TRUE(seen.insert(e.round).second) << "duplicate event for round " << e.round;
            }
        }
        EXPECT_EQ(seen, positives);
        EXPECT_EQ(env.pending_count(), 0u);
    }
}

TEST(Regret, InstantaneousRegret) {
    Environment env(vec({0.9, 0.1}), DelayDistribution::fixed(0), Rng(8));
    const ActionSet set({vec({1.0, 0.0}), vec({0.0, 1.0})});
    EXPECT_DOUBLE_EQ(env.instantaneous_regret(set[0], set), 0.0);
    EXPECT_NEAR(env.instantaneous_regret(set[1], set), 0.8, 1e-15);
    EXPECT_EQ(env.best_action(set), 0u);
}

TEST(Regret, BestActionTiesGoToLowestIndex) {
    Environment env(vec({0.5, 0.5}), DelayDistribution::fixed(0), Rng(9));
    const ActionSet set({vec({0.0, 1.0}), vec({1.0, 0.0})});
    EXPECT_EQ(env.best_action(set), 0u);
}

TEST(HardPair, Construction) {
    const auto [theta, phi] = make_k_armed_hard_pair(2, 0.1, 2);
    EXPECT_DOUBLE_EQ(theta[0], 0.6);
    EXPECT_DOUBLE_EQ(theta[1], 0.5);
    EXPECT_DOUBLE_EQ(phi[0], 0.6);
    EXPECT_DOUBLE_EQ(phi[1], 0.7);
}

TEST(HardPair, BestArms) {
    const auto [theta, phi] = make_k_armed_hard_pair(6, 0.05, 4);
    const auto basis = ActionSet::standard_basis(6);
    EXPECT_EQ(Environment(theta, DelayDistribution::fixed(0), Rng(1)).best_action(basis), 0u);
    EXPECT_EQ(Environment(phi, DelayDistribution::fixed(0), Rng(1)).best_action(basis), 3u);
}

TEST(HardPair, RangeErrors) {
    EXPECT_THROW(make_k_armed_hard_pair(3, 0.25, 2), ConfigError);
    EXPECT_THROW(make_k_armed_hard_pair(3, 0.0, 2), ConfigError);
    EXPECT_THROW(make_k_armed_hard_pair(3, 0.1, 1), ConfigError);
    EXPECT_THROW(make_k_armed_hard_pair(3, 0.1, 4), ConfigError);
    EXPECT_THROW(make_k_armed_hard_pair(1, 0.1, 2), ConfigError);
}

} // namespace
} // namespace otf
