#include "otfbandit/config.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace otf {
namespace {

TEST(Presets, MatchExperimentSettings) {
    struct Expected {
        const char* name;
        std::int64_t m;
        double mu;
        double tau;
        double tol;
    };
    for (const auto& e : {Expected{"A", 100, 100, 0.63, 0.01}, Expected{"B", 500, 100, 0.993, 0.001},
                          Expected{"C", 100, 500, 1.0 / 5.5, 0.005}}) {
        const auto c = preset(e.name);
        EXPECT_EQ(c.d, 5u);
        EXPECT_EQ(c.K, 10u);
        EXPECT_EQ(c.T, 3000);
        EXPECT_EQ(c.policy.window, e.m);
        EXPECT_DOUBLE_EQ(c.delay.mean(), e.mu);
        EXPECT_NEAR(c.delay.cdf_at(c.policy.window), e.tau, e.tol) << e.name;
        EXPECT_NO_THROW(validate(c));
    }
    const auto d = preset("D");
    EXPECT_EQ(d.policy.window, 2000);
    EXPECT_EQ(d.T, 10000);
    EXPECT_THROW(preset("E"), ConfigError);
}

TEST(Config, DefaultsAreDocumentedValues) {
    const ExperimentConfig c;
    EXPECT_EQ(c.policy.delta, 0.05);
    EXPECT_EQ(c.policy.lambda, 1.0);
    EXPECT_EQ(c.n_runs, 100u);
    EXPECT_EQ(c.policy.width_mode, WidthMode::cached);
}

TEST(Config, UniformUnitTheta) {
    ExperimentConfig c;
    const Vector theta = resolve_theta(c);
    EXPECT_NEAR(theta.norm(), 1.0, 1e-15);
    EXPECT_DOUBLE_EQ(theta[0], 1.0 / std::sqrt(5.0));
}

TEST(Config, LoadsFileWithOverrides) {
    testing::TempDir dir;
    const auto path = dir.write("exp.cfg",
                                "# experiment\n"
                                "preset = B\n"
                                "policy = otf_lints   # trailing comment\n"
                                "delta = 0.1\n"
                                "lambda=2\n"
                                "runs = 7\n"
                                "seed = 123\n"
                                "width_mode = exact\n"
                                "\n");
    const auto c = load_config(path);
    EXPECT_EQ(c.preset_name, "B");
    EXPECT_EQ(c.policy.kind, PolicyKind::otf_lints);
    EXPECT_EQ(c.policy.window, 500);
    EXPECT_DOUBLE_EQ(c.policy.delta, 0.1);
    EXPECT_DOUBLE_EQ(c.policy.lambda, 2.0);
    EXPECT_EQ(c.n_runs, 7u);
    EXPECT_EQ(c.base_seed, 123u);
    EXPECT_EQ(c.policy.width_mode, WidthMode::exact);
}

TEST(Config, AutoWindowUsesRecommendation) {
    ExperimentConfig c;
    apply_setting(c, "delay", "geometric:40");
    apply_setting(c, "m", "auto");
    EXPECT_EQ(c.policy.window, 80);
}

TEST(Config, ThetaSpecs) {
    ExperimentConfig c;
    apply_setting(c, "d", "2");
    apply_setting(c, "theta", "explicit:0.6,0.3");
    EXPECT_DOUBLE_EQ(resolve_theta(c)[1], 0.3);
    EXPECT_EQ(to_string(c.theta), "explicit:0.59999999999999998,0.29999999999999999");

    apply_setting(c, "d", "4");
    apply_setting(c, "K", "4");
    apply_setting(c, "actions", "fixed_basis");
    apply_setting(c, "theta", "k_armed_hard:0.1:3");
    EXPECT_NO_THROW(validate(c));
    EXPECT_DOUBLE_EQ(resolve_theta(c)[2], 0.7);
    apply_setting(c, "theta", "k_armed_hard:0.1:1");
    EXPECT_DOUBLE_EQ(resolve_theta(c)[2], 0.5);
}

TEST(Config, Errors) {
    ExperimentConfig c;
    EXPECT_THROW(apply_setting(c, "colour", "blue"), ConfigError);
    EXPECT_THROW(apply_setting(c, "T", "-5"), ConfigError);
    EXPECT_THROW(apply_setting(c, "delta", "abc"), ConfigError);
    EXPECT_THROW(apply_setting(c, "theta", "gaussian"), ConfigError);

    c = ExperimentConfig{};
    c.theta.kind = ThetaKind::explicit_vector;
    c.theta.values = {1, 1, 1, 1, 1};
    EXPECT_THROW(validate(c), ConfigError); // norm > 1

    c = ExperimentConfig{};
    c.theta.kind = ThetaKind::k_armed_hard;
    EXPECT_THROW(validate(c), ConfigError); // needs fixed_basis

    c = ExperimentConfig{};
    c.action_mode = ActionMode::fixed_basis;
    EXPECT_THROW(validate(c), ConfigError); // K != d

    testing::TempDir dir;
    try {
        load_config(dir.write("bad.cfg", "d = 3\nnonsense line\n"));
        FAIL() << "expected an error";
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find(":2:"), std::string::npos) << e.what();
    }
    EXPECT_THROW(load_config(dir.path() / "missing.cfg"), ConfigError);
}

TEST(Config, DescribeRoundTripsThroughApplySetting) {
    ExperimentConfig c = preset("C");
    c.policy.kind = PolicyKind::random;
    c.base_seed = 77;
    ExperimentConfig back;
    for (const auto& [key, value] : describe(c)) {
        if (key == "preset") continue;
        apply_setting(back, key, value);
    }
    EXPECT_EQ(describe(back).size(), describe(c).size());
    for (std::size_t i = 1; i < describe(c).size(); ++i) EXPECT_EQ(describe(back)[i], describe(c)[i]);
}

} // namespace
} // namespace otf
