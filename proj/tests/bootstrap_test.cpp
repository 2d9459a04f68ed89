#include "metricfuse/bootstrap.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "oracles.hpp"

using namespace metricfuse;

namespace {

// Two scenes, two videos each; objective tracks MOS perfectly.
SceneView perfect_view() {
    SceneView view;
    view.scenes = {"A", "B"};
    view.by_scene["A"] = {{{"A", "v1"}, 1.0}, {{"A", "v2"}, 2.0}};
    view.by_scene["B"] = {{{"B", "v1"}, 3.0}, {{"B", "v2"}, 4.0}};
    return view;
}

ScoreMap perfect_scores() {
    return {{{"A", "v1"}, 0.1}, {{"A", "v2"}, 0.2}, {{"B", "v1"}, 0.3}, {{"B", "v2"}, 0.4}};
}

}  // namespace

TEST(ResampleScenes, SingleSceneIsForced) {
    const std::vector<std::string> scenes{"A"};
    for (std::uint64_t i = 0; i < 20; ++i) {
        EXPECT_EQ(resample_scenes(scenes, i, 42), scenes);
    }
}

TEST(ResampleScenes, CardinalityAndDeterminism) {
    const std::vector<std::string> scenes{"A", "B"};
    bool any_difference = false;
    for (std::uint64_t i = 0; i < 50; ++i) {
        const auto drawn = resample_scenes(scenes, i, 7);
        EXPECT_EQ(drawn.size(), 2u);
        for (const auto& s : drawn) EXPECT_TRUE(s == "A" || s == "B");
        EXPECT_EQ(drawn, resample_scenes(scenes, i, 7));  // pure in (seed, index)
        if (drawn != resample_scenes(scenes, i + 1, 7)) any_difference = true;
    }
    EXPECT_TRUE(any_difference);
}

TEST(ResampleScenes, UniformOverScenes) {
    const std::vector<std::string> scenes{"A", "B", "C"};
    std::map<std::string, int> counts;
    const int replicates = 10000;
    for (int i = 0; i < replicates; ++i) {
        for (const auto& s : resample_scenes(scenes, static_cast<std::uint64_t>(i), 123)) {
            ++counts[s];
        }
    }
    // 30000 draws over 3 scenes: each expects 10000, tolerance 3% relative.
    for (const auto& [scene, count] : counts) {
        EXPECT_NEAR(static_cast<double>(count), 10000.0, 300.0) << scene;
    }
}

TEST(ReplicateCorrelation, SceneMultiplicityCounts) {
    const auto view = perfect_view();
    const auto scores = perfect_scores();
    // Scene A twice: four pairs, all from A's two videos.
    const auto value = replicate_correlation(view, {"A", "A"}, scores);
    ASSERT_TRUE(value.has_value());
    // Duplicated pairs keep the perfect relation.
    EXPECT_DOUBLE_EQ(value->first, 1.0);
    EXPECT_DOUBLE_EQ(value->second, 1.0);
}

TEST(ReplicateCorrelation, HandCheckedPerfectRelation) {
    const auto value = replicate_correlation(perfect_view(), {"A", "B"}, perfect_scores());
    ASSERT_TRUE(value.has_value());
    EXPECT_DOUBLE_EQ(value->first, 1.0);
    EXPECT_DOUBLE_EQ(value->second, 1.0);
}

TEST(ReplicateCorrelation, DegeneratePolicy) {
    SceneView view;
    view.scenes = {"A", "B"};
    view.by_scene["A"] = {{{"A", "v1"}, 3.0}, {{"A", "v2"}, 3.0}};
    view.by_scene["B"] = {{{"B", "v1"}, 3.0}, {{"B", "v2"}, 3.0}};
    const ScoreMap scores{
        {{"A", "v1"}, 0.1}, {{"A", "v2"}, 0.2}, {{"B", "v1"}, 0.3}, {{"B", "v2"}, 0.4}};

    EXPECT_FALSE(
        replicate_correlation(view, {"A", "B"}, scores, DegeneratePolicy::Skip).has_value());
    EXPECT_THROW(replicate_correlation(view, {"A", "B"}, scores, DegeneratePolicy::Error), Error);
}

TEST(ReplicateCorrelation, TooFewPointsAlwaysRaises) {
    SceneView view;
    view.scenes = {"A", "B"};
    view.by_scene["A"] = {{{"A", "v1"}, 1.0}};
    view.by_scene["B"] = {{{"B", "v1"}, 2.0}};
    const ScoreMap scores{{{"A", "v1"}, 0.1}, {{"B", "v1"}, 0.2}};
    EXPECT_THROW(replicate_correlation(view, {"A", "B"}, scores, DegeneratePolicy::Skip), Error);
}

TEST(Summarize, IdenticalReplicatesHaveZeroWidth) {
    BootstrapConfig config;
    config.n_resamples = 4;
    const std::vector<ReplicateValue> replicates(4, std::make_pair(0.75, 0.5));
    const auto summary = summarize("x", replicates, config);
    EXPECT_DOUBLE_EQ(summary.r_p_mean, 0.75);
    EXPECT_EQ(summary.r_p_ci, (Interval{0.75, 0.75}));
    EXPECT_EQ(summary.r_s_ci, (Interval{0.5, 0.5}));
    EXPECT_EQ(summary.n_effective, 4);
    EXPECT_EQ(summary.n_skipped, 0);
}

TEST(Summarize, TwoPointInterpolation) {
    BootstrapConfig config;
    config.n_resamples = 2;
    const std::vector<ReplicateValue> replicates{std::make_pair(0.0, 0.0),
                                                 std::make_pair(1.0, 1.0)};
    const auto summary = summarize("x", replicates, config);
    EXPECT_DOUBLE_EQ(summary.r_p_mean, 0.5);
    EXPECT_NEAR(summary.r_p_ci.low, 0.025, 1e-12);
    EXPECT_NEAR(summary.r_p_ci.high, 0.975, 1e-12);
}

TEST(Summarize, MatchesQuantileOracleOnLargeFixture) {
    rng::SplitMix64 gen(2024);
    std::vector<ReplicateValue> replicates;
    std::vector<double> rp;
    std::vector<double> rs;
    for (int i = 0; i < 1000; ++i) {
        const double a = gen.next_double() * 2.0 - 1.0;
        const double b = gen.next_double() * 2.0 - 1.0;
        replicates.push_back(std::make_pair(a, b));
        rp.push_back(a);
        rs.push_back(b);
    }
    BootstrapConfig config;
    config.n_resamples = 1000;
    const auto summary = summarize("x", replicates, config);
    EXPECT_NEAR(summary.r_p_ci.low, oracles::quantile(rp, 0.025), 1e-12);
    EXPECT_NEAR(summary.r_p_ci.high, oracles::quantile(rp, 0.975), 1e-12);
    EXPECT_NEAR(summary.r_s_ci.low, oracles::quantile(rs, 0.025), 1e-12);
    EXPECT_NEAR(summary.r_s_ci.high, oracles::quantile(rs, 0.975), 1e-12);

    // Bounds sit inside the replicate range and bracket the median.
    const double lo = *std::min_element(rp.begin(), rp.end());
    const double hi = *std::max_element(rp.begin(), rp.end());
    const double median = oracles::quantile(rp, 0.5);
    EXPECT_GE(summary.r_p_ci.low, lo);
    EXPECT_LE(summary.r_p_ci.high, hi);
    EXPECT_LE(summary.r_p_ci.low, median);
    EXPECT_GE(summary.r_p_ci.high, median);
}

TEST(Summarize, SkippedReplicatesAreCounted) {
    BootstrapConfig config;
    config.n_resamples = 3;
    const std::vector<ReplicateValue> replicates{std::make_pair(0.5, 0.5), std::nullopt,
                                                 std::make_pair(0.7, 0.7)};
    const auto summary = summarize("x", replicates, config);
    EXPECT_EQ(summary.n_effective, 2);
    EXPECT_EQ(summary.n_skipped, 1);
    EXPECT_DOUBLE_EQ(summary.r_p_mean, 0.6);

    EXPECT_THROW(summarize("x", {std::nullopt, std::nullopt}, config), Error);
}

TEST(Summarize, WiderConfidenceWidensInterval) {
    rng::SplitMix64 gen(31);
    std::vector<ReplicateValue> replicates;
    for (int i = 0; i < 200; ++i) {
        const double v = gen.next_double();
        replicates.push_back(std::make_pair(v, v));
    }
    BootstrapConfig narrow;
    narrow.n_resamples = 200;
    narrow.confidence = 0.8;
    BootstrapConfig wide = narrow;
    wide.confidence = 0.99;
    const auto a = summarize("x", replicates, narrow);
    const auto b = summarize("x", replicates, wide);
    EXPECT_LE(b.r_p_ci.low, a.r_p_ci.low);
    EXPECT_GE(b.r_p_ci.high, a.r_p_ci.high);
}

TEST(BootstrapLabel, ThreadCountDoesNotChangeResults) {
    const auto view = perfect_view();
    // Noisy scores so replicates differ.
    ScoreMap scores{
        {{"A", "v1"}, 0.12}, {{"A", "v2"}, 0.31}, {{"B", "v1"}, 0.27}, {{"B", "v2"}, 0.44}};
    BootstrapConfig config;
    config.n_resamples = 500;
    config.seed = 99;
    const auto serial = bootstrap_label("x", view, scores, config, 1);
    const auto threaded = bootstrap_label("x", view, scores, config, 8);
    EXPECT_EQ(serial, threaded);
}

TEST(BootstrapLabel, SingleSceneGivesZeroWidthIntervals) {
    SceneView view;
    view.scenes = {"only"};
    view.by_scene["only"] = {{{"only", "v1"}, 1.0}, {{"only", "v2"}, 2.0}, {{"only", "v3"}, 3.0}};
    const ScoreMap scores{{{"only", "v1"}, 0.3}, {{"only", "v2"}, 0.1}, {{"only", "v3"}, 0.9}};
    BootstrapConfig config;
    config.n_resamples = 100;
    config.seed = 5;
    const auto summary = bootstrap_label("x", view, scores, config, 4);
    EXPECT_EQ(summary.r_p_ci.low, summary.r_p_ci.high);
    EXPECT_EQ(summary.r_s_ci.low, summary.r_s_ci.high);
    EXPECT_NEAR(summary.r_p_mean, summary.r_p_ci.low, 1e-12);
}

TEST(BootstrapLabel, CiBoundsBracketedByReplicates) {
    const auto view = perfect_view();
    ScoreMap scores{
        {{"A", "v1"}, 0.9}, {{"A", "v2"}, 0.2}, {{"B", "v1"}, 0.5}, {{"B", "v2"}, 0.7}};
    BootstrapConfig config;
    config.n_resamples = 300;
    config.seed = 17;
    const auto summary = bootstrap_label("x", view, scores, config, 2);
    EXPECT_LE(summary.r_p_ci.low, summary.r_p_ci.high);
    EXPECT_GE(summary.r_p_ci.low, -1.0);
    EXPECT_LE(summary.r_p_ci.high, 1.0);
    EXPECT_EQ(summary.n_effective + summary.n_skipped, 300);
}
