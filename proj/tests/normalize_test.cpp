#include "metricfuse/normalize.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "metricfuse/ingest.hpp"
#include "metricfuse/rng.hpp"

using namespace metricfuse;

namespace {

std::vector<double> apply_all(const ScalerParams& scaler, const std::vector<double>& values,
                              bool clamp = false) {
    std::vector<double> out;
    for (const double v : values) out.push_back(apply(scaler, v, clamp));
    return out;
}

}  // namespace

TEST(FitMinMax, Extrema) {
    const auto scaler = fit_minmax(std::vector<double>{2, 4, 10}, "vmaf");
    const auto& mm = std::get<MinMaxParams>(scaler.params);
    EXPECT_DOUBLE_EQ(mm.min, 2.0);
    EXPECT_DOUBLE_EQ(mm.max, 10.0);
}

TEST(FitMinMax, DegenerateInputs) {
    EXPECT_THROW(fit_minmax(std::vector<double>{5, 5, 5}, "vmaf"), Error);
    EXPECT_THROW(fit_minmax(std::vector<double>{0.88}, "dists"), Error);
    try {
        fit_minmax(std::vector<double>{5, 5, 5}, "vmaf");
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::DegenerateRange);
    }
}

TEST(FitZScore, PopulationMoments) {
    // sigma = sqrt(2/3) for {1,2,3} under the divide-by-N convention.
    const auto scaler = fit_zscore(std::vector<double>{1, 2, 3}, "vmaf");
    const auto& z = std::get<ZScoreParams>(scaler.params);
    EXPECT_DOUBLE_EQ(z.mu, 2.0);
    EXPECT_NEAR(z.sigma, 0.816497, 1e-6);
    EXPECT_DOUBLE_EQ(z.sigma, std::sqrt(2.0 / 3.0));

    const auto pm = fit_zscore(std::vector<double>{-1, 1}, "vmaf");
    const auto& z2 = std::get<ZScoreParams>(pm.params);
    EXPECT_DOUBLE_EQ(z2.mu, 0.0);
    EXPECT_DOUBLE_EQ(z2.sigma, 1.0);
}

TEST(FitZScore, ZeroVarianceIsDegenerate) {
    EXPECT_THROW(fit_zscore(std::vector<double>{7, 7, 7}, "vmaf"), Error);
}

TEST(Apply, MinMaxArithmetic) {
    const ScalerParams scaler{"vmaf", MinMaxParams{2, 10}};
    EXPECT_DOUBLE_EQ(apply(scaler, 4.0), 0.25);
    EXPECT_DOUBLE_EQ(apply(scaler, 12.0, false), 1.25);
    EXPECT_DOUBLE_EQ(apply(scaler, 12.0, true), 1.0);
}

TEST(Apply, ZScoreArithmetic) {
    const ScalerParams scaler{"vmaf", ZScoreParams{2.0, std::sqrt(2.0 / 3.0)}};
    EXPECT_NEAR(apply(scaler, 3.0), 1.224745, 1e-6);
    // clamp is ignored for z-scores
    EXPECT_DOUBLE_EQ(apply(scaler, 3.0, true), apply(scaler, 3.0, false));
}

TEST(FitAll, PerMetricOverPooledVideos) {
    Dataset dataset;
    dataset.id = "S";
    dataset.records = {
        {"S", "a", "v1", {{"vmaf", 10.0}, {"dists", 0.2}}, {ScoreKind::Mos, 3, 1, 5}},
        {"S", "b", "v2", {{"vmaf", 90.0}, {"dists", 0.8}}, {ScoreKind::Mos, 4, 1, 5}},
    };
    dataset.scenes = {"a", "b"};

    const auto mm = fit_all(dataset, NormKind::MinMax);
    EXPECT_EQ(mm.kind, NormKind::MinMax);
    EXPECT_EQ(mm.calibration_dataset_id, "S");
    EXPECT_EQ(std::get<MinMaxParams>(mm.scalers.at("vmaf").params), (MinMaxParams{10, 90}));
    EXPECT_EQ(std::get<MinMaxParams>(mm.scalers.at("dists").params), (MinMaxParams{0.2, 0.8}));

    const auto z = fit_all(dataset, NormKind::ZScore);
    EXPECT_EQ(std::get<ZScoreParams>(z.scalers.at("vmaf").params), (ZScoreParams{50, 40}));
}

TEST(FitAll, ConstantMetricNamesTheCulprit) {
    Dataset dataset;
    dataset.id = "S";
    dataset.records = {
        {"S", "a", "v1", {{"vmaf", 10.0}, {"dists", 0.5}}, {ScoreKind::Mos, 3, 1, 5}},
        {"S", "b", "v2", {{"vmaf", 90.0}, {"dists", 0.5}}, {ScoreKind::Mos, 4, 1, 5}},
    };
    dataset.scenes = {"a", "b"};
    try {
        fit_all(dataset, NormKind::MinMax);
        FAIL() << "expected DegenerateRange";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::DegenerateRange);
        EXPECT_NE(std::string(e.what()).find("dists"), std::string::npos);
    }
}

TEST(Normalization, SelfConsistencyProperties) {
    rng::SplitMix64 gen(77);
    for (int iter = 0; iter < 50; ++iter) {
        std::vector<double> values;
        const int n = 2 + static_cast<int>(gen.next_below(40));
        for (int i = 0; i < n; ++i) values.push_back(gen.next_double() * 100.0 - 50.0);

        const auto mm = fit_minmax(values, "m");
        const auto mapped = apply_all(mm, values);
        double lo = mapped[0];
        double hi = mapped[0];
        for (const double v : mapped) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        EXPECT_NEAR(lo, 0.0, 1e-12);
        EXPECT_NEAR(hi, 1.0, 1e-12);

        const auto zs = fit_zscore(values, "m");
        const auto standardized = apply_all(zs, values);
        double mean = 0.0;
        for (const double v : standardized) mean += v;
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (const double v : standardized) var += (v - mean) * (v - mean);
        var /= static_cast<double>(n);
        EXPECT_NEAR(mean, 0.0, 1e-9);
        EXPECT_NEAR(std::sqrt(var), 1.0, 1e-9);
    }
}

TEST(Normalization, StrictlyRankPreserving) {
    rng::SplitMix64 gen(88);
    std::vector<double> values;
    for (int i = 0; i < 30; ++i) values.push_back(gen.next_double() * 20.0);
    for (const auto& scaler : {fit_minmax(values, "m"), fit_zscore(values, "m")}) {
        for (std::size_t i = 0; i < values.size(); ++i) {
            for (std::size_t j = 0; j < values.size(); ++j) {
                if (values[i] < values[j]) {
                    EXPECT_LT(apply(scaler, values[i]), apply(scaler, values[j]));
                }
            }
        }
    }
}

TEST(Normalization, MinMaxDifferencesProportionalToInputs) {
    const auto scaler = fit_minmax(std::vector<double>{3.0, 9.0, 21.0}, "m");
    const double x1 = 4.0;
    const double x2 = 13.0;
    const double x3 = 17.5;
    const double lhs = (apply(scaler, x1) - apply(scaler, x2)) * (x1 - x3);
    const double rhs = (apply(scaler, x1) - apply(scaler, x3)) * (x1 - x2);
    EXPECT_NEAR(lhs, rhs, 1e-12);
}

TEST(ScalerSet, JsonRoundTripIsExact) {
    Dataset dataset;
    dataset.id = "S";
    rng::SplitMix64 gen(99);
    for (int i = 0; i < 7; ++i) {
        VideoRecord record;
        record.dataset_id = "S";
        record.scene_id = "sc" + std::to_string(i / 2);
        record.video_id = "v" + std::to_string(i);
        record.metrics = {{"vmaf", gen.next_double() * 100.0}, {"dists", gen.next_double()}};
        record.subjective = {ScoreKind::Mos, 3.0, 1.0, 5.0};
        dataset.records.push_back(record);
    }
    dataset.scenes = {"sc0", "sc1", "sc2", "sc3"};

    for (const auto kind : {NormKind::MinMax, NormKind::ZScore}) {
        const auto fitted = fit_all(dataset, kind);
        const std::string text = serialize(fitted);
        const auto parsed = deserialize_scaler_set(text);
        EXPECT_EQ(parsed, fitted);
        // serializing again yields identical bytes
        EXPECT_EQ(serialize(parsed), text);
    }
}
