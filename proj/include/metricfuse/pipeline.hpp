#pragma once

// End-to-end evaluation protocol: split scenes into calibration/test (or use
// two whole datasets in cross mode), fit scalers on calibration only, score
// every label on the test records, and bootstrap each label's correlations.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "metricfuse/bootstrap.hpp"
#include "metricfuse/dataset.hpp"
#include "metricfuse/error.hpp"
#include "metricfuse/fusion.hpp"
#include "metricfuse/ingest.hpp"
#include "metricfuse/normalize.hpp"
#include "metricfuse/rng.hpp"

namespace metricfuse {

struct SplitSpec {
    double calibration_fraction = 0.8;
    std::uint64_t seed = 0;
    std::vector<std::string> calibration_scenes;  // sorted
    std::vector<std::string> test_scenes;         // sorted

    bool operator==(const SplitSpec&) const = default;
};

// Seeded scene-wise split: shuffle the canonical scene list, take the first
// floor(fraction * n) scenes for calibration, the rest for test. Part sizes
// depend only on (fraction, n); membership only on the seed.
inline SplitSpec split_by_scene(const Dataset& dataset, double fraction, std::uint64_t seed) {
    const auto n = dataset.scenes.size();
    if (n < 2) raise(Errc::TooFewScenes, "need at least 2 scenes to split, got " + std::to_string(n));
    // Nudge before floor so fractions like 0.7 * 10 don't land a hair under
    // the integer they represent.
    const auto n_cal =
        static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n) + 1e-9));
    if (n_cal == 0 || n_cal >= n) {
        raise(Errc::TooFewScenes, "fraction " + std::to_string(fraction) + " over " +
                                      std::to_string(n) + " scenes leaves an empty part");
    }

    std::vector<std::string> shuffled = dataset.scenes;
    rng::SplitMix64 gen(rng::derive_stream(seed, 0));
    rng::shuffle(shuffled, gen);

    SplitSpec split;
    split.calibration_fraction = fraction;
    split.seed = seed;
    split.calibration_scenes.assign(shuffled.begin(), shuffled.begin() + static_cast<long>(n_cal));
    split.test_scenes.assign(shuffled.begin() + static_cast<long>(n_cal), shuffled.end());
    std::sort(split.calibration_scenes.begin(), split.calibration_scenes.end());
    std::sort(split.test_scenes.begin(), split.test_scenes.end());
    return split;
}

enum class RunMode { Within, Cross };

struct DataSource {
    std::string file_metrics;
    std::string file_subjective;
    std::string dataset_id;
};

struct RunConfig {
    DataSource calibration;
    DataSource test;
    RunMode mode = RunMode::Within;
    double fraction = 0.8;
    std::uint64_t seed = 0;
    std::vector<FusionSpec> labels;
    BootstrapConfig bootstrap;
    bool clamp = false;
    IngestOptions ingest;
    int threads = 0;  // 0 = hardware concurrency
};

struct RunCounts {
    int calibration_videos = 0;
    int calibration_scenes = 0;
    int test_videos = 0;
    int test_scenes = 0;

    bool operator==(const RunCounts&) const = default;
};

struct RunResult {
    std::string config_label;  // e.g. "Calib-S/Test-O"
    RunCounts counts;
    std::vector<CorrelationSummary> summaries;           // in label order
    std::map<std::string, ScalerSet> scaler_sets;        // by kind name ("mm"/"z")
    SplitSpec split;                                     // within mode only
    std::vector<DroppedScene> dropped_calibration;
    std::vector<DroppedScene> dropped_test;
};

using ProgressFn = std::function<void(int index, int total, const std::string& label)>;

// Core protocol over already-loaded datasets. In within mode both arguments
// must be the same dataset; in cross mode calibration uses all of A and test
// all of B.
inline RunResult run(const RunConfig& config, const Dataset& calibration_source,
                     const Dataset& test_source, const ProgressFn& progress = {}) {
    if (config.labels.empty()) raise(Errc::InvalidConfig, "labels must be non-empty");
    {
        std::set<std::string> seen;
        for (const auto& spec : config.labels) {
            if (!seen.insert(spec.label).second) {
                raise(Errc::InvalidConfig, "duplicate label '" + spec.label + "'");
            }
        }
    }

    RunResult result;
    Dataset calibration;
    Dataset test;
    if (config.mode == RunMode::Within) {
        if (calibration_source.id != test_source.id) {
            raise(Errc::InvalidConfig, "within mode requires calibration and test to be the same dataset");
        }
        result.split = split_by_scene(calibration_source, config.fraction, config.seed);
        calibration = subset(calibration_source, result.split.calibration_scenes);
        test = subset(calibration_source, result.split.test_scenes);
    } else {
        calibration = calibration_source;
        test = test_source;
    }
    result.config_label = "Calib-" + calibration.id + "/Test-" + test.id;
    result.counts = {static_cast<int>(calibration.records.size()),
                     static_cast<int>(calibration.scenes.size()),
                     static_cast<int>(test.records.size()),
                     static_cast<int>(test.scenes.size())};

    // Validate passthrough labels against the test dataset's metric set.
    {
        const auto names = test.metric_names();
        for (const auto& spec : config.labels) {
            if (!spec.fused() &&
                std::find(names.begin(), names.end(), spec.label) == names.end()) {
                raise(Errc::UnknownLabel,
                      "label '" + spec.label + "' is neither a fusion label nor a dataset metric");
            }
        }
    }

    // Scalers are fitted on calibration records only; test records never
    // touch the fit (no leakage).
    for (const auto& spec : config.labels) {
        if (!spec.fused()) continue;
        const std::string kind = norm_kind_name(spec.normalization);
        if (!result.scaler_sets.count(kind)) {
            result.scaler_sets.emplace(kind, fit_all(calibration, spec.normalization));
        }
    }

    const SceneView view = SceneView::from(test);
    int index = 0;
    for (const auto& spec : config.labels) {
        if (progress) progress(index + 1, static_cast<int>(config.labels.size()), spec.label);
        const ScalerSet* scalers =
            spec.fused() ? &result.scaler_sets.at(norm_kind_name(spec.normalization)) : nullptr;
        const ScoreMap scores = fuse_dataset(spec, test, scalers, config.clamp);
        result.summaries.push_back(
            bootstrap_label(spec.label, view, scores, config.bootstrap, config.threads));
        ++index;
    }
    return result;
}

// Loads the configured sources and runs the protocol. Within mode loads one
// dataset; cross mode loads two.
inline RunResult run_from_files(const RunConfig& config, const ProgressFn& progress = {},
                                MissingPolicy policy = MissingPolicy::DropScene) {
    const auto load = [&](const DataSource& source) {
        auto metrics = load_metrics(source.file_metrics);
        auto subjective = load_subjective(source.file_subjective);
        auto assembled = assemble(metrics, subjective, policy, config.ingest);
        if (assembled.dataset.id != source.dataset_id) {
            raise(Errc::DatasetMismatch, "config expects dataset '" + source.dataset_id +
                                             "', files carry '" + assembled.dataset.id + "'");
        }
        return assembled;
    };

    if (config.mode == RunMode::Within) {
        if (config.calibration.dataset_id != config.test.dataset_id) {
            raise(Errc::InvalidConfig, "within mode requires calibration and test to reference the same dataset");
        }
        auto assembled = load(config.calibration);
        auto result = run(config, assembled.dataset, assembled.dataset, progress);
        result.dropped_calibration = assembled.dropped;
        result.dropped_test = assembled.dropped;
        return result;
    }
    auto calibration = load(config.calibration);
    auto test = load(config.test);
    auto result = run(config, calibration.dataset, test.dataset, progress);
    result.dropped_calibration = calibration.dropped;
    result.dropped_test = test.dropped;
    return result;
}

// --- run configuration file ------------------------------------------------
//
// {
//   "calibration": {"file_metrics": ..., "file_subjective": ..., "dataset": ...},
//   "test":        {...},
//   "mode": "within" | "cross",
//   "fraction": 0.8,                  // optional, default 0.8
//   "seed": 42,
//   "labels": ["avg_mm", "min_z", "vmaf", ...],
//   "bootstrap": {"n_resamples": 1000, "confidence": 0.95, "seed": 7},
//   "clamp": false,                   // optional, default false
//   "invert_lower_better": ["dists", "lpips"],            // optional
//   "dmos_rule": {"scale": -1.0, "offset": 0.0, "add_scale_max": true}  // optional
// }

inline RunConfig parse_run_config(const nlohmann::json& doc) {
    RunConfig config;
    try {
        const auto source = [&](const nlohmann::json& node) {
            DataSource s;
            s.file_metrics = node.at("file_metrics").get<std::string>();
            s.file_subjective = node.at("file_subjective").get<std::string>();
            s.dataset_id = node.at("dataset").get<std::string>();
            return s;
        };
        config.calibration = source(doc.at("calibration"));
        config.test = source(doc.at("test"));

        const std::string mode = doc.at("mode").get<std::string>();
        if (mode == "within") {
            config.mode = RunMode::Within;
        } else if (mode == "cross") {
            config.mode = RunMode::Cross;
        } else {
            raise(Errc::InvalidConfig, "mode must be 'within' or 'cross', got '" + mode + "'");
        }

        config.fraction = doc.value("fraction", 0.8);
        if (!(config.fraction > 0.0 && config.fraction < 1.0)) {
            raise(Errc::InvalidConfig, "fraction must lie in (0,1)");
        }
        config.seed = doc.at("seed").get<std::uint64_t>();

        for (const auto& label : doc.at("labels")) {
            config.labels.push_back(parse_label(label.get<std::string>()));
        }
        if (config.labels.empty()) raise(Errc::InvalidConfig, "labels must be non-empty");

        const auto& bootstrap = doc.at("bootstrap");
        config.bootstrap.n_resamples = bootstrap.at("n_resamples").get<int>();
        config.bootstrap.confidence = bootstrap.at("confidence").get<double>();
        config.bootstrap.seed = bootstrap.at("seed").get<std::uint64_t>();
        if (config.bootstrap.n_resamples < 1) {
            raise(Errc::InvalidConfig, "bootstrap.n_resamples must be >= 1");
        }
        if (!(config.bootstrap.confidence > 0.0 && config.bootstrap.confidence < 1.0)) {
            raise(Errc::InvalidConfig, "bootstrap.confidence must lie in (0,1)");
        }

        config.clamp = doc.value("clamp", false);
        if (doc.contains("invert_lower_better")) {
            config.ingest.invert_lower_better.clear();
            for (const auto& name : doc.at("invert_lower_better")) {
                config.ingest.invert_lower_better.push_back(
                    csv::to_lower(name.get<std::string>()));
            }
        }
        if (doc.contains("dmos_rule")) {
            const auto& rule = doc.at("dmos_rule");
            config.ingest.dmos_rule.scale = rule.value("scale", -1.0);
            config.ingest.dmos_rule.offset = rule.value("offset", 0.0);
            config.ingest.dmos_rule.add_scale_max = rule.value("add_scale_max", true);
        }
    } catch (const nlohmann::json::exception& e) {
        raise(Errc::InvalidConfig, std::string("run config: ") + e.what());
    }
    return config;
}

inline RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(Errc::IoError, "cannot open config: " + path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        raise(Errc::InvalidConfig, path + ": " + e.what());
    }
    return parse_run_config(doc);
}

}  // namespace metricfuse
