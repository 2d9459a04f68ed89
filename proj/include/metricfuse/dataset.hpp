#pragma once

// Core domain types: per-video records with metric scores and a subjective
// score, grouped into a Dataset with canonical ordering.

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "metricfuse/error.hpp"

namespace metricfuse {

enum class ScoreKind { Mos, Dmos };

struct SubjectiveScore {
    ScoreKind kind = ScoreKind::Mos;
    double value = 0.0;
    double scale_min = 0.0;
    double scale_max = 0.0;

    bool operator==(const SubjectiveScore&) const = default;
};

struct VideoRecord {
    std::string dataset_id;
    std::string scene_id;
    std::string video_id;
    std::map<std::string, double> metrics;  // metric name (lowercase) -> score
    SubjectiveScore subjective;

    bool operator==(const VideoRecord&) const = default;
};

struct Dataset {
    std::string id;
    std::vector<VideoRecord> records;  // sorted by (scene_id, video_id)
    std::vector<std::string> scenes;   // distinct scene ids, record order

    bool operator==(const Dataset&) const = default;

    std::vector<std::string> metric_names() const {
        std::vector<std::string> names;
        if (!records.empty()) {
            for (const auto& [name, _] : records.front().metrics) names.push_back(name);
        }
        return names;
    }
};

// DMOS -> MOS conversion rule: mos = scale * dmos + offset (+ scale_max when
// add_scale_max). The default reflects around the top of the rating scale,
// i.e. mos = scale_max - dmos, the hidden-reference approximation.
struct DmosRule {
    double scale = -1.0;
    double offset = 0.0;
    bool add_scale_max = true;

    bool operator==(const DmosRule&) const = default;
};

// Canonicalizes a subjective score to MOS. MOS inputs pass through unchanged;
// DMOS inputs are converted by the rule and clamped into the scale bounds.
inline SubjectiveScore to_mos(const SubjectiveScore& s, const DmosRule& rule = {}) {
    if (s.kind == ScoreKind::Mos) return s;
    double value = rule.scale * s.value + rule.offset + (rule.add_scale_max ? s.scale_max : 0.0);
    value = std::clamp(value, s.scale_min, s.scale_max);
    return SubjectiveScore{ScoreKind::Mos, value, s.scale_min, s.scale_max};
}

// Flips a DISTS score (lower is better, nominal range [0,1]) to 1 - x so
// higher means better, keeping the value inside [0,1].
inline double invert_dists(double value) {
    constexpr double kTol = 1e-9;
    if (!(value >= -kTol && value <= 1.0 + kTol)) {
        raise(Errc::OutOfRange, "dists score " + std::to_string(value) + " outside [0,1]");
    }
    return 1.0 - std::clamp(value, 0.0, 1.0);
}

// Restriction of a dataset to the given scenes, preserving canonical order.
inline Dataset subset(const Dataset& dataset, const std::vector<std::string>& scenes) {
    Dataset out;
    out.id = dataset.id;
    for (const auto& record : dataset.records) {
        if (std::find(scenes.begin(), scenes.end(), record.scene_id) != scenes.end()) {
            out.records.push_back(record);
        }
    }
    for (const auto& record : out.records) {
        if (out.scenes.empty() || out.scenes.back() != record.scene_id) {
            out.scenes.push_back(record.scene_id);
        }
    }
    return out;
}

}  // namespace metricfuse
