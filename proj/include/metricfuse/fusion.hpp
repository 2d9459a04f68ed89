#pragma once

// Fusion of two normalized metrics into one score. Minimum selection keeps
// the worse of the two (artifacts dominate perceived quality); averaging
// weights them equally. Labels follow the <strategy>_<normalization> scheme,
// e.g. "avg_mm", "min_z"; a bare metric name is an unfused passthrough.

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "metricfuse/csv.hpp"
#include "metricfuse/dataset.hpp"
#include "metricfuse/error.hpp"
#include "metricfuse/normalize.hpp"

namespace metricfuse {

enum class FusionStrategy { Min, Avg, Passthrough };

struct FusionSpec {
    FusionStrategy strategy = FusionStrategy::Passthrough;
    NormKind normalization = NormKind::MinMax;
    std::pair<std::string, std::string> inputs = {"vmaf", "dists"};
    std::string label;

    bool operator==(const FusionSpec&) const = default;

    bool fused() const { return strategy != FusionStrategy::Passthrough; }
};

inline FusionSpec make_fused(FusionStrategy strategy, NormKind kind,
                             std::pair<std::string, std::string> inputs = {"vmaf", "dists"}) {
    if (inputs.first == inputs.second) {
        raise(Errc::InvalidSpec, "fusion inputs must be distinct metrics, got '" + inputs.first +
                                     "' twice");
    }
    FusionSpec spec;
    spec.strategy = strategy;
    spec.normalization = kind;
    spec.inputs = std::move(inputs);
    spec.label = std::string(strategy == FusionStrategy::Min ? "min" : "avg") + "_" +
                 norm_kind_name(kind);
    return spec;
}

inline FusionSpec make_passthrough(const std::string& metric_name) {
    FusionSpec spec;
    spec.strategy = FusionStrategy::Passthrough;
    spec.inputs = {metric_name, metric_name};
    spec.label = metric_name;
    return spec;
}

// Parses a label into a FusionSpec. "<X>_mm" / "<X>_z" must use a known
// strategy; anything else is a passthrough metric name (validated against the
// dataset's metrics at run time).
inline FusionSpec parse_label(const std::string& label) {
    const auto underscore = label.rfind('_');
    if (underscore != std::string::npos) {
        const std::string suffix = label.substr(underscore + 1);
        if (suffix == "mm" || suffix == "z") {
            const std::string strategy = label.substr(0, underscore);
            const NormKind kind = (suffix == "mm") ? NormKind::MinMax : NormKind::ZScore;
            if (strategy == "min") return make_fused(FusionStrategy::Min, kind);
            if (strategy == "avg") return make_fused(FusionStrategy::Avg, kind);
            raise(Errc::UnknownLabel,
                  "label '" + label + "': unknown fusion strategy '" + strategy + "'");
        }
    }
    if (label.empty()) raise(Errc::UnknownLabel, "empty label");
    return make_passthrough(label);
}

inline double fuse(const FusionSpec& spec, const std::map<std::string, double>& normalized) {
    const auto lookup = [&](const std::string& name) {
        const auto it = normalized.find(name);
        if (it == normalized.end()) {
            raise(Errc::MissingInput, "label '" + spec.label + "': missing input '" + name + "'");
        }
        return it->second;
    };
    switch (spec.strategy) {
    case FusionStrategy::Min:
        return std::min(lookup(spec.inputs.first), lookup(spec.inputs.second));
    case FusionStrategy::Avg:
        return (lookup(spec.inputs.first) + lookup(spec.inputs.second)) / 2.0;
    case FusionStrategy::Passthrough:
        return lookup(spec.inputs.first);
    }
    raise(Errc::UnknownLabel, "label '" + spec.label + "': bad strategy");
}

using VideoKey = std::pair<std::string, std::string>;  // (scene_id, video_id)
using ScoreMap = std::map<VideoKey, double>;

// Computes the per-video score for a label over a dataset. Fused labels
// normalize their two inputs with the given scalers first; passthrough labels
// read the raw (post-inversion) metric directly, so `scalers` may be null.
inline ScoreMap fuse_dataset(const FusionSpec& spec, const Dataset& dataset,
                             const ScalerSet* scalers, bool clamp = false) {
    if (spec.fused()) {
        if (scalers == nullptr) {
            raise(Errc::MissingInput, "label '" + spec.label + "': no scaler set provided");
        }
        for (const auto& name : {spec.inputs.first, spec.inputs.second}) {
            if (!scalers->scalers.count(name)) {
                raise(Errc::MissingInput,
                      "label '" + spec.label + "': no fitted scaler for metric '" + name + "'");
            }
        }
    }

    ScoreMap scores;
    for (const auto& record : dataset.records) {
        double value = 0.0;
        if (spec.fused()) {
            std::map<std::string, double> normalized;
            for (const auto& name : {spec.inputs.first, spec.inputs.second}) {
                const auto it = record.metrics.find(name);
                if (it == record.metrics.end()) {
                    raise(Errc::MissingInput, "label '" + spec.label + "': video " +
                                                  record.scene_id + "/" + record.video_id +
                                                  " lacks metric '" + name + "'");
                }
                normalized[name] = apply(scalers->scalers.at(name), it->second, clamp);
            }
            value = fuse(spec, normalized);
        } else {
            const auto it = record.metrics.find(spec.inputs.first);
            if (it == record.metrics.end()) {
                raise(Errc::MissingInput, "label '" + spec.label + "': video " + record.scene_id +
                                              "/" + record.video_id + " lacks metric '" +
                                              spec.inputs.first + "'");
            }
            value = it->second;
        }
        scores[{record.scene_id, record.video_id}] = value;
    }
    return scores;
}

// Fused scores in the ingest metric-file schema so outputs can be chained
// back through the pipeline.
inline std::string scores_to_csv(const std::string& dataset_id, const std::string& label,
                                 const ScoreMap& scores) {
    std::string out = "dataset,scene,video,metric,value\n";
    for (const auto& [key, value] : scores) {
        out += dataset_id + ',' + key.first + ',' + key.second + ',' + label + ',' +
               csv::format_double(value) + '\n';
    }
    return out;
}

}  // namespace metricfuse
