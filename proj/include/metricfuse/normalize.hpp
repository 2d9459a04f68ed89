#pragma once

// Normalization: min-max rescaling x' = (x - min) / (max - min) and z-score
// standardization z = (x - mu) / sigma, with parameters fitted on calibration
// data and applied unchanged to test data. Sigma is the population standard
// deviation (divide by N).

#include <cmath>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "metricfuse/dataset.hpp"
#include "metricfuse/error.hpp"

namespace metricfuse {

enum class NormKind { MinMax, ZScore };

inline std::string norm_kind_name(NormKind kind) {
    return kind == NormKind::MinMax ? "mm" : "z";
}

struct MinMaxParams {
    double min = 0.0;
    double max = 1.0;

    bool operator==(const MinMaxParams&) const = default;
};

struct ZScoreParams {
    double mu = 0.0;
    double sigma = 1.0;

    bool operator==(const ZScoreParams&) const = default;
};

struct ScalerParams {
    std::string metric_name;
    std::variant<MinMaxParams, ZScoreParams> params;

    bool operator==(const ScalerParams&) const = default;

    NormKind kind() const {
        return std::holds_alternative<MinMaxParams>(params) ? NormKind::MinMax : NormKind::ZScore;
    }
};

struct ScalerSet {
    NormKind kind = NormKind::MinMax;
    std::string calibration_dataset_id;
    std::map<std::string, ScalerParams> scalers;  // metric name -> params

    bool operator==(const ScalerSet&) const = default;
};

constexpr double kDegenerateTol = 1e-12;

inline ScalerParams fit_minmax(std::span<const double> values, const std::string& metric_name) {
    if (values.empty()) raise(Errc::DegenerateRange, metric_name + ": no values to fit");
    double lo = values[0];
    double hi = values[0];
    for (const double v : values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (hi - lo < kDegenerateTol) {
        raise(Errc::DegenerateRange,
              metric_name + ": min-max range " + std::to_string(hi - lo) + " is degenerate");
    }
    return ScalerParams{metric_name, MinMaxParams{lo, hi}};
}

inline ScalerParams fit_zscore(std::span<const double> values, const std::string& metric_name) {
    if (values.empty()) raise(Errc::DegenerateRange, metric_name + ": no values to fit");
    const auto n = static_cast<double>(values.size());
    double sum = 0.0;
    for (const double v : values) sum += v;
    const double mu = sum / n;
    double ss = 0.0;
    for (const double v : values) ss += (v - mu) * (v - mu);
    const double sigma = std::sqrt(ss / n);
    if (sigma < kDegenerateTol) {
        raise(Errc::DegenerateRange,
              metric_name + ": standard deviation " + std::to_string(sigma) + " is degenerate");
    }
    return ScalerParams{metric_name, ZScoreParams{mu, sigma}};
}

// Applies a fitted scaler to one value. `clamp` restricts min-max output to
// [0,1]; it is ignored for z-score. Test-time values are not clamped by
// default so ranks survive out-of-range extrapolation.
inline double apply(const ScalerParams& scaler, double value, bool clamp = false) {
    if (const auto* mm = std::get_if<MinMaxParams>(&scaler.params)) {
        double out = (value - mm->min) / (mm->max - mm->min);
        if (clamp) out = std::clamp(out, 0.0, 1.0);
        return out;
    }
    const auto& z = std::get<ZScoreParams>(scaler.params);
    return (value - z.mu) / z.sigma;
}

// Fits one scaler per metric over all calibration videos pooled together.
inline ScalerSet fit_all(const Dataset& calibration, NormKind kind) {
    if (calibration.records.empty()) {
        raise(Errc::EmptyDataset, "cannot fit scalers on an empty calibration set");
    }
    ScalerSet set;
    set.kind = kind;
    set.calibration_dataset_id = calibration.id;
    for (const auto& name : calibration.metric_names()) {
        std::vector<double> values;
        values.reserve(calibration.records.size());
        for (const auto& record : calibration.records) values.push_back(record.metrics.at(name));
        set.scalers[name] =
            (kind == NormKind::MinMax) ? fit_minmax(values, name) : fit_zscore(values, name);
    }
    return set;
}

inline nlohmann::json to_json(const ScalerSet& set) {
    nlohmann::json scalers = nlohmann::json::object();
    for (const auto& [name, scaler] : set.scalers) {
        if (const auto* mm = std::get_if<MinMaxParams>(&scaler.params)) {
            scalers[name] = {{"min", mm->min}, {"max", mm->max}};
        } else {
            const auto& z = std::get<ZScoreParams>(scaler.params);
            scalers[name] = {{"mu", z.mu}, {"sigma", z.sigma}};
        }
    }
    return nlohmann::json{{"kind", norm_kind_name(set.kind)},
                          {"calibration_dataset_id", set.calibration_dataset_id},
                          {"scalers", scalers}};
}

inline ScalerSet scaler_set_from_json(const nlohmann::json& doc) {
    ScalerSet set;
    try {
        const std::string kind = doc.at("kind").get<std::string>();
        if (kind == "mm") {
            set.kind = NormKind::MinMax;
        } else if (kind == "z") {
            set.kind = NormKind::ZScore;
        } else {
            raise(Errc::InvalidConfig, "unknown scaler kind '" + kind + "'");
        }
        set.calibration_dataset_id = doc.at("calibration_dataset_id").get<std::string>();
        for (const auto& [name, params] : doc.at("scalers").items()) {
            ScalerParams scaler;
            scaler.metric_name = name;
            if (params.contains("min")) {
                scaler.params =
                    MinMaxParams{params.at("min").get<double>(), params.at("max").get<double>()};
            } else {
                scaler.params =
                    ZScoreParams{params.at("mu").get<double>(), params.at("sigma").get<double>()};
            }
            if (scaler.kind() != set.kind) {
                raise(Errc::InvalidConfig, "scaler '" + name + "' does not match set kind");
            }
            set.scalers[name] = std::move(scaler);
        }
    } catch (const nlohmann::json::exception& e) {
        raise(Errc::MalformedJson, std::string("scaler set: ") + e.what());
    }
    return set;
}

// Serialized form round-trips doubles exactly (shortest representation that
// parses back to the identical bits).
inline std::string serialize(const ScalerSet& set) {
    return to_json(set).dump(2) + "\n";
}

inline ScalerSet deserialize_scaler_set(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        raise(Errc::MalformedJson, std::string("scaler set: ") + e.what());
    }
    return scaler_set_from_json(doc);
}

}  // namespace metricfuse
