#pragma once

// Adapter from per-video VMAF JSON logs (as written by the standard VMAF
// tools) to single pooled scores in the metric-file schema. Two layouts are
// accepted:
//   (a) {"frames": [{"metrics": {"vmaf": 80.0}}, ...]}
//   (b) {"pooled_metrics": {"vmaf": {"mean": 82.0}}}
// A log may carry both; the explicit pooled mean takes precedence.

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "metricfuse/csv.hpp"
#include "metricfuse/error.hpp"
#include "metricfuse/ingest.hpp"

namespace metricfuse {

struct VmafLog {
    std::vector<double> frames;
    std::optional<double> pooled_mean;
};

namespace detail {

inline double vmaf_score_or_raise(const nlohmann::json& node, const std::string& where) {
    if (!node.is_number()) {
        raise(Errc::NoVmafScoresFound, where + " is not a number");
    }
    const double value = node.get<double>();
    if (!std::isfinite(value) || value < 0.0 || value > 100.0) {
        raise(Errc::ScoreOutOfRange, where + " = " + std::to_string(value) + " outside [0,100]");
    }
    return value;
}

}  // namespace detail

inline VmafLog parse_vmaf_log(std::istream& in, const std::string& name = "<stream>") {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        raise(Errc::MalformedJson, name + ": " + e.what());
    }

    VmafLog log;
    if (doc.is_object() && doc.contains("frames") && doc["frames"].is_array()) {
        std::size_t index = 0;
        for (const auto& frame : doc["frames"]) {
            const std::string where = name + ": frames[" + std::to_string(index) + "].metrics.vmaf";
            if (!frame.is_object() || !frame.contains("metrics") ||
                !frame["metrics"].is_object() || !frame["metrics"].contains("vmaf")) {
                raise(Errc::NoVmafScoresFound, where + " is missing");
            }
            log.frames.push_back(detail::vmaf_score_or_raise(frame["metrics"]["vmaf"], where));
            ++index;
        }
    }
    if (doc.is_object() && doc.contains("pooled_metrics") && doc["pooled_metrics"].is_object()) {
        const auto& pooled = doc["pooled_metrics"];
        if (pooled.contains("vmaf") && pooled["vmaf"].is_object() &&
            pooled["vmaf"].contains("mean")) {
            log.pooled_mean =
                detail::vmaf_score_or_raise(pooled["vmaf"]["mean"], name + ": pooled_metrics.vmaf.mean");
        }
    }
    if (log.frames.empty() && !log.pooled_mean) {
        raise(Errc::NoVmafScoresFound, name + ": no per-frame or pooled VMAF scores");
    }
    return log;
}

inline VmafLog parse_vmaf_log(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(Errc::IoError, "cannot open file: " + path);
    return parse_vmaf_log(in, path);
}

// Pools a log to one per-video score: the explicit pooled mean when present,
// otherwise the arithmetic mean of the frame scores.
inline double pool(const VmafLog& log) {
    if (log.pooled_mean) return *log.pooled_mean;
    double sum = 0.0;
    for (const double frame : log.frames) sum += frame;
    return sum / static_cast<double>(log.frames.size());
}

// Emits one metric row per video in input order, metric name "vmaf".
inline std::vector<MetricRow> emit_metric_rows(
    const std::vector<std::pair<std::string, VmafLog>>& logs, const std::string& dataset_id,
    const std::map<std::string, std::string>& scene_of) {
    std::vector<MetricRow> rows;
    for (const auto& [video_id, log] : logs) {
        const auto scene = scene_of.find(video_id);
        if (scene == scene_of.end()) {
            raise(Errc::MissingSceneMapping, "no scene mapping for video '" + video_id + "'");
        }
        rows.push_back({dataset_id, scene->second, video_id, "vmaf", pool(log)});
    }
    return rows;
}

// Scene map file: `video,scene` with the usual header/comment rules.
inline std::map<std::string, std::string> load_scene_map(std::istream& in) {
    const auto lines = csv::read_lines(in);
    if (lines.empty()) raise(Errc::MissingColumn, "scene map: missing header");
    csv::expect_header(lines.front(), {"video", "scene"}, "scene map");
    std::map<std::string, std::string> scene_of;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = csv::split_fields(lines[i].text);
        if (fields.size() != 2) {
            raise(Errc::MissingColumn, "scene map line " + std::to_string(lines[i].number) +
                                           ": expected 2 fields");
        }
        scene_of[fields[0]] = fields[1];
    }
    return scene_of;
}

inline std::map<std::string, std::string> load_scene_map(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(Errc::IoError, "cannot open file: " + path);
    return load_scene_map(in);
}

inline std::string metric_rows_to_csv(const std::vector<MetricRow>& rows) {
    std::string out = "dataset,scene,video,metric,value\n";
    for (const auto& row : rows) {
        out += row.dataset_id + ',' + row.scene_id + ',' + row.video_id + ',' + row.metric + ',' +
               csv::format_double(row.value) + '\n';
    }
    return out;
}

}  // namespace metricfuse
