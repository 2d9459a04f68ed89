#pragma once

// File ingestion: parses metric-score and subjective-score files, joins them
// into a canonical Dataset, converting DMOS to MOS and aligning lower-better
// metrics (DISTS inversion) on the way in.
//
// Metric file:     dataset,scene,video,metric,value
// Subjective file: dataset,scene,video,kind,value,scale_min,scale_max
//
// Both are comma-separated UTF-8 with a required header; `#` lines are
// comments; numbers may use decimal or scientific notation.

#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "metricfuse/csv.hpp"
#include "metricfuse/dataset.hpp"
#include "metricfuse/error.hpp"

namespace metricfuse {

struct MetricRow {
    std::string dataset_id;
    std::string scene_id;
    std::string video_id;
    std::string metric;  // lowercase
    double value = 0.0;

    bool operator==(const MetricRow&) const = default;
};

struct SubjectiveRow {
    std::string dataset_id;
    std::string scene_id;
    std::string video_id;
    SubjectiveScore score;

    bool operator==(const SubjectiveRow&) const = default;
};

enum class MissingPolicy { DropScene, Strict };

struct IngestOptions {
    DmosRule dmos_rule;
    // Metrics whose raw scores mean "lower is better". "dists" is mapped to
    // 1 - x (guarded to [0,1]); any other listed metric is negated, which
    // preserves ranks and flips correlation signs.
    std::vector<std::string> invert_lower_better = {"dists", "lpips"};
};

struct DroppedScene {
    std::string scene_id;
    std::string reason;

    bool operator==(const DroppedScene&) const = default;
};

struct AssembleResult {
    Dataset dataset;
    std::vector<DroppedScene> dropped;
};

namespace detail {

inline std::ifstream open_or_raise(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(Errc::IoError, "cannot open file: " + path);
    return in;
}

}  // namespace detail

inline std::vector<MetricRow> load_metrics(std::istream& in) {
    const auto lines = csv::read_lines(in);
    if (lines.empty()) raise(Errc::MissingColumn, "metric file: missing header");
    csv::expect_header(lines.front(), {"dataset", "scene", "video", "metric", "value"},
                       "metric file");
    if (lines.size() == 1) raise(Errc::EmptyFile, "metric file: no data rows");

    std::vector<MetricRow> rows;
    std::set<std::tuple<std::string, std::string, std::string, std::string>> seen;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto& line = lines[i];
        const auto fields = csv::split_fields(line.text);
        if (fields.size() != 5) {
            raise(Errc::MissingColumn, "metric file line " + std::to_string(line.number) +
                                           ": expected 5 fields, found " +
                                           std::to_string(fields.size()));
        }
        MetricRow row;
        row.dataset_id = fields[0];
        row.scene_id = fields[1];
        row.video_id = fields[2];
        row.metric = csv::to_lower(fields[3]);
        row.value = csv::parse_double(fields[4], line.number);
        if (!seen.insert({row.dataset_id, row.scene_id, row.video_id, row.metric}).second) {
            raise(Errc::DuplicateRow, "metric file line " + std::to_string(line.number) +
                                          ": duplicate entry for (" + row.dataset_id + "," +
                                          row.scene_id + "," + row.video_id + "," + row.metric +
                                          ")");
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

inline std::vector<MetricRow> load_metrics(const std::string& path) {
    auto in = detail::open_or_raise(path);
    return load_metrics(in);
}

inline std::vector<SubjectiveRow> load_subjective(std::istream& in) {
    const auto lines = csv::read_lines(in);
    if (lines.empty()) raise(Errc::MissingColumn, "subjective file: missing header");
    csv::expect_header(
        lines.front(), {"dataset", "scene", "video", "kind", "value", "scale_min", "scale_max"},
        "subjective file");
    if (lines.size() == 1) raise(Errc::EmptyFile, "subjective file: no data rows");

    std::vector<SubjectiveRow> rows;
    std::set<std::tuple<std::string, std::string, std::string>> seen;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto& line = lines[i];
        const auto fields = csv::split_fields(line.text);
        if (fields.size() != 7) {
            raise(Errc::MissingColumn, "subjective file line " + std::to_string(line.number) +
                                           ": expected 7 fields, found " +
                                           std::to_string(fields.size()));
        }
        SubjectiveRow row;
        row.dataset_id = fields[0];
        row.scene_id = fields[1];
        row.video_id = fields[2];
        const std::string kind = csv::to_lower(fields[3]);
        if (kind == "mos") {
            row.score.kind = ScoreKind::Mos;
        } else if (kind == "dmos") {
            row.score.kind = ScoreKind::Dmos;
        } else {
            raise(Errc::UnknownKind, "subjective file line " + std::to_string(line.number) +
                                         ": unknown kind '" + fields[3] + "'");
        }
        row.score.value = csv::parse_double(fields[4], line.number);
        row.score.scale_min = csv::parse_double(fields[5], line.number);
        row.score.scale_max = csv::parse_double(fields[6], line.number);
        if (!(row.score.scale_min < row.score.scale_max)) {
            raise(Errc::ScaleBoundsInvalid, "subjective file line " + std::to_string(line.number) +
                                                ": scale_min >= scale_max");
        }
        if (row.score.kind == ScoreKind::Mos &&
            (row.score.value < row.score.scale_min || row.score.value > row.score.scale_max)) {
            raise(Errc::OutOfRange, "subjective file line " + std::to_string(line.number) +
                                        ": MOS value outside scale bounds");
        }
        if (!seen.insert({row.dataset_id, row.scene_id, row.video_id}).second) {
            raise(Errc::DuplicateRow, "subjective file line " + std::to_string(line.number) +
                                          ": duplicate entry for (" + row.dataset_id + "," +
                                          row.scene_id + "," + row.video_id + ")");
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

inline std::vector<SubjectiveRow> load_subjective(const std::string& path) {
    auto in = detail::open_or_raise(path);
    return load_subjective(in);
}

// Joins metric and subjective rows on (dataset, scene, video) into a Dataset
// with canonical (scene_id, video_id) record order. DMOS scores are converted
// to MOS and lower-better metrics are inverted here, before any normalization.
// Under DropScene, scenes with any missing metric or subjective score are
// removed whole and reported; under Strict they are errors.
inline AssembleResult assemble(const std::vector<MetricRow>& metrics,
                               const std::vector<SubjectiveRow>& subjective,
                               MissingPolicy policy = MissingPolicy::DropScene,
                               const IngestOptions& options = {}) {
    if (metrics.empty()) raise(Errc::EmptyDataset, "no metric rows to assemble");
    if (subjective.empty()) raise(Errc::EmptyDataset, "no subjective rows to assemble");

    const std::string& dataset_id = metrics.front().dataset_id;
    for (const auto& row : metrics) {
        if (row.dataset_id != dataset_id) {
            raise(Errc::DatasetMismatch, "metric rows mix dataset ids '" + dataset_id +
                                             "' and '" + row.dataset_id + "'");
        }
    }
    for (const auto& row : subjective) {
        if (row.dataset_id != dataset_id) {
            raise(Errc::DatasetMismatch, "subjective rows carry dataset id '" + row.dataset_id +
                                             "', metric rows '" + dataset_id + "'");
        }
    }

    using VideoKey = std::pair<std::string, std::string>;  // (scene, video)

    std::map<VideoKey, std::map<std::string, double>> metric_by_video;
    std::set<std::string> metric_names;
    for (const auto& row : metrics) {
        metric_by_video[{row.scene_id, row.video_id}][row.metric] = row.value;
        metric_names.insert(row.metric);
    }
    std::map<VideoKey, SubjectiveScore> subjective_by_video;
    for (const auto& row : subjective) {
        subjective_by_video[{row.scene_id, row.video_id}] = row.score;
    }

    const auto lower_better = [&](const std::string& name) {
        for (const auto& m : options.invert_lower_better) {
            if (m == name) return true;
        }
        return false;
    };

    // First pass: find scenes that must be dropped (or raise under Strict).
    std::map<std::string, std::string> drop_reason;  // scene -> first reason
    const auto mark = [&](const std::string& scene, const std::string& reason, Errc strict_code) {
        if (policy == MissingPolicy::Strict) raise(strict_code, reason);
        drop_reason.emplace(scene, reason);
    };
    for (const auto& [key, video_metrics] : metric_by_video) {
        if (!subjective_by_video.count(key)) {
            mark(key.first,
                 "video " + key.first + "/" + key.second + " has metrics but no subjective score",
                 Errc::JoinMismatch);
            continue;
        }
        if (video_metrics.size() != metric_names.size()) {
            for (const auto& name : metric_names) {
                if (!video_metrics.count(name)) {
                    mark(key.first, "video " + key.first + "/" + key.second +
                                        " is missing metric '" + name + "'",
                         Errc::InconsistentMetricSet);
                    break;
                }
            }
        }
    }
    for (const auto& [key, score] : subjective_by_video) {
        if (!metric_by_video.count(key)) {
            mark(key.first,
                 "video " + key.first + "/" + key.second + " has a subjective score but no metrics",
                 Errc::JoinMismatch);
        }
    }

    AssembleResult result;
    result.dataset.id = dataset_id;
    for (const auto& [scene, reason] : drop_reason) {
        result.dropped.push_back({scene, reason});
    }

    for (const auto& [key, video_metrics] : metric_by_video) {
        if (drop_reason.count(key.first)) continue;
        VideoRecord record;
        record.dataset_id = dataset_id;
        record.scene_id = key.first;
        record.video_id = key.second;
        for (const auto& [name, value] : video_metrics) {
            double adjusted = value;
            if (lower_better(name)) {
                adjusted = (name == "dists") ? invert_dists(value) : -value;
            }
            record.metrics[name] = adjusted;
        }
        record.subjective = to_mos(subjective_by_video.at(key), options.dmos_rule);
        result.dataset.records.push_back(std::move(record));
    }

    if (result.dataset.records.empty()) {
        raise(Errc::EmptyDataset, "all scenes were dropped during assembly");
    }

    // metric_by_video iterates in (scene, video) order already, so records are
    // canonically sorted; derive the scene list from that order.
    for (const auto& record : result.dataset.records) {
        if (result.dataset.scenes.empty() || result.dataset.scenes.back() != record.scene_id) {
            result.dataset.scenes.push_back(record.scene_id);
        }
    }
    return result;
}

}  // namespace metricfuse
