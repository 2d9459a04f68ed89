#pragma once

// Rendering of correlation summaries: markdown and comma-separated tables
// (fixed 3-decimal cells), a faithful JSON form, and an error-bar SVG chart.
// Every renderer is a pure function of its input; identical input yields
// byte-identical output.

#include <cfenv>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "metricfuse/bootstrap.hpp"
#include "metricfuse/error.hpp"
#include "metricfuse/pipeline.hpp"

namespace metricfuse {

enum class ReportFormat { Markdown, Csv, Json, Svg };

struct ReportRow {
    std::string config;
    int calib_videos = 0;
    int calib_scenes = 0;
    int test_videos = 0;
    int test_scenes = 0;
    std::string label;
    double rp_mean = 0.0;
    double rp_lo = 0.0;
    double rp_hi = 0.0;
    double rs_mean = 0.0;
    double rs_lo = 0.0;
    double rs_hi = 0.0;
    int n_effective = 0;
    int n_skipped = 0;

    bool operator==(const ReportRow&) const = default;
};

inline std::vector<ReportRow> build_rows(const RunResult& run) {
    std::vector<ReportRow> rows;
    for (const auto& s : run.summaries) {
        ReportRow row;
        row.config = run.config_label;
        row.calib_videos = run.counts.calibration_videos;
        row.calib_scenes = run.counts.calibration_scenes;
        row.test_videos = run.counts.test_videos;
        row.test_scenes = run.counts.test_scenes;
        row.label = s.label;
        row.rp_mean = s.r_p_mean;
        row.rp_lo = s.r_p_ci.low;
        row.rp_hi = s.r_p_ci.high;
        row.rs_mean = s.r_s_mean;
        row.rs_lo = s.r_s_ci.low;
        row.rs_hi = s.r_s_ci.high;
        row.n_effective = s.n_effective;
        row.n_skipped = s.n_skipped;
        rows.push_back(std::move(row));
    }
    return rows;
}

// Fixed 3-decimal cell with round-half-to-even, so golden files do not wobble
// on exact .0005 ties.
inline std::string format_fixed3(double value) {
    const double rounded = std::nearbyint(value * 1000.0);
    const auto n = static_cast<long long>(rounded);
    const bool negative = n < 0;
    const unsigned long long magnitude = negative ? static_cast<unsigned long long>(-n)
                                                  : static_cast<unsigned long long>(n);
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%s%llu.%03llu", negative ? "-" : "", magnitude / 1000,
                  magnitude % 1000);
    return buf;
}

namespace detail {

// Per config group, the indexes holding the maximum rp/rs mean (bolded in
// markdown, like the best-per-column convention in results tables).
struct GroupBest {
    double rp_max;
    double rs_max;
};

inline std::map<std::string, GroupBest> group_best(const std::vector<ReportRow>& rows) {
    std::map<std::string, GroupBest> best;
    for (const auto& row : rows) {
        auto [it, inserted] = best.try_emplace(row.config, GroupBest{row.rp_mean, row.rs_mean});
        if (!inserted) {
            it->second.rp_max = std::max(it->second.rp_max, row.rp_mean);
            it->second.rs_max = std::max(it->second.rs_max, row.rs_mean);
        }
    }
    return best;
}

}  // namespace detail

inline std::string render_markdown(const std::vector<ReportRow>& rows) {
    if (rows.empty()) raise(Errc::EmptyReport, "no rows to render");
    const auto best = detail::group_best(rows);
    std::string out;
    out += "| Dataset | #Samples(C/T) | Fusion | r_p mean | r_s mean |\n";
    out += "|---|---|---|---|---|\n";
    std::string previous_config;
    for (const auto& row : rows) {
        const bool first_of_group = row.config != previous_config;
        previous_config = row.config;
        const auto& group = best.at(row.config);
        const std::string rp = format_fixed3(row.rp_mean);
        const std::string rs = format_fixed3(row.rs_mean);
        out += "| " + (first_of_group ? row.config : std::string()) + " | " +
               (first_of_group ? std::to_string(row.calib_videos) + " / " +
                                     std::to_string(row.test_videos)
                               : std::string()) +
               " | " + row.label + " | " + (row.rp_mean == group.rp_max ? "**" + rp + "**" : rp) +
               " | " + (row.rs_mean == group.rs_max ? "**" + rs + "**" : rs) + " |\n";
    }
    return out;
}

inline std::string render_csv(const std::vector<ReportRow>& rows) {
    if (rows.empty()) raise(Errc::EmptyReport, "no rows to render");
    std::string out =
        "config,calib_videos,calib_scenes,test_videos,test_scenes,label,"
        "rp_mean,rp_lo,rp_hi,rs_mean,rs_lo,rs_hi,n_effective,n_skipped\n";
    for (const auto& row : rows) {
        out += row.config + ',' + std::to_string(row.calib_videos) + ',' +
               std::to_string(row.calib_scenes) + ',' + std::to_string(row.test_videos) + ',' +
               std::to_string(row.test_scenes) + ',' + row.label + ',' +
               format_fixed3(row.rp_mean) + ',' + format_fixed3(row.rp_lo) + ',' +
               format_fixed3(row.rp_hi) + ',' + format_fixed3(row.rs_mean) + ',' +
               format_fixed3(row.rs_lo) + ',' + format_fixed3(row.rs_hi) + ',' +
               std::to_string(row.n_effective) + ',' + std::to_string(row.n_skipped) + '\n';
    }
    return out;
}

// JSON keeps full numeric fidelity; parsing it back reproduces the rows
// bit-exactly (table formats above are lossy by design).
inline std::string render_json(const std::vector<ReportRow>& rows) {
    if (rows.empty()) raise(Errc::EmptyReport, "no rows to render");
    nlohmann::json out;
    out["rows"] = nlohmann::json::array();
    for (const auto& row : rows) {
        out["rows"].push_back({{"config", row.config},
                               {"calib_videos", row.calib_videos},
                               {"calib_scenes", row.calib_scenes},
                               {"test_videos", row.test_videos},
                               {"test_scenes", row.test_scenes},
                               {"label", row.label},
                               {"rp_mean", row.rp_mean},
                               {"rp_lo", row.rp_lo},
                               {"rp_hi", row.rp_hi},
                               {"rs_mean", row.rs_mean},
                               {"rs_lo", row.rs_lo},
                               {"rs_hi", row.rs_hi},
                               {"n_effective", row.n_effective},
                               {"n_skipped", row.n_skipped}});
    }
    return out.dump(2) + "\n";
}

inline std::vector<ReportRow> parse_report_json(const std::string& text) {
    std::vector<ReportRow> rows;
    try {
        const auto doc = nlohmann::json::parse(text);
        for (const auto& node : doc.at("rows")) {
            ReportRow row;
            row.config = node.at("config").get<std::string>();
            row.calib_videos = node.at("calib_videos").get<int>();
            row.calib_scenes = node.at("calib_scenes").get<int>();
            row.test_videos = node.at("test_videos").get<int>();
            row.test_scenes = node.at("test_scenes").get<int>();
            row.label = node.at("label").get<std::string>();
            row.rp_mean = node.at("rp_mean").get<double>();
            row.rp_lo = node.at("rp_lo").get<double>();
            row.rp_hi = node.at("rp_hi").get<double>();
            row.rs_mean = node.at("rs_mean").get<double>();
            row.rs_lo = node.at("rs_lo").get<double>();
            row.rs_hi = node.at("rs_hi").get<double>();
            row.n_effective = node.at("n_effective").get<int>();
            row.n_skipped = node.at("n_skipped").get<int>();
            rows.push_back(std::move(row));
        }
    } catch (const nlohmann::json::exception& e) {
        raise(Errc::MalformedJson, std::string("report json: ") + e.what());
    }
    return rows;
}

inline std::string render_table(const std::vector<ReportRow>& rows, ReportFormat format) {
    switch (format) {
    case ReportFormat::Markdown: return render_markdown(rows);
    case ReportFormat::Csv:      return render_csv(rows);
    case ReportFormat::Json:     return render_json(rows);
    case ReportFormat::Svg:      break;
    }
    raise(Errc::UnsupportedFormat, "render_table handles markdown/csv/json only");
}

inline std::string render_table(const RunResult& run, ReportFormat format) {
    return render_table(build_rows(run), format);
}

// --- error-bar chart ---------------------------------------------------------

namespace detail {

inline std::string px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

}  // namespace detail

// One group per label with an r_p and an r_s bar; whiskers span the CI.
// Y axis is fixed to [-1, 1]. Output bytes are deterministic.
inline std::string render_errorbar_svg(const std::vector<CorrelationSummary>& summaries) {
    if (summaries.empty()) raise(Errc::EmptyReport, "no summaries to render");
    using detail::px;

    constexpr double kMarginLeft = 64.0;
    constexpr double kMarginRight = 24.0;
    constexpr double kMarginTop = 40.0;
    constexpr double kMarginBottom = 56.0;
    constexpr double kGroupWidth = 110.0;
    constexpr double kBarWidth = 36.0;
    constexpr double kBarGap = 10.0;
    constexpr double kPlotHeight = 360.0;

    const auto n = summaries.size();
    const double plot_width = kGroupWidth * static_cast<double>(n);
    const double width = kMarginLeft + plot_width + kMarginRight;
    const double height = kMarginTop + kPlotHeight + kMarginBottom;
    const auto y_of = [&](double v) { return kMarginTop + (1.0 - v) / 2.0 * kPlotHeight; };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + px(width) + "\" height=\"" +
           px(height) + "\" viewBox=\"0 0 " + px(width) + " " + px(height) + "\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"" + px(width) + "\" height=\"" + px(height) +
           "\" fill=\"white\"/>\n";

    // y axis with ticks every 0.5
    svg += "<line x1=\"" + px(kMarginLeft) + "\" y1=\"" + px(y_of(1.0)) + "\" x2=\"" +
           px(kMarginLeft) + "\" y2=\"" + px(y_of(-1.0)) + "\" stroke=\"black\"/>\n";
    for (int tick = -2; tick <= 2; ++tick) {
        const double v = 0.5 * tick;
        svg += "<line x1=\"" + px(kMarginLeft - 5.0) + "\" y1=\"" + px(y_of(v)) + "\" x2=\"" +
               px(kMarginLeft) + "\" y2=\"" + px(y_of(v)) + "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + px(kMarginLeft - 9.0) + "\" y=\"" + px(y_of(v) + 4.0) +
               "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\">" +
               format_fixed3(v).substr(0, format_fixed3(v).size() - 2) + "</text>\n";
    }
    // zero baseline across the plot
    svg += "<line x1=\"" + px(kMarginLeft) + "\" y1=\"" + px(y_of(0.0)) + "\" x2=\"" +
           px(kMarginLeft + plot_width) + "\" y2=\"" + px(y_of(0.0)) +
           "\" stroke=\"#999999\" stroke-dasharray=\"4 3\"/>\n";

    const char* kColors[2] = {"#4878a8", "#e49444"};
    for (std::size_t i = 0; i < n; ++i) {
        const auto& s = summaries[i];
        const double group_x = kMarginLeft + kGroupWidth * static_cast<double>(i);
        const double pair_width = 2.0 * kBarWidth + kBarGap;
        const double start = group_x + (kGroupWidth - pair_width) / 2.0;
        const double means[2] = {s.r_p_mean, s.r_s_mean};
        const Interval cis[2] = {s.r_p_ci, s.r_s_ci};
        for (int b = 0; b < 2; ++b) {
            const double x = start + b * (kBarWidth + kBarGap);
            const double top = std::max(means[b], 0.0);
            const double bottom = std::min(means[b], 0.0);
            svg += "<rect x=\"" + px(x) + "\" y=\"" + px(y_of(top)) + "\" width=\"" +
                   px(kBarWidth) + "\" height=\"" + px(y_of(bottom) - y_of(top)) + "\" fill=\"" +
                   kColors[b] + "\"/>\n";
            const double cx = x + kBarWidth / 2.0;
            svg += "<line x1=\"" + px(cx) + "\" y1=\"" + px(y_of(cis[b].low)) + "\" x2=\"" +
                   px(cx) + "\" y2=\"" + px(y_of(cis[b].high)) + "\" stroke=\"black\"/>\n";
            for (const double v : {cis[b].low, cis[b].high}) {
                svg += "<line x1=\"" + px(cx - 5.0) + "\" y1=\"" + px(y_of(v)) + "\" x2=\"" +
                       px(cx + 5.0) + "\" y2=\"" + px(y_of(v)) + "\" stroke=\"black\"/>\n";
            }
        }
        svg += "<text x=\"" + px(group_x + kGroupWidth / 2.0) + "\" y=\"" +
               px(kMarginTop + kPlotHeight + 20.0) +
               "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">" + s.label +
               "</text>\n";
    }

    // legend
    const double legend_x = kMarginLeft + 8.0;
    svg += "<rect x=\"" + px(legend_x) + "\" y=\"14\" width=\"12\" height=\"12\" fill=\"" +
           std::string(kColors[0]) + "\"/>\n";
    svg += "<text x=\"" + px(legend_x + 17.0) +
           "\" y=\"24\" font-family=\"sans-serif\" font-size=\"12\">r_p mean</text>\n";
    svg += "<rect x=\"" + px(legend_x + 90.0) + "\" y=\"14\" width=\"12\" height=\"12\" fill=\"" +
           std::string(kColors[1]) + "\"/>\n";
    svg += "<text x=\"" + px(legend_x + 107.0) +
           "\" y=\"24\" font-family=\"sans-serif\" font-size=\"12\">r_s mean</text>\n";
    svg += "</svg>\n";
    return svg;
}

}  // namespace metricfuse
