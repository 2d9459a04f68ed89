#pragma once

// Scene-level bootstrap of correlation coefficients. Each replicate redraws
// |scenes| scenes with replacement (a scene drawn k times contributes its
// videos k times), recomputes Pearson and Spearman against MOS, and the
// replicate distribution yields means and percentile confidence intervals.
//
// Determinism contract: replicate i draws from a generator derived from
// (seed, i), and aggregation walks replicates in index order, so results are
// byte-identical for any thread count.

#include <algorithm>
#include <cstdint>
#include <exception>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "metricfuse/dataset.hpp"
#include "metricfuse/error.hpp"
#include "metricfuse/fusion.hpp"
#include "metricfuse/rng.hpp"
#include "metricfuse/stats.hpp"

namespace metricfuse {

enum class DegeneratePolicy { Skip, Error };

struct BootstrapConfig {
    int n_resamples = 1000;
    double confidence = 0.95;
    std::uint64_t seed = 0;
    DegeneratePolicy degenerate_policy = DegeneratePolicy::Skip;
};

struct Interval {
    double low = 0.0;
    double high = 0.0;

    bool operator==(const Interval&) const = default;
};

struct CorrelationSummary {
    std::string label;
    double r_p_mean = 0.0;
    double r_s_mean = 0.0;
    Interval r_p_ci;
    Interval r_s_ci;
    int n_effective = 0;
    int n_skipped = 0;

    bool operator==(const CorrelationSummary&) const = default;
};

// Test records arranged for resampling: scene draw order plus per-scene
// (video key, MOS) lists.
struct SceneView {
    std::vector<std::string> scenes;
    std::map<std::string, std::vector<std::pair<VideoKey, double>>> by_scene;

    static SceneView from(const Dataset& dataset) {
        SceneView view;
        view.scenes = dataset.scenes;
        for (const auto& record : dataset.records) {
            view.by_scene[record.scene_id].push_back(
                {{record.scene_id, record.video_id}, record.subjective.value});
        }
        return view;
    }
};

// Draws |scenes| scene ids uniformly with replacement. A pure function of
// (seed, replicate_index); execution order never matters.
inline std::vector<std::string> resample_scenes(std::span<const std::string> scenes,
                                                std::uint64_t replicate_index,
                                                std::uint64_t seed) {
    rng::SplitMix64 gen(rng::derive_stream(seed, replicate_index));
    std::vector<std::string> drawn;
    drawn.reserve(scenes.size());
    for (std::size_t i = 0; i < scenes.size(); ++i) {
        drawn.push_back(scenes[gen.next_below(scenes.size())]);
    }
    return drawn;
}

using ReplicateValue = std::optional<std::pair<double, double>>;  // (r_p, r_s); nullopt = skipped

// Concatenates the (objective, MOS) pairs of every video in every sampled
// scene, with multiplicity, and computes both correlations. A degenerate
// replicate yields nullopt under Skip and raises under Error; too few points
// is always an error (the test set itself is too small).
inline ReplicateValue replicate_correlation(const SceneView& view,
                                            const std::vector<std::string>& sampled,
                                            const ScoreMap& scores,
                                            DegeneratePolicy policy = DegeneratePolicy::Skip) {
    std::vector<double> objective;
    std::vector<double> subjective;
    for (const auto& scene : sampled) {
        const auto it = view.by_scene.find(scene);
        if (it == view.by_scene.end()) {
            raise(Errc::JoinMismatch, "sampled scene '" + scene + "' not in test view");
        }
        for (const auto& [key, mos] : it->second) {
            objective.push_back(scores.at(key));
            subjective.push_back(mos);
        }
    }
    try {
        const double r_p = pearson(objective, subjective);
        const double r_s = spearman(objective, subjective);
        return std::make_pair(r_p, r_s);
    } catch (const Error& e) {
        if (e.code() == Errc::DegenerateVariance && policy == DegeneratePolicy::Skip) {
            return std::nullopt;
        }
        throw;
    }
}

// Percentile with linear interpolation between order statistics (the
// convention where quantile q sits at position q * (m - 1) in sorted order).
inline double interpolated_quantile(const std::vector<double>& sorted, double q) {
    const std::size_t m = sorted.size();
    if (m == 1) return sorted[0];
    const double pos = q * static_cast<double>(m - 1);
    const auto lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= m) return sorted[m - 1];
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

inline CorrelationSummary summarize(const std::string& label,
                                    const std::vector<ReplicateValue>& replicates,
                                    const BootstrapConfig& config) {
    std::vector<double> rp;
    std::vector<double> rs;
    rp.reserve(replicates.size());
    rs.reserve(replicates.size());
    long double rp_sum = 0.0L;
    long double rs_sum = 0.0L;
    for (const auto& value : replicates) {
        if (!value) continue;
        rp.push_back(value->first);
        rs.push_back(value->second);
        rp_sum += value->first;
        rs_sum += value->second;
    }
    if (rp.empty()) {
        raise(Errc::AllReplicatesDegenerate,
              "label '" + label + "': every bootstrap replicate was degenerate");
    }

    CorrelationSummary summary;
    summary.label = label;
    summary.n_effective = static_cast<int>(rp.size());
    summary.n_skipped = static_cast<int>(replicates.size() - rp.size());
    summary.r_p_mean = static_cast<double>(rp_sum / static_cast<long double>(rp.size()));
    summary.r_s_mean = static_cast<double>(rs_sum / static_cast<long double>(rs.size()));

    std::sort(rp.begin(), rp.end());
    std::sort(rs.begin(), rs.end());
    const double q_lo = (1.0 - config.confidence) / 2.0;
    const double q_hi = 1.0 - q_lo;
    summary.r_p_ci = {interpolated_quantile(rp, q_lo), interpolated_quantile(rp, q_hi)};
    summary.r_s_ci = {interpolated_quantile(rs, q_lo), interpolated_quantile(rs, q_hi)};
    return summary;
}

// Runs the full bootstrap for one label. Replicates are split across
// `threads` workers; each stores its result by replicate index, and the first
// error (by replicate index) wins, so outcomes are thread-count independent.
inline CorrelationSummary bootstrap_label(const std::string& label, const SceneView& view,
                                          const ScoreMap& scores, const BootstrapConfig& config,
                                          int threads = 1) {
    if (config.n_resamples < 1) raise(Errc::InvalidConfig, "n_resamples must be >= 1");
    if (!(config.confidence > 0.0 && config.confidence < 1.0)) {
        raise(Errc::InvalidConfig, "confidence must lie in (0,1)");
    }
    if (view.scenes.empty()) raise(Errc::TooFewScenes, "test view has no scenes");

    const int n = config.n_resamples;
    std::vector<ReplicateValue> results(static_cast<std::size_t>(n));

    int workers = threads;
    if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
    workers = std::clamp(workers, 1, n);

    const auto run_block = [&](int begin, int end) {
        for (int i = begin; i < end; ++i) {
            const auto sampled =
                resample_scenes(view.scenes, static_cast<std::uint64_t>(i), config.seed);
            results[static_cast<std::size_t>(i)] =
                replicate_correlation(view, sampled, scores, config.degenerate_policy);
        }
    };

    if (workers == 1) {
        run_block(0, n);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
        std::vector<int> error_index(static_cast<std::size_t>(workers), n);
        const int chunk = (n + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            const int begin = w * chunk;
            const int end = std::min(n, begin + chunk);
            pool.emplace_back([&, w, begin, end] {
                for (int i = begin; i < end; ++i) {
                    try {
                        const auto sampled = resample_scenes(
                            view.scenes, static_cast<std::uint64_t>(i), config.seed);
                        results[static_cast<std::size_t>(i)] =
                            replicate_correlation(view, sampled, scores, config.degenerate_policy);
                    } catch (...) {
                        errors[static_cast<std::size_t>(w)] = std::current_exception();
                        error_index[static_cast<std::size_t>(w)] = i;
                        break;
                    }
                }
            });
        }
        for (auto& t : pool) t.join();
        int first = n;
        std::exception_ptr to_throw;
        for (int w = 0; w < workers; ++w) {
            if (errors[static_cast<std::size_t>(w)] && error_index[static_cast<std::size_t>(w)] < first) {
                first = error_index[static_cast<std::size_t>(w)];
                to_throw = errors[static_cast<std::size_t>(w)];
            }
        }
        if (to_throw) std::rethrow_exception(to_throw);
    }

    return summarize(label, results, config);
}

}  // namespace metricfuse
