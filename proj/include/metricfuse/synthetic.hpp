#pragma once

// Synthetic fixture generator for end-to-end tests and demos. Every video has
// a latent quality q in [0,1]; each metric observes q through its own noisy
// view, and MOS is an affine map of the chosen driver (the view average, or a
// single metric's view) plus observation noise. All perturbations scale with
// noise_sigma, so at noise_sigma = 0 both metrics and MOS are strictly
// increasing in q and any monotone fusion of them correlates perfectly with
// MOS on any split.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <string>

#include "metricfuse/csv.hpp"
#include "metricfuse/error.hpp"
#include "metricfuse/rng.hpp"

namespace metricfuse {

enum class MosModel { AvgDriven, VmafDriven, DistsDriven };

inline MosModel mos_model_from_string(const std::string& name) {
    if (name == "avg-driven") return MosModel::AvgDriven;
    if (name == "vmaf-driven") return MosModel::VmafDriven;
    if (name == "dists-driven") return MosModel::DistsDriven;
    raise(Errc::InvalidSpec, "unknown mos model '" + name + "'");
}

struct SyntheticSpec {
    int n_scenes = 10;
    int videos_per_scene = 5;
    double noise_sigma = 0.0;
    MosModel mos_model = MosModel::AvgDriven;
    std::uint64_t seed = 0;
    std::string dataset_id = "SYN";
};

struct SyntheticData {
    std::string metrics_csv;
    std::string subjective_csv;
};

// Per-metric view noise is kViewNoiseFactor * noise_sigma (on the unit
// quality scale); MOS observation noise is noise_sigma itself (on the rating
// scale). The factor keeps metric disagreement the dominant effect, which the
// avg-driven / vmaf-driven contrast in the acceptance checks relies on.
constexpr double kViewNoiseFactor = 2.0;

constexpr double kMosScaleMin = 1.0;
constexpr double kMosScaleMax = 5.0;

inline SyntheticData generate_synthetic(const SyntheticSpec& spec) {
    if (spec.n_scenes < 2) raise(Errc::InvalidSpec, "n_scenes must be >= 2");
    if (spec.videos_per_scene < 2) raise(Errc::InvalidSpec, "videos_per_scene must be >= 2");
    if (spec.noise_sigma < 0.0) raise(Errc::InvalidSpec, "noise_sigma must be >= 0");

    SyntheticData out;
    out.metrics_csv = "dataset,scene,video,metric,value\n";
    out.subjective_csv = "dataset,scene,video,kind,value,scale_min,scale_max\n";

    rng::SplitMix64 gen(rng::derive_stream(spec.seed, 0));
    const auto clamp01 = [](double v) { return std::clamp(v, 0.0, 1.0); };
    const double view_sigma = kViewNoiseFactor * spec.noise_sigma;

    char scene_id[16];
    char video_id[32];
    for (int s = 0; s < spec.n_scenes; ++s) {
        std::snprintf(scene_id, sizeof(scene_id), "s%03d", s);
        for (int v = 0; v < spec.videos_per_scene; ++v) {
            std::snprintf(video_id, sizeof(video_id), "s%03d_v%03d", s, v);
            const double quality = gen.next_double();
            const double vmaf_view = clamp01(quality + view_sigma * gen.next_gaussian());
            const double dists_view = clamp01(quality + view_sigma * gen.next_gaussian());
            const double mos_noise = spec.noise_sigma * gen.next_gaussian();

            double driver = 0.0;
            switch (spec.mos_model) {
            case MosModel::AvgDriven:   driver = (vmaf_view + dists_view) / 2.0; break;
            case MosModel::VmafDriven:  driver = vmaf_view; break;
            case MosModel::DistsDriven: driver = dists_view; break;
            }

            const double vmaf_raw = 100.0 * vmaf_view;
            const double dists_raw = 1.0 - dists_view;  // lower is better
            const double mos =
                std::clamp(kMosScaleMin + (kMosScaleMax - kMosScaleMin) * driver + mos_noise,
                           kMosScaleMin, kMosScaleMax);

            const std::string prefix =
                spec.dataset_id + ',' + scene_id + ',' + video_id + ',';
            out.metrics_csv += prefix + "vmaf," + csv::format_double(vmaf_raw) + '\n';
            out.metrics_csv += prefix + "dists," + csv::format_double(dists_raw) + '\n';
            out.subjective_csv += prefix + "MOS," + csv::format_double(mos) + ',' +
                                  csv::format_double(kMosScaleMin) + ',' +
                                  csv::format_double(kMosScaleMax) + '\n';
        }
    }
    return out;
}

}  // namespace metricfuse
