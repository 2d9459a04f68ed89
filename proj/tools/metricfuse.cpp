// metricfuse command-line tool: run the evaluation pipeline, generate
// synthetic fixtures, import VMAF logs, and validate input files.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "metricfuse/metricfuse.hpp"

namespace fs = std::filesystem;
using namespace metricfuse;

namespace {

// Reports land in place only after every format rendered: write to a temp
// name in the same directory, then rename.
void write_file_atomic(const fs::path& target, const std::string& content) {
    const fs::path tmp = target.parent_path() / (target.filename().string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) raise(Errc::IoError, "cannot write " + tmp.string());
        out << content;
        if (!out) raise(Errc::IoError, "short write to " + tmp.string());
    }
    fs::rename(tmp, target);
}

int cmd_run(const std::string& config_path, const std::string& out_dir, bool has_seed,
            std::uint64_t seed, int threads, bool clamp) {
    RunConfig config = load_run_config(config_path);
    if (has_seed) config.seed = seed;
    if (threads > 0) config.threads = threads;
    if (clamp) config.clamp = true;

    const auto progress = [](int index, int total, const std::string& label) {
        std::cerr << "[" << index << "/" << total << "] " << label << "\n";
    };
    const RunResult result = run_from_files(config, progress);
    for (const auto& dropped : result.dropped_calibration) {
        std::cerr << "dropped scene " << dropped.scene_id << ": " << dropped.reason << "\n";
    }

    const auto rows = build_rows(result);
    const std::string md = render_markdown(rows);
    const std::string csv_text = render_csv(rows);
    const std::string json_text = render_json(rows);
    const std::string svg = render_errorbar_svg(result.summaries);

    fs::create_directories(out_dir);
    write_file_atomic(fs::path(out_dir) / "report.md", md);
    write_file_atomic(fs::path(out_dir) / "report.csv", csv_text);
    write_file_atomic(fs::path(out_dir) / "report.json", json_text);
    write_file_atomic(fs::path(out_dir) / "report.svg", svg);
    return 0;
}

int cmd_generate_synthetic(const SyntheticSpec& spec, const std::string& out_dir) {
    const SyntheticData data = generate_synthetic(spec);
    fs::create_directories(out_dir);
    write_file_atomic(fs::path(out_dir) / "metrics.csv", data.metrics_csv);
    write_file_atomic(fs::path(out_dir) / "subjective.csv", data.subjective_csv);
    return 0;
}

int cmd_import_vmaf(const std::string& dataset_id, const std::string& scene_map_path,
                    const std::string& out_path, const std::vector<std::string>& log_paths) {
    const auto scene_of = load_scene_map(scene_map_path);
    std::vector<std::pair<std::string, VmafLog>> logs;
    for (const auto& path : log_paths) {
        logs.emplace_back(fs::path(path).stem().string(), parse_vmaf_log(path));
    }
    const auto rows = emit_metric_rows(logs, dataset_id, scene_of);
    const std::string text = metric_rows_to_csv(rows);
    if (out_path.empty()) {
        std::cout << text;
    } else {
        write_file_atomic(out_path, text);
    }
    return 0;
}

int cmd_validate(const std::string& metrics_path, const std::string& subjective_path) {
    const auto metrics = load_metrics(metrics_path);
    const auto subjective = load_subjective(subjective_path);
    const auto result = assemble(metrics, subjective, MissingPolicy::DropScene);
    std::cout << "dataset: " << result.dataset.id << "\n"
              << "scenes: " << result.dataset.scenes.size() << "\n"
              << "videos: " << result.dataset.records.size() << "\n";
    std::cout << "metrics:";
    for (const auto& name : result.dataset.metric_names()) std::cout << " " << name;
    std::cout << "\n";
    if (result.dropped.empty()) {
        std::cout << "dropped scenes: none\n";
    } else {
        std::cout << "dropped scenes: " << result.dropped.size() << "\n";
        for (const auto& dropped : result.dropped) {
            std::cout << "  " << dropped.scene_id << ": " << dropped.reason << "\n";
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fuse full-reference quality metrics and benchmark them against "
                 "subjective scores with scene-level bootstrap confidence intervals"};
    app.require_subcommand(1);

    // run
    auto* run_cmd = app.add_subcommand("run", "Execute a configured evaluation run");
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed_override = 0;
    int threads = 0;
    bool clamp = false;
    run_cmd->add_option("--config", config_path, "Run configuration (JSON)")->required();
    run_cmd->add_option("--out", out_dir, "Output directory for reports")->required();
    auto* seed_opt = run_cmd->add_option("--seed", seed_override, "Override the split seed");
    run_cmd->add_option("--threads", threads, "Worker threads (default: machine parallelism)");
    run_cmd->add_flag("--clamp", clamp, "Clamp min-max normalized values into [0,1]");

    // generate-synthetic
    auto* gen_cmd = app.add_subcommand("generate-synthetic", "Write a synthetic dataset fixture");
    SyntheticSpec spec;
    std::string model_name = "avg-driven";
    std::string gen_out;
    gen_cmd->add_option("--scenes", spec.n_scenes, "Number of scenes")->required();
    gen_cmd->add_option("--videos", spec.videos_per_scene, "Videos per scene")->required();
    gen_cmd->add_option("--noise", spec.noise_sigma, "Noise level (0 = deterministic)")
        ->required();
    gen_cmd->add_option("--model", model_name, "MOS driver: avg-driven|vmaf-driven|dists-driven");
    gen_cmd->add_option("--seed", spec.seed, "Generator seed")->required();
    gen_cmd->add_option("--dataset", spec.dataset_id, "Dataset id (default SYN)");
    gen_cmd->add_option("--out", gen_out, "Output directory")->required();

    // import-vmaf
    auto* import_cmd = app.add_subcommand("import-vmaf", "Convert VMAF JSON logs to metric rows");
    std::string dataset_id;
    std::string scene_map_path;
    std::string import_out;
    std::vector<std::string> log_paths;
    import_cmd->add_option("--dataset", dataset_id, "Dataset id")->required();
    import_cmd->add_option("--scene-map", scene_map_path, "video,scene mapping file")->required();
    import_cmd->add_option("--out", import_out, "Write rows to file instead of stdout");
    import_cmd->add_option("logs", log_paths, "VMAF JSON logs")->required();

    // validate
    auto* validate_cmd = app.add_subcommand("validate", "Dry-run ingestion and report dataset shape");
    std::string metrics_path;
    std::string subjective_path;
    validate_cmd->add_option("--metrics", metrics_path, "Metric file")->required();
    validate_cmd->add_option("--subjective", subjective_path, "Subjective file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            return cmd_run(config_path, out_dir, seed_opt->count() > 0, seed_override, threads,
                           clamp);
        }
        if (gen_cmd->parsed()) {
            spec.mos_model = mos_model_from_string(model_name);
            return cmd_generate_synthetic(spec, gen_out);
        }
        if (import_cmd->parsed()) {
            return cmd_import_vmaf(dataset_id, scene_map_path, import_out, log_paths);
        }
        if (validate_cmd->parsed()) {
            return cmd_validate(metrics_path, subjective_path);
        }
    } catch (const Error& e) {
        std::cerr << "metricfuse: error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "metricfuse: error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
