#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pedscan/errors.hpp"
#include "pedscan/hog.hpp"
#include "pedscan/pipeline.hpp"

namespace fs = std::filesystem;
using namespace pedscan;

namespace {

std::size_t resolve_workers(std::size_t flag_value, bool flag_given) {
    if (flag_given) return flag_value == 0 ? 1 : flag_value;
    if (const char* env = std::getenv("PEDSCAN_WORKERS")) {
        const long n = std::strtol(env, nullptr, 10);
        if (n >= 1) return static_cast<std::size_t>(n);
    }
    return ExecConfig::hardware_workers();
}

std::vector<fs::path> collect_inputs(const std::string& input) {
    std::vector<fs::path> paths;
    if (fs::is_directory(input)) {
        for (const auto& entry : fs::directory_iterator(input))
            if (entry.is_regular_file() && entry.path().extension() == ".pgm")
                paths.push_back(entry.path());
        std::sort(paths.begin(), paths.end());
    } else {
        paths.emplace_back(input);
    }
    if (paths.empty()) throw IoError(input + ": no .pgm files found");
    return paths;
}

// Deterministic stand-in model for benchmark runs without a trained model.
SvmModel synthetic_model(Variant variant, LbpBinning binning) {
    SvmModel model;
    model.streams = model_layout(variant, binning);
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> dist(-0.01, 0.01);
    for (auto& stream : model.streams)
        for (auto& w : stream.weights) w = dist(rng);
    model.bias = 0.0;
    model.threshold = 1e9;  // benchmark only; suppress detections
    return model;
}

int run_detect(const std::string& input, const std::string& model_path,
               const std::string& variant_name_, double scale_step,
               const double* threshold_override, double nms_iou, std::size_t workers,
               const std::string& output) {
    PipelineConfig config;
    config.variant = parse_variant(variant_name_);
    config.scale_step = scale_step;
    config.nms_overlap = nms_iou;
    config.exec.workers = workers;

    SvmModel model = load_model(model_path);
    if (threshold_override) model.threshold = *threshold_override;

    std::ofstream file;
    std::ostream* out = &std::cout;
    if (!output.empty()) {
        file.open(output);
        if (!file) throw IoError(output + ": cannot open file for writing");
        out = &file;
    }
    for (const auto& path : collect_inputs(input)) {
        const GrayImage image = load_pgm(path.string());
        for (const auto& d : detect(image, model, config)) *out << detection_to_json(d) << '\n';
    }
    return 0;
}

int run_bench(const std::string& input, const std::string& model_path,
              const std::string& variant_name_, std::size_t reps, std::size_t workers,
              bool compare_schemes, const std::string& csv_path) {
    PipelineConfig config;
    config.variant = parse_variant(variant_name_);
    config.exec.workers = workers;

    const SvmModel model = model_path.empty() ? synthetic_model(config.variant, config.lbp_binning)
                                              : load_model(model_path);

    std::string csv;
    for (const auto& path : collect_inputs(input)) {
        const GrayImage image = load_pgm(path.string());
        const BenchReport report = run_benchmark(image, model, config, reps, compare_schemes);
        if (csv.empty()) csv = bench_report_to_csv(report);
        else {
            std::string body = bench_report_to_csv(report);
            csv += body.substr(body.find('\n') + 1);  // drop repeated header
        }
    }
    if (csv_path.empty()) {
        std::cout << csv;
    } else {
        std::ofstream out(csv_path);
        if (!out) throw IoError(csv_path + ": cannot open file for writing");
        out << csv;
    }
    return 0;
}

std::vector<TrainingSample> load_samples(const std::string& dir, int label, Variant variant,
                                         LbpBinning binning, const ExecConfig& exec) {
    std::vector<TrainingSample> samples;
    for (const auto& path : collect_inputs(dir)) {
        const GrayImage image = load_pgm(path.string());
        if (image.width != kWindowWidth || image.height != kWindowHeight)
            throw DimensionError(path.string() + ": sample must be 64x128, got " +
                                 std::to_string(image.width) + "x" +
                                 std::to_string(image.height));
        samples.push_back({window_feature_vector(image, variant, binning, true, exec), label});
    }
    return samples;
}

int run_train_fixture(const std::string& positives, const std::string& negatives,
                      const std::string& variant_name_, std::size_t epochs, std::uint64_t seed,
                      std::size_t workers, const std::string& out_path) {
    const Variant variant = parse_variant(variant_name_);
    const LbpBinning binning = LbpBinning::Raw256;
    ExecConfig exec{workers, 32};

    std::vector<TrainingSample> samples = load_samples(positives, +1, variant, binning, exec);
    auto negs = load_samples(negatives, -1, variant, binning, exec);
    samples.insert(samples.end(), std::make_move_iterator(negs.begin()),
                   std::make_move_iterator(negs.end()));

    SgdParams params;
    params.epochs = epochs;
    params.seed = seed;
    const SvmModel model = train_sgd(samples, model_layout(variant, binning), params);
    save_model(model, out_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pedscan: multi-scale sliding-window pedestrian detector"};
    app.require_subcommand(1);

    std::string input, model_path, variant = "hoglbp", output, csv_path;
    std::string positives, negatives, out_model;
    double scale_step = 1.2, threshold = 0.0, nms_iou = 0.5;
    std::size_t workers = 0, reps = 1, epochs = 20;
    std::uint64_t seed = 1;
    bool compare_schemes = false;

    auto* cmd_detect = app.add_subcommand("detect", "Detect pedestrians in PGM images");
    cmd_detect->add_option("--input", input, "PGM file or directory")->required();
    cmd_detect->add_option("--model", model_path, "model file")->required();
    cmd_detect->add_option("--variant", variant, "lbp|hog|hoglbp");
    cmd_detect->add_option("--scale-step", scale_step, "pyramid scale factor");
    auto* thr_opt = cmd_detect->add_option("--threshold", threshold, "decision threshold override");
    cmd_detect->add_option("--nms-iou", nms_iou, "NMS overlap threshold");
    auto* det_workers = cmd_detect->add_option("--workers", workers, "worker count");
    cmd_detect->add_option("--output", output, "detections JSONL path (default stdout)");

    auto* cmd_bench = app.add_subcommand("bench", "Per-stage throughput benchmark");
    cmd_bench->add_option("--input", input, "PGM file or directory")->required();
    cmd_bench->add_option("--model", model_path, "model file (synthetic if omitted)");
    cmd_bench->add_option("--variant", variant, "lbp|hog|hoglbp");
    cmd_bench->add_option("--reps", reps, "repetitions (medians reported)");
    auto* bench_workers = cmd_bench->add_option("--workers", workers, "worker count");
    cmd_bench->add_flag("--compare-schemes", compare_schemes, "also time the naive kernels");
    cmd_bench->add_option("--csv", csv_path, "CSV output path (default stdout)");

    auto* cmd_train = app.add_subcommand("train-fixture", "Train a tiny SGD fixture model");
    cmd_train->add_option("--positives", positives, "directory of 64x128 positive PGMs")->required();
    cmd_train->add_option("--negatives", negatives, "directory of 64x128 negative PGMs")->required();
    cmd_train->add_option("--variant", variant, "lbp|hog|hoglbp");
    cmd_train->add_option("--epochs", epochs, "SGD epochs");
    cmd_train->add_option("--seed", seed, "RNG seed");
    auto* train_workers = cmd_train->add_option("--workers", workers, "worker count");
    cmd_train->add_option("--out", out_model, "output model path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    try {
        if (cmd_detect->parsed()) {
            const std::size_t w = resolve_workers(workers, det_workers->count() > 0);
            const double* thr = thr_opt->count() > 0 ? &threshold : nullptr;
            return run_detect(input, model_path, variant, scale_step, thr, nms_iou, w, output);
        }
        if (cmd_bench->parsed()) {
            const std::size_t w = resolve_workers(workers, bench_workers->count() > 0);
            return run_bench(input, model_path, variant, reps, w, compare_schemes, csv_path);
        }
        const std::size_t w = resolve_workers(workers, train_workers->count() > 0);
        return run_train_fixture(positives, negatives, variant, epochs, seed, w, out_model);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
