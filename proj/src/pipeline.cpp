#include "pedscan/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <sstream>

#include "pedscan/errors.hpp"
#include "pedscan/hog.hpp"

namespace pedscan {

Variant parse_variant(const std::string& name) {
    if (name == "lbp") return Variant::Lbp;
    if (name == "hog") return Variant::Hog;
    if (name == "hoglbp") return Variant::HogLbp;
    throw DimensionError("unknown variant '" + name + "' (expected lbp, hog or hoglbp)");
}

std::string variant_name(Variant v) {
    switch (v) {
        case Variant::Lbp: return "lbp";
        case Variant::Hog: return "hog";
        default: return "hoglbp";
    }
}

namespace {

bool wants_lbp(Variant v) { return v != Variant::Hog; }
bool wants_hog(Variant v) { return v != Variant::Lbp; }

void check_model_streams(const SvmModel& model, const PipelineConfig& config) {
    if (wants_lbp(config.variant) && model.find(StreamKind::Lbp) == nullptr)
        throw ModelError("variant '" + variant_name(config.variant) +
                         "' requires an lbp stream in the model");
    if (wants_hog(config.variant) && model.find(StreamKind::Hog) == nullptr)
        throw ModelError("variant '" + variant_name(config.variant) +
                         "' requires a hog stream in the model");
}

ScoreMap score_level(const GrayImage& level, const SvmModel& model, const PipelineConfig& config) {
    FeatureGrid fa, fb;
    if (wants_lbp(config.variant)) {
        const LbpMap map = lbp_map(level, config.exec);
        fa = config.naive_schemes
                 ? naive_lbp_block_histograms(map, config.lbp_binning, config.exec)
                 : block_histograms(cell_histograms(map, config.lbp_binning, config.exec),
                                    config.exec);
    }
    if (wants_hog(config.variant)) {
        fb = hog_block_histograms(gradient(level, config.exec), config.exec);
        if (config.normalize_hog) fb = normalize_blocks(fb);
    }
    const FeatureGrid* pa = wants_lbp(config.variant) ? &fa : nullptr;
    const FeatureGrid* pb = wants_hog(config.variant) ? &fb : nullptr;
    return config.naive_schemes ? score_windows_naive(pa, pb, model, config.exec)
                                : score_windows(pa, pb, model, config.exec);
}

}  // namespace

std::vector<Detection> detect(const GrayImage& image, const SvmModel& model,
                              const PipelineConfig& config) {
    check_model_streams(model, config);
    const ImagePyramid pyramid = build_pyramid(image, config.scale_step);
    std::vector<ScoreMap> maps;
    maps.reserve(pyramid.levels.size());
    for (std::size_t k = 0; k < pyramid.levels.size(); ++k) {
        const GrayImage level = crop_to_multiple_of_8(pyramid.levels[k].image);
        ScoreMap map = score_level(level, model, config);
        map.scale_x = static_cast<double>(level.width) / static_cast<double>(image.width);
        map.scale_y = static_cast<double>(level.height) / static_cast<double>(image.height);
        map.level = k;
        maps.push_back(std::move(map));
    }
    return nms_greedy(collect_detections(maps, model.threshold), config.nms_overlap);
}

std::vector<SvmStream> model_layout(Variant variant, LbpBinning binning) {
    std::vector<SvmStream> layout;
    if (wants_lbp(variant)) {
        SvmStream s;
        s.kind = StreamKind::Lbp;
        s.s = lbp_bin_count(binning);
        s.weights.assign(s.hn * s.wn * s.s, 0.0);
        layout.push_back(std::move(s));
    }
    if (wants_hog(variant)) {
        SvmStream s;
        s.kind = StreamKind::Hog;
        s.s = kHogBinsPerBlock;
        s.weights.assign(s.hn * s.wn * s.s, 0.0);
        layout.push_back(std::move(s));
    }
    return layout;
}

std::vector<double> window_feature_vector(const GrayImage& window, Variant variant,
                                          LbpBinning binning, bool normalize_hog,
                                          const ExecConfig& exec) {
    if (window.width != kWindowWidth || window.height != kWindowHeight)
        throw DimensionError("window_feature_vector: image must be 64x128");
    std::vector<double> features;
    if (wants_lbp(variant)) {
        const FeatureGrid fa =
            block_histograms(cell_histograms(lbp_map(window, exec), binning, exec), exec);
        features.insert(features.end(), fa.values.begin(), fa.values.end());
    }
    if (wants_hog(variant)) {
        FeatureGrid fb = hog_block_histograms(gradient(window, exec), exec);
        if (normalize_hog) fb = normalize_blocks(fb);
        features.insert(features.end(), fb.values.begin(), fb.values.end());
    }
    return features;
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ns(Clock::time_point t0) {
    return std::chrono::duration<double, std::nano>(Clock::now() - t0).count();
}

double median(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

struct StageKey {
    std::string stage;
    std::string scheme;
    bool operator<(const StageKey& other) const {
        return std::tie(stage, scheme) < std::tie(other.stage, other.scheme);
    }
};

}  // namespace

BenchReport run_benchmark(const GrayImage& image, const SvmModel& model,
                          const PipelineConfig& config, std::size_t repetitions,
                          bool compare_schemes) {
    if (repetitions == 0) repetitions = 1;
    check_model_streams(model, config);

    std::map<StageKey, std::vector<double>> stage_ns;
    std::vector<double> pipeline_ns_all, pipeline_no_nms_ns_all;
    double level_px = 0.0;     // pixels across all cropped pyramid levels
    double pyramid_px = 0.0;   // pixels produced by resampling (levels > 0)

    for (std::size_t rep = 0; rep < repetitions; ++rep) {
        double rep_ns = 0.0;
        const auto record = [&](const std::string& stage, const std::string& scheme, double ns,
                                bool in_pipeline) {
            stage_ns[{stage, scheme}].push_back(ns);
            if (in_pipeline) rep_ns += ns;
        };

        auto t0 = Clock::now();
        const ImagePyramid pyramid = build_pyramid(image, config.scale_step);
        record("pyramid", "scalable", elapsed_ns(t0), true);

        std::vector<GrayImage> levels;
        for (const auto& level : pyramid.levels) levels.push_back(crop_to_multiple_of_8(level.image));
        if (rep == 0) {
            for (const auto& l : levels) level_px += static_cast<double>(l.width * l.height);
            for (std::size_t k = 1; k < pyramid.levels.size(); ++k)
                pyramid_px += static_cast<double>(pyramid.levels[k].image.width *
                                                  pyramid.levels[k].image.height);
        }

        std::vector<ScoreMap> maps;
        double lbp_map_ns = 0, lbp_hist_ns = 0, lbp_hist_naive_ns = 0;
        double gradient_ns = 0, hog_hist_ns = 0, svm_ns = 0, svm_naive_ns = 0;
        for (std::size_t k = 0; k < levels.size(); ++k) {
            const GrayImage& level = levels[k];
            FeatureGrid fa, fb;
            if (wants_lbp(config.variant)) {
                t0 = Clock::now();
                const LbpMap map = lbp_map(level, config.exec);
                lbp_map_ns += elapsed_ns(t0);
                t0 = Clock::now();
                fa = block_histograms(cell_histograms(map, config.lbp_binning, config.exec),
                                      config.exec);
                lbp_hist_ns += elapsed_ns(t0);
                if (compare_schemes) {
                    t0 = Clock::now();
                    (void)naive_lbp_block_histograms(map, config.lbp_binning, config.exec);
                    lbp_hist_naive_ns += elapsed_ns(t0);
                }
            }
            if (wants_hog(config.variant)) {
                t0 = Clock::now();
                const GradientField grad = gradient(level, config.exec);
                gradient_ns += elapsed_ns(t0);
                t0 = Clock::now();
                fb = hog_block_histograms(grad, config.exec);
                if (config.normalize_hog) fb = normalize_blocks(fb);
                hog_hist_ns += elapsed_ns(t0);
            }
            const FeatureGrid* pa = wants_lbp(config.variant) ? &fa : nullptr;
            const FeatureGrid* pb = wants_hog(config.variant) ? &fb : nullptr;
            t0 = Clock::now();
            ScoreMap map = score_windows(pa, pb, model, config.exec);
            svm_ns += elapsed_ns(t0);
            if (compare_schemes) {
                t0 = Clock::now();
                (void)score_windows_naive(pa, pb, model, config.exec);
                svm_naive_ns += elapsed_ns(t0);
            }
            map.scale_x = static_cast<double>(level.width) / static_cast<double>(image.width);
            map.scale_y = static_cast<double>(level.height) / static_cast<double>(image.height);
            map.level = k;
            maps.push_back(std::move(map));
        }
        if (wants_lbp(config.variant)) {
            record("lbp_map", "scalable", lbp_map_ns, true);
            record("lbp_hist", "scalable", lbp_hist_ns, true);
            if (compare_schemes) record("lbp_hist", "naive", lbp_hist_naive_ns, false);
        }
        if (wants_hog(config.variant)) {
            record("gradient", "scalable", gradient_ns, true);
            record("hog_hist", "scalable", hog_hist_ns, true);
        }
        record("svm", "scalable", svm_ns, true);
        if (compare_schemes) record("svm", "naive", svm_naive_ns, false);

        pipeline_no_nms_ns_all.push_back(rep_ns);
        t0 = Clock::now();
        (void)nms_greedy(collect_detections(maps, model.threshold), config.nms_overlap);
        const double nms_ns = elapsed_ns(t0);
        record("nms", "scalable", nms_ns, true);
        pipeline_ns_all.push_back(rep_ns);
    }

    const std::string image_size =
        std::to_string(image.width) + "x" + std::to_string(image.height);
    const double pipeline_ns = median(pipeline_ns_all);
    const double pipeline_no_nms_ns = median(pipeline_no_nms_ns_all);
    const std::size_t streams = (wants_lbp(config.variant) ? 1u : 0u) +
                                (wants_hog(config.variant) ? 1u : 0u);

    BenchReport report;
    report.fps = 1e9 / pipeline_ns;
    report.work_units = level_px * static_cast<double>(streams);
    for (const auto& [key, samples] : stage_ns) {
        const double ns = std::max(median(samples), 1.0);
        const double px = key.stage == "pyramid" ? pyramid_px : level_px;
        report.rows.push_back({key.stage, image_size, config.exec.workers, key.scheme,
                               px / ns, 1e9 / ns});
    }
    // end-to-end figures, with and without the CPU-side refinement stage
    report.rows.push_back({"pipeline", image_size, config.exec.workers, "scalable",
                           level_px / pipeline_ns, 1e9 / pipeline_ns});
    report.rows.push_back({"pipeline_no_nms", image_size, config.exec.workers, "scalable",
                           level_px / pipeline_no_nms_ns, 1e9 / pipeline_no_nms_ns});
    return report;
}

std::string bench_report_to_csv(const BenchReport& report) {
    std::ostringstream out;
    out.precision(10);
    out << kBenchCsvHeader << '\n';
    for (const auto& row : report.rows)
        out << row.stage << ',' << row.image_size << ',' << row.workers << ',' << row.scheme << ','
            << row.px_per_ns << ',' << row.fps << '\n';
    return out.str();
}

}  // namespace pedscan
