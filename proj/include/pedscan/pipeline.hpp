#pragma once

#include <string>
#include <vector>

#include "pedscan/image.hpp"
#include "pedscan/lbp.hpp"
#include "pedscan/nms.hpp"
#include "pedscan/parallel.hpp"
#include "pedscan/svm.hpp"

namespace pedscan {

enum class Variant { Lbp, Hog, HogLbp };

Variant parse_variant(const std::string& name);
std::string variant_name(Variant v);

struct PipelineConfig {
    Variant variant = Variant::HogLbp;
    double scale_step = 1.2;
    double nms_overlap = 0.5;
    LbpBinning lbp_binning = LbpBinning::Raw256;
    bool normalize_hog = true;
    bool naive_schemes = false;  // use the redundant LBP and serial SVM kernels
    ExecConfig exec;
};

/// Full detection pass: pyramid, per-level crop to x8, feature extraction,
/// sliding-window SVM, coordinate mapping, NMS. Deterministic for a fixed
/// config. Throws ModelError when the model lacks a stream the variant needs.
std::vector<Detection> detect(const GrayImage& image, const SvmModel& model,
                              const PipelineConfig& config);

/// Zero-weight stream skeleton for a variant, LBP stream first.
std::vector<SvmStream> model_layout(Variant variant, LbpBinning binning = LbpBinning::Raw256);

/// Concatenated feature vector of one 64x128 window image, in model layout
/// order. Used by the fixture trainer.
std::vector<double> window_feature_vector(const GrayImage& window, Variant variant,
                                          LbpBinning binning = LbpBinning::Raw256,
                                          bool normalize_hog = true, const ExecConfig& exec = {});

/// One benchmark table row.
struct BenchRow {
    std::string stage;
    std::string image_size;  // "WxH"
    std::size_t workers;
    std::string scheme;  // "scalable" or "naive"
    double px_per_ns;
    double fps;
};

struct BenchReport {
    std::vector<BenchRow> rows;
    double fps = 0.0;          // end-to-end, median over repetitions
    double work_units = 0.0;   // pixels x feature streams processed per frame
};

/// Times every enabled stage over `repetitions` runs and reports medians.
/// Feature/SVM throughput counts the pixels of all cropped pyramid levels.
BenchReport run_benchmark(const GrayImage& image, const SvmModel& model,
                          const PipelineConfig& config, std::size_t repetitions,
                          bool compare_schemes);

inline constexpr const char* kBenchCsvHeader = "stage,image_size,workers,scheme,px_per_ns,fps";

std::string bench_report_to_csv(const BenchReport& report);

}  // namespace pedscan
