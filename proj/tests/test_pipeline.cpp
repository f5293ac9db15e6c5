#include <doctest.h>

#include <cmath>

#include "fixture.hpp"
#include "pedscan/errors.hpp"
#include "pedscan/hog.hpp"
#include "pedscan/pipeline.hpp"
#include "test_util.hpp"

using namespace pedscan;
using namespace pedscan::testutil;

namespace {

SvmModel zero_model(Variant variant, double bias) {
    SvmModel model;
    model.streams = model_layout(variant);
    model.bias = bias;
    model.threshold = 0.0;
    return model;
}

}  // namespace

TEST_CASE("variant parsing round-trips") {
    CHECK(parse_variant("lbp") == Variant::Lbp);
    CHECK(parse_variant("hog") == Variant::Hog);
    CHECK(parse_variant("hoglbp") == Variant::HogLbp);
    CHECK_THROWS_AS(parse_variant("sift"), DimensionError);
    CHECK(variant_name(Variant::Hog) == "hog");
}

TEST_CASE("blank image with a zero-weight, bias -1 model detects nothing") {
    const GrayImage blank(128, 160, std::uint8_t{90});
    for (const auto variant : {Variant::Lbp, Variant::Hog, Variant::HogLbp}) {
        PipelineConfig config;
        config.variant = variant;
        const auto dets = detect(blank, zero_model(variant, -1.0), config);
        CHECK(dets.empty());
    }
}

TEST_CASE("detect rejects a model missing the variant's stream") {
    const GrayImage blank(128, 160, std::uint8_t{90});
    PipelineConfig config;
    config.variant = Variant::Hog;
    CHECK_THROWS_AS(detect(blank, zero_model(Variant::Lbp, 0.0), config), ModelError);
}

TEST_CASE("hoglbp score decomposes into the lbp and hog stream partials") {
    std::mt19937_64 rng(301);
    const GrayImage img = random_image(rng, 96, 144);
    const LbpMap map = lbp_map(img);
    const FeatureGrid fa = block_histograms(cell_histograms(map));
    FeatureGrid fb = normalize_blocks(hog_block_histograms(gradient(img)));

    std::uniform_real_distribution<double> dist(-0.5, 0.5);
    SvmModel combined;
    combined.streams = model_layout(Variant::HogLbp);
    for (auto& stream : combined.streams)
        for (auto& w : stream.weights) w = dist(rng);
    combined.bias = 0.375;

    SvmModel lbp_only;
    lbp_only.streams = {combined.streams[0]};
    SvmModel hog_only;
    hog_only.streams = {combined.streams[1]};

    const ScoreMap both = score_windows(&fa, &fb, combined);
    const ScoreMap la = score_windows(&fa, nullptr, lbp_only);
    const ScoreMap lb = score_windows(nullptr, &fb, hog_only);
    for (std::size_t k = 0; k < both.scores.size(); ++k)
        CHECK(both.scores[k] ==
              doctest::Approx(la.scores[k] + lb.scores[k] + combined.bias).epsilon(1e-4));
}

TEST_CASE("detect is invariant to worker count") {
    const GrayImage scene = fixture_scene(160, 64);
    const auto samples = fixture_samples(Variant::Lbp, 8, 16);
    const SvmModel model = fixture_model(Variant::Lbp, samples);
    PipelineConfig config;
    config.variant = Variant::Lbp;
    config.exec.workers = 1;
    const auto base = detect(scene, model, config);
    config.exec.workers = 4;
    const auto par = detect(scene, model, config);
    REQUIRE(base.size() == par.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
        CHECK(base[i].x == par[i].x);
        CHECK(base[i].y == par[i].y);
        CHECK(base[i].score == par[i].score);
    }
}

TEST_CASE("benchmark report has one row per enabled stage") {
    const GrayImage img(160, 160, std::uint8_t{50});
    PipelineConfig config;
    config.variant = Variant::HogLbp;
    const BenchReport report = run_benchmark(img, zero_model(Variant::HogLbp, -1.0), config, 1, false);
    std::vector<std::string> stages;
    for (const auto& row : report.rows) stages.push_back(row.stage + "/" + row.scheme);
    const std::vector<std::string> expected = {
        "gradient/scalable", "hog_hist/scalable", "lbp_hist/scalable", "lbp_map/scalable",
        "nms/scalable",      "pyramid/scalable",  "svm/scalable",      "pipeline/scalable",
        "pipeline_no_nms/scalable"};
    CHECK(stages == expected);
    for (const auto& row : report.rows) {
        CHECK(row.px_per_ns > 0.0);
        CHECK(std::isfinite(row.px_per_ns));
        CHECK(row.fps > 0.0);
        CHECK(std::isfinite(row.fps));
    }
    CHECK(report.fps > 0.0);
}

TEST_CASE("compare-schemes adds naive rows for both scheme pairs") {
    const GrayImage img(160, 160, std::uint8_t{50});
    PipelineConfig config;
    config.variant = Variant::Lbp;
    const BenchReport report = run_benchmark(img, zero_model(Variant::Lbp, -1.0), config, 2, true);
    int lbp_naive = 0, svm_naive = 0;
    for (const auto& row : report.rows) {
        if (row.stage == "lbp_hist" && row.scheme == "naive") ++lbp_naive;
        if (row.stage == "svm" && row.scheme == "naive") ++svm_naive;
    }
    CHECK(lbp_naive == 1);
    CHECK(svm_naive == 1);
}

TEST_CASE("benchmark CSV starts with the fixed header") {
    const GrayImage img(160, 160, std::uint8_t{50});
    PipelineConfig config;
    config.variant = Variant::Lbp;
    const BenchReport report = run_benchmark(img, zero_model(Variant::Lbp, -1.0), config, 1, false);
    const std::string csv = bench_report_to_csv(report);
    CHECK(csv.substr(0, csv.find('\n')) == "stage,image_size,workers,scheme,px_per_ns,fps");
    CHECK(csv.find("160x160") != std::string::npos);
}

TEST_CASE("hoglbp per-frame work exceeds lbp per-frame work") {
    const GrayImage img(256, 192, std::uint8_t{50});
    PipelineConfig config;
    config.variant = Variant::Lbp;
    const BenchReport lbp = run_benchmark(img, zero_model(Variant::Lbp, -1.0), config, 1, false);
    config.variant = Variant::HogLbp;
    const BenchReport both = run_benchmark(img, zero_model(Variant::HogLbp, -1.0), config, 1, false);
    CHECK(both.work_units > lbp.work_units);
}
