#pragma once

#include <random>
#include <vector>

#include "pedscan/pipeline.hpp"
#include "test_util.hpp"

namespace pedscan::testutil {

/// Canonical 64x128 texture used as the planted detection target.
inline GrayImage canonical_pattern() {
    std::mt19937_64 rng(1000);
    return random_image(rng, 64, 128);
}

/// Positive sample: the canonical pattern with a few pixels perturbed.
inline GrayImage positive_sample(std::mt19937_64& rng) {
    GrayImage img = canonical_pattern();
    std::uniform_int_distribution<std::size_t> pick(0, img.data.size() - 1);
    std::uniform_int_distribution<int> value(0, 255);
    for (int k = 0; k < 64; ++k) img.data[pick(rng)] = static_cast<std::uint8_t>(value(rng));
    return img;
}

/// Negative samples alternate between fresh noise textures and flats.
inline GrayImage negative_sample(std::mt19937_64& rng, int index) {
    if (index % 4 == 3)
        return GrayImage(64, 128, static_cast<std::uint8_t>(40 + 30 * (index % 7)));
    return random_image(rng, 64, 128);
}

inline std::vector<TrainingSample> fixture_samples(Variant variant, std::size_t positives = 20,
                                                   std::size_t negatives = 40) {
    std::mt19937_64 rng(2024);
    std::vector<TrainingSample> samples;
    for (std::size_t i = 0; i < positives; ++i)
        samples.push_back({window_feature_vector(positive_sample(rng), variant), +1});
    for (std::size_t i = 0; i < negatives; ++i)
        samples.push_back(
            {window_feature_vector(negative_sample(rng, static_cast<int>(i)), variant), -1});
    return samples;
}

inline SvmModel fixture_model(Variant variant, const std::vector<TrainingSample>& samples) {
    SgdParams params;
    params.epochs = 30;
    params.learn_rate = 0.05;
    params.regularization = 1e-4;
    params.seed = 7;
    SvmModel model = train_sgd(samples, model_layout(variant), params);
    model.threshold = 0.0;
    return model;
}

/// 512x256 noise scene with one planted canonical pattern.
inline GrayImage fixture_scene(long plant_x, long plant_y) {
    std::mt19937_64 rng(3000);
    GrayImage scene = random_image(rng, 512, 256);
    const GrayImage pattern = canonical_pattern();
    for (std::size_t y = 0; y < pattern.height; ++y)
        for (std::size_t x = 0; x < pattern.width; ++x)
            scene.at(static_cast<std::size_t>(plant_y) + y, static_cast<std::size_t>(plant_x) + x) =
                pattern.at(y, x);
    return scene;
}

inline double training_accuracy(const SvmModel& model, const std::vector<TrainingSample>& samples) {
    std::vector<double> flat;
    for (const auto& stream : model.streams)
        flat.insert(flat.end(), stream.weights.begin(), stream.weights.end());
    std::size_t correct = 0;
    for (const auto& s : samples) {
        double score = model.bias;
        for (std::size_t k = 0; k < flat.size(); ++k) score += flat[k] * s.features[k];
        if ((score > 0 ? 1 : -1) == s.label) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(samples.size());
}

}  // namespace pedscan::testutil
