#pragma once

#include <cstddef>
#include <vector>

namespace pedscan {

/// 3-D array [hb][wb][s] of per-block histograms. Integer counts for LBP
/// (stored exactly in float), real values for HOG.
struct FeatureGrid {
    std::size_t hb = 0;  // block rows
    std::size_t wb = 0;  // block cols
    std::size_t s = 0;   // bins per block
    std::vector<float> values;

    FeatureGrid() = default;
    FeatureGrid(std::size_t hb_, std::size_t wb_, std::size_t s_)
        : hb(hb_), wb(wb_), s(s_), values(hb_ * wb_ * s_, 0.0f) {}

    float at(std::size_t y, std::size_t x, std::size_t bin) const {
        return values[(y * wb + x) * s + bin];
    }
    float& at(std::size_t y, std::size_t x, std::size_t bin) {
        return values[(y * wb + x) * s + bin];
    }

    bool operator==(const FeatureGrid&) const = default;
};

/// Per-window SVM scores for one pyramid level.
struct ScoreMap {
    std::size_t y_count = 0;
    std::size_t x_count = 0;
    std::vector<double> scores;
    double scale_x = 1.0;  // level width / original width
    double scale_y = 1.0;  // level height / original height
    std::size_t level = 0;

    double at(std::size_t y, std::size_t x) const { return scores[y * x_count + x]; }
    double& at(std::size_t y, std::size_t x) { return scores[y * x_count + x]; }
};

}  // namespace pedscan
