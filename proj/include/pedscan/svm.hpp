#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pedscan/feature_grid.hpp"
#include "pedscan/parallel.hpp"

namespace pedscan {

inline constexpr std::size_t kWindowWidth = 64;
inline constexpr std::size_t kWindowHeight = 128;
inline constexpr std::size_t kBlocksPerWindowY = 15;  // 128/8 - 1
inline constexpr std::size_t kBlocksPerWindowX = 7;   // 64/8 - 1

enum class StreamKind : std::uint8_t { Lbp = 0, Hog = 1 };

/// Per-block-position weights for one feature stream, [hn][wn][s] row-major.
struct SvmStream {
    StreamKind kind;
    std::size_t hn = kBlocksPerWindowY;
    std::size_t wn = kBlocksPerWindowX;
    std::size_t s = 0;
    std::vector<double> weights;

    double at(std::size_t i, std::size_t j, std::size_t t) const {
        return weights[(i * wn + j) * s + t];
    }
};

/// Linear SVM over the concatenated per-window block histograms.
struct SvmModel {
    std::vector<SvmStream> streams;  // LBP stream first, then HOG
    double bias = 0.0;
    double threshold = 0.0;

    const SvmStream* find(StreamKind kind) const;
};

/// Scored rectangle in original-image coordinates.
struct Detection {
    long x = 0;
    long y = 0;
    long width = 0;
    long height = 0;
    double score = 0.0;
    std::size_t level = 0;
};

/// Sliding-window scores: scores[y][x] = bias + dot of the window's
/// concatenated features with the model, each window reduced by a lane group.
/// fa carries the LBP grid, fb the HOG grid; either may be null when the
/// model has no matching stream.
ScoreMap score_windows(const FeatureGrid* fa, const FeatureGrid* fb, const SvmModel& model,
                       const ExecConfig& config = {});

/// Same contract, each window's dot product as one serial left fold.
ScoreMap score_windows_naive(const FeatureGrid* fa, const FeatureGrid* fb, const SvmModel& model,
                             const ExecConfig& config = {});

/// Maps every above-threshold window back to original-image coordinates.
std::vector<Detection> collect_detections(std::span<const ScoreMap> score_maps, double threshold);

/// Hinge-loss SGD on fixed-length feature vectors with labels +-1.
/// Deterministic for a given seed. Intended for test fixtures only.
struct SgdParams {
    std::size_t epochs = 10;
    double learn_rate = 0.01;
    double regularization = 1e-4;
    std::uint64_t seed = 1;
};

struct TrainingSample {
    std::vector<double> features;
    int label;  // +1 or -1
};

SvmModel train_sgd(const std::vector<TrainingSample>& samples,
                   const std::vector<SvmStream>& layout, const SgdParams& params);

/// Binary little-endian model file, magic "PDSVM01\0".
SvmModel load_model(const std::string& path);
void save_model(const SvmModel& model, const std::string& path);

/// One JSON object per line with keys x, y, width, height, score, level.
std::string detection_to_json(const Detection& d);

}  // namespace pedscan
