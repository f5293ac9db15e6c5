#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "pedscan/feature_grid.hpp"
#include "pedscan/image.hpp"
#include "pedscan/parallel.hpp"

namespace pedscan {

inline constexpr std::size_t kHogOrientationBins = 9;   // unsigned, 20 deg wide
inline constexpr std::size_t kHogBinsPerBlock = 36;     // 2x2 cells x 9 bins

/// Per-pixel gradient magnitude and unsigned orientation in degrees [0, 180).
struct GradientField {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<float> magnitude;
    std::vector<float> orientation;

    GradientField() = default;
    GradientField(std::size_t w, std::size_t h)
        : width(w), height(h), magnitude(w * h, 0.0f), orientation(w * h, 0.0f) {}

    float mag(std::size_t y, std::size_t x) const { return magnitude[y * width + x]; }
    float ori(std::size_t y, std::size_t x) const { return orientation[y * width + x]; }
};

/// Central-difference gradient with edge-clamped reads. Orientation is the
/// two-argument arctangent of (dy, dx) folded to [0, 180); 0 at zero gradient.
GradientField gradient(const GrayImage& image, const ExecConfig& config = {});

/// One destination bin of a pixel's trilinear split.
struct InterpTerm {
    std::size_t bin;  // index into the 36-bin block histogram
    double weight;    // share of the pixel's magnitude, > 0
};

/// Trilinear interpolation weights for a pixel at block-local position
/// (py, px) in [0, 16), orientation theta, magnitude omega. Returns the 1, 2,
/// 4, or 8 nonzero destinations; weights sum to omega. Spatial interpolation
/// is confined to the block (clamped beyond the cell centers), orientation is
/// circular over 180 degrees.
std::vector<InterpTerm> hog_interp_weights(std::size_t py, std::size_t px, double theta,
                                           double omega);

/// 16x16 block histograms at 8-pixel stride, dims [H/8-1][W/8-1][36]. Each
/// block is a row-major concatenation of its four 8x8-cell 9-bin histograms;
/// one task accumulates each block, so results are bit-identical across
/// worker counts. Requires dims divisible by 8.
FeatureGrid hog_block_histograms(const GradientField& grad, const ExecConfig& config = {});

/// L2 normalization per block: block / sqrt(|block|^2 + eps^2).
FeatureGrid normalize_blocks(const FeatureGrid& grid, double epsilon = 1e-6);

}  // namespace pedscan
