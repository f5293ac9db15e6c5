#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pedscan {

/// 8-bit grayscale raster, row-major, top-left origin.
struct GrayImage {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> data;

    GrayImage() = default;
    GrayImage(std::size_t w, std::size_t h, std::uint8_t fill = 0);
    GrayImage(std::size_t w, std::size_t h, std::vector<std::uint8_t> pixels);

    std::uint8_t at(std::size_t y, std::size_t x) const { return data[y * width + x]; }
    std::uint8_t& at(std::size_t y, std::size_t x) { return data[y * width + x]; }

    /// Edge-clamped read; accepts coordinates outside the raster.
    std::uint8_t at_clamped(std::ptrdiff_t y, std::ptrdiff_t x) const;

    bool operator==(const GrayImage&) const = default;
};

struct PyramidLevel {
    GrayImage image;
    double scale;  // ratio of this level's size to the original (1.0 at level 0)
};

/// Downscaled copies of one image for multi-scale detection.
/// Level 0 is the original; every level fits at least one 64x128 window.
struct ImagePyramid {
    std::vector<PyramidLevel> levels;
};

/// Reads a binary PGM (P5, maxval 255).
GrayImage load_pgm(const std::string& path);

/// Writes binary PGM; load_pgm(save_pgm(img)) reproduces img bit-exactly.
void save_pgm(const GrayImage& image, const std::string& path);

/// Bilinear resampling with pixel-center alignment, rounded half-up on store.
/// Target must not exceed the source in either dimension.
GrayImage downscale(const GrayImage& image, std::size_t out_width, std::size_t out_height);

/// Builds the scaled pyramid. Level k+1 dims are floor(level_k / scale_step);
/// generation stops before a dimension drops below its minimum. Every level is
/// resampled from the original image, never from the previous level.
ImagePyramid build_pyramid(const GrayImage& image, double scale_step = 1.2,
                           std::size_t min_width = 64, std::size_t min_height = 128);

/// Crops bottom/right so both dims are multiples of 8.
GrayImage crop_to_multiple_of_8(const GrayImage& image);

}  // namespace pedscan
