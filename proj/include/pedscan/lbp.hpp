#pragma once

#include <cstdint>
#include <vector>

#include "pedscan/feature_grid.hpp"
#include "pedscan/image.hpp"
#include "pedscan/parallel.hpp"

namespace pedscan {

/// Per-pixel 8-bit LBP codes, same dims as the source image.
struct LbpMap {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> codes;

    std::uint8_t at(std::size_t y, std::size_t x) const { return codes[y * width + x]; }
};

/// Histogram layout for LBP features.
enum class LbpBinning {
    Raw256,     // identity code -> bin, S = 256
    Uniform59,  // uniform patterns get own bins, the rest share one, S = 59
};

std::size_t lbp_bin_count(LbpBinning binning);

/// Maps an LBP code to its histogram bin under the given binning.
std::size_t lbp_code_to_bin(std::uint8_t code, LbpBinning binning);

/// Computes the LBP map. Each of the 8 neighbors is compared to the center:
/// bit 0 if neighbor < center, else 1, packed MSB-first clockwise from the
/// top-left neighbor. Out-of-bounds neighbors read edge-clamped.
LbpMap lbp_map(const GrayImage& image, const ExecConfig& config = {});

/// Serial single-pixel code, the reference rule; also the kernel of lbp_map.
std::uint8_t lbp_code_at(const GrayImage& image, std::size_t y, std::size_t x);

/// 8x8-cell histograms via atomic scatter, dims [H/8][W/8][S].
/// Requires H and W divisible by 8. Every cell sums to 64.
FeatureGrid cell_histograms(const LbpMap& map, LbpBinning binning = LbpBinning::Raw256,
                            const ExecConfig& config = {});

/// Reduces 2x2 cell groups into overlapping 16x16 block histograms,
/// dims [H/8-1][W/8-1][S]. Every block sums to 256.
FeatureGrid block_histograms(const FeatureGrid& cells, const ExecConfig& config = {});

/// Direct 16x16 recount per block, the redundant scheme. Bit-exactly equal to
/// block_histograms(cell_histograms(map)).
FeatureGrid naive_lbp_block_histograms(const LbpMap& map, LbpBinning binning = LbpBinning::Raw256,
                                       const ExecConfig& config = {});

}  // namespace pedscan
