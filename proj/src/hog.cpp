#include "pedscan/hog.hpp"

#include <cmath>
#include <numbers>

#include "pedscan/errors.hpp"

namespace pedscan {

GradientField gradient(const GrayImage& image, const ExecConfig& config) {
    GradientField field(image.width, image.height);
    parallel_for_2d(
        image.height, image.width,
        [&](std::size_t y, std::size_t x) {
            const auto sy = static_cast<std::ptrdiff_t>(y);
            const auto sx = static_cast<std::ptrdiff_t>(x);
            const double dx = static_cast<double>(image.at_clamped(sy, sx - 1)) -
                              static_cast<double>(image.at_clamped(sy, sx + 1));
            const double dy = static_cast<double>(image.at_clamped(sy - 1, sx)) -
                              static_cast<double>(image.at_clamped(sy + 1, sx));
            const double mag = std::sqrt(dx * dx + dy * dy);
            double deg = 0.0;
            if (mag > 0.0) {
                deg = std::atan2(dy, dx) * 180.0 / std::numbers::pi;
                if (deg < 0.0) deg += 360.0;
                if (deg >= 180.0) deg -= 180.0;  // unsigned gradient
                if (deg >= 180.0) deg = 0.0;
            }
            field.magnitude[y * field.width + x] = static_cast<float>(mag);
            field.orientation[y * field.width + x] = static_cast<float>(deg);
        },
        config);
    return field;
}

std::vector<InterpTerm> hog_interp_weights(std::size_t py, std::size_t px, double theta,
                                           double omega) {
    constexpr double kBinWidth = 180.0 / static_cast<double>(kHogOrientationBins);
    constexpr double kCellLow = 3.5;   // center of the low cell, block-local pixel index
    constexpr double kCellSpan = 8.0;  // distance between cell centers

    // orientation: linear between the two nearest bin centers, circular
    const double pos = theta / kBinWidth - 0.5;
    const double lo = std::floor(pos);
    const double frac = pos - lo;
    const auto bin_lo = static_cast<std::size_t>(
        (static_cast<long>(lo) % static_cast<long>(kHogOrientationBins) + kHogOrientationBins) %
        kHogOrientationBins);
    const std::size_t bin_hi = (bin_lo + 1) % kHogOrientationBins;

    // spatial: linear between the two cell centers, clamped outside them so
    // the weights stay confined to the block and partition unity
    const auto axis_weight = [&](std::size_t p) {
        double u = (static_cast<double>(p) - kCellLow) / kCellSpan;
        if (u < 0.0) u = 0.0;
        if (u > 1.0) u = 1.0;
        return u;  // share of the high cell
    };
    const double uy = axis_weight(py);
    const double ux = axis_weight(px);

    std::vector<InterpTerm> terms;
    terms.reserve(8);
    const double cell_w[2][2] = {{(1.0 - uy) * (1.0 - ux), (1.0 - uy) * ux},
                                 {uy * (1.0 - ux), uy * ux}};
    const double bin_w[2] = {1.0 - frac, frac};
    const std::size_t bins[2] = {bin_lo, bin_hi};
    for (std::size_t cy = 0; cy < 2; ++cy)
        for (std::size_t cx = 0; cx < 2; ++cx)
            for (std::size_t b = 0; b < 2; ++b) {
                const double w = omega * cell_w[cy][cx] * bin_w[b];
                if (w > 0.0)
                    terms.push_back({(cy * 2 + cx) * kHogOrientationBins + bins[b], w});
            }
    return terms;
}

FeatureGrid hog_block_histograms(const GradientField& grad, const ExecConfig& config) {
    if (grad.height % 8 != 0 || grad.width % 8 != 0)
        throw DimensionError("hog_block_histograms: dims must be divisible by 8");
    if (grad.height < 16 || grad.width < 16)
        throw DimensionError("hog_block_histograms: image smaller than one block");
    const std::size_t hb = grad.height / 8 - 1;
    const std::size_t wb = grad.width / 8 - 1;
    FeatureGrid blocks(hb, wb, kHogBinsPerBlock);
    parallel_for_2d(
        hb, wb,
        [&](std::size_t by, std::size_t bx) {
            // per-task scratch; a single task owns each block histogram
            double hist[kHogBinsPerBlock] = {};
            for (std::size_t dy = 0; dy < 16; ++dy)
                for (std::size_t dx = 0; dx < 16; ++dx) {
                    const std::size_t y = by * 8 + dy;
                    const std::size_t x = bx * 8 + dx;
                    const double omega = grad.mag(y, x);
                    if (omega == 0.0) continue;
                    for (const auto& term : hog_interp_weights(dy, dx, grad.ori(y, x), omega))
                        hist[term.bin] += term.weight;
                }
            float* out = &blocks.at(by, bx, 0);
            for (std::size_t t = 0; t < kHogBinsPerBlock; ++t) out[t] = static_cast<float>(hist[t]);
        },
        config);
    return blocks;
}

FeatureGrid normalize_blocks(const FeatureGrid& grid, double epsilon) {
    FeatureGrid out = grid;
    for (std::size_t y = 0; y < grid.hb; ++y)
        for (std::size_t x = 0; x < grid.wb; ++x) {
            double sq = 0.0;
            for (std::size_t t = 0; t < grid.s; ++t) {
                const double v = grid.at(y, x, t);
                sq += v * v;
            }
            const double inv = 1.0 / std::sqrt(sq + epsilon * epsilon);
            for (std::size_t t = 0; t < grid.s; ++t)
                out.at(y, x, t) = static_cast<float>(grid.at(y, x, t) * inv);
        }
    return out;
}

}  // namespace pedscan
