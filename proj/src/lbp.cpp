#include "pedscan/lbp.hpp"

#include <array>
#include <bit>

#include "pedscan/errors.hpp"

namespace pedscan {

namespace {

// Clockwise from the top-left neighbor, MSB first.
constexpr std::array<std::pair<int, int>, 8> kNeighborOffsets = {{
    {-1, -1}, {-1, 0}, {-1, 1}, {0, 1}, {1, 1}, {1, 0}, {1, -1}, {0, -1},
}};

// Uniform patterns (at most 2 circular 0/1 transitions) get bins 0..57 in
// ascending code order; everything else shares bin 58.
std::array<std::uint8_t, 256> make_uniform59_table() {
    std::array<std::uint8_t, 256> table{};
    std::uint8_t next = 0;
    for (int code = 0; code < 256; ++code) {
        const unsigned u = static_cast<unsigned>(code);
        const unsigned rotated = ((u << 1) | (u >> 7)) & 0xFFu;
        const int transitions = std::popcount(u ^ rotated);
        table[static_cast<std::size_t>(code)] =
            transitions <= 2 ? next++ : static_cast<std::uint8_t>(58);
    }
    return table;
}

const std::array<std::uint8_t, 256>& uniform59_table() {
    static const auto table = make_uniform59_table();
    return table;
}

}  // namespace

std::size_t lbp_bin_count(LbpBinning binning) {
    return binning == LbpBinning::Raw256 ? 256 : 59;
}

std::size_t lbp_code_to_bin(std::uint8_t code, LbpBinning binning) {
    return binning == LbpBinning::Raw256 ? code : uniform59_table()[code];
}

std::uint8_t lbp_code_at(const GrayImage& image, std::size_t y, std::size_t x) {
    const std::uint8_t center = image.at(y, x);
    std::uint8_t code = 0;
    for (const auto& [dy, dx] : kNeighborOffsets) {
        const std::uint8_t neighbor =
            image.at_clamped(static_cast<std::ptrdiff_t>(y) + dy, static_cast<std::ptrdiff_t>(x) + dx);
        code = static_cast<std::uint8_t>((code << 1) | (neighbor >= center ? 1u : 0u));
    }
    return code;
}

LbpMap lbp_map(const GrayImage& image, const ExecConfig& config) {
    LbpMap map;
    map.width = image.width;
    map.height = image.height;
    map.codes.resize(image.width * image.height);
    parallel_for_2d(
        image.height, image.width,
        [&](std::size_t y, std::size_t x) { map.codes[y * map.width + x] = lbp_code_at(image, y, x); },
        config);
    return map;
}

FeatureGrid cell_histograms(const LbpMap& map, LbpBinning binning, const ExecConfig& config) {
    if (map.height % 8 != 0 || map.width % 8 != 0)
        throw DimensionError("cell_histograms: dims must be divisible by 8");
    const std::size_t ch = map.height / 8;
    const std::size_t cw = map.width / 8;
    const std::size_t s = lbp_bin_count(binning);

    std::vector<std::uint32_t> counts(ch * cw * s, 0);
    scatter_accumulate(
        map.height * map.width,
        [&](std::size_t i) {
            const std::size_t y = i / map.width;
            const std::size_t x = i % map.width;
            const std::size_t bin = lbp_code_to_bin(map.codes[i], binning);
            return ((y / 8) * cw + x / 8) * s + bin;
        },
        counts, config);

    FeatureGrid cells(ch, cw, s);
    for (std::size_t i = 0; i < counts.size(); ++i) cells.values[i] = static_cast<float>(counts[i]);
    return cells;
}

FeatureGrid block_histograms(const FeatureGrid& cells, const ExecConfig& config) {
    if (cells.hb < 2 || cells.wb < 2)
        throw DimensionError("block_histograms: cell grid must be at least 2x2");
    const std::size_t hb = cells.hb - 1;
    const std::size_t wb = cells.wb - 1;
    FeatureGrid blocks(hb, wb, cells.s);
    parallel_for_2d(
        hb, wb,
        [&](std::size_t y, std::size_t x) {
            // one lane group reduces all bins of one block, strided by lane
            for (std::size_t lane = 0; lane < config.group_width; ++lane) {
                for (std::size_t t = lane; t < cells.s; t += config.group_width) {
                    blocks.at(y, x, t) = cells.at(y, x, t) + cells.at(y, x + 1, t) +
                                         cells.at(y + 1, x, t) + cells.at(y + 1, x + 1, t);
                }
            }
        },
        config);
    return blocks;
}

FeatureGrid naive_lbp_block_histograms(const LbpMap& map, LbpBinning binning,
                                       const ExecConfig& config) {
    if (map.height % 8 != 0 || map.width % 8 != 0)
        throw DimensionError("naive_lbp_block_histograms: dims must be divisible by 8");
    if (map.height < 16 || map.width < 16)
        throw DimensionError("naive_lbp_block_histograms: image smaller than one block");
    const std::size_t hb = map.height / 8 - 1;
    const std::size_t wb = map.width / 8 - 1;
    const std::size_t s = lbp_bin_count(binning);
    FeatureGrid blocks(hb, wb, s);
    parallel_for_2d(
        hb, wb,
        [&](std::size_t by, std::size_t bx) {
            float* hist = &blocks.at(by, bx, 0);
            for (std::size_t dy = 0; dy < 16; ++dy)
                for (std::size_t dx = 0; dx < 16; ++dx) {
                    const std::uint8_t code = map.at(by * 8 + dy, bx * 8 + dx);
                    hist[lbp_code_to_bin(code, binning)] += 1.0f;
                }
        },
        config);
    return blocks;
}

}  // namespace pedscan
