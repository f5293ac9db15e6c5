#include <doctest.h>

#include <fstream>
#include <numeric>

#include "pedscan/errors.hpp"
#include "pedscan/image.hpp"
#include "test_util.hpp"

using namespace pedscan;
using testutil::TempFile;
using testutil::random_image;

namespace {

void write_bytes(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

// Reference bilinear sample used to cross-check downscale at tiny sizes.
double bilinear_oracle(const GrayImage& img, double y, double x) {
    y = std::clamp(y, 0.0, static_cast<double>(img.height - 1));
    x = std::clamp(x, 0.0, static_cast<double>(img.width - 1));
    const auto y0 = static_cast<std::size_t>(y);
    const auto x0 = static_cast<std::size_t>(x);
    const std::size_t y1 = std::min(y0 + 1, img.height - 1);
    const std::size_t x1 = std::min(x0 + 1, img.width - 1);
    const double fy = y - static_cast<double>(y0);
    const double fx = x - static_cast<double>(x0);
    return (1 - fy) * ((1 - fx) * img.at(y0, x0) + fx * img.at(y0, x1)) +
           fy * ((1 - fx) * img.at(y1, x0) + fx * img.at(y1, x1));
}

}  // namespace

TEST_CASE("load_pgm parses a minimal P5 file") {
    TempFile f(".pgm");
    write_bytes(f.str(), std::string("P5\n2 2\n255\n") + '\x00' + '\xff' + '\x80' + '\x40');
    const GrayImage img = load_pgm(f.str());
    CHECK(img.width == 2);
    CHECK(img.height == 2);
    CHECK(img.data == std::vector<std::uint8_t>{0, 255, 128, 64});
}

TEST_CASE("load_pgm rejects truncated payload") {
    TempFile f(".pgm");
    write_bytes(f.str(), "P5\n4 4\n255\n0123456789");
    CHECK_THROWS_AS(load_pgm(f.str()), FormatError);
}

TEST_CASE("load_pgm rejects color P6 files") {
    TempFile f(".pgm");
    write_bytes(f.str(), "P6\n1 1\n255\nabc");
    CHECK_THROWS_AS(load_pgm(f.str()), FormatError);
}

TEST_CASE("load_pgm rejects maxval other than 255") {
    TempFile f(".pgm");
    write_bytes(f.str(), "P5\n1 1\n65535\n\x01\x01");
    CHECK_THROWS_AS(load_pgm(f.str()), FormatError);
}

TEST_CASE("save_pgm emits the canonical header") {
    const GrayImage img(3, 2, {1, 2, 3, 4, 5, 6});
    TempFile f(".pgm");
    save_pgm(img, f.str());
    std::ifstream in(f.str(), std::ios::binary);
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(content == std::string("P5\n3 2\n255\n") + "\x01\x02\x03\x04\x05\x06");
}

TEST_CASE("save_pgm to an unwritable path fails") {
    CHECK_THROWS_AS(save_pgm(GrayImage(1, 1, {7}), "/nonexistent-dir/x.pgm"), IoError);
}

TEST_CASE("pgm round-trip is bit-exact on random images") {
    std::mt19937_64 rng(42);
    std::uniform_int_distribution<std::size_t> dim(1, 40);
    for (int i = 0; i < 30; ++i) {
        const GrayImage img = random_image(rng, dim(rng), dim(rng));
        TempFile f(".pgm");
        save_pgm(img, f.str());
        CHECK(load_pgm(f.str()) == img);
    }
}

TEST_CASE("downscale preserves constant images") {
    const GrayImage img(10, 8, std::uint8_t{77});
    const GrayImage out = downscale(img, 5, 3);
    CHECK(out.width == 5);
    CHECK(out.height == 3);
    for (auto p : out.data) CHECK(p == 77);
}

TEST_CASE("downscale to identical dims is the identity") {
    std::mt19937_64 rng(7);
    const GrayImage img = random_image(rng, 9, 5);
    CHECK(downscale(img, 9, 5) == img);
}

TEST_CASE("downscale rejects zero and enlarging targets") {
    const GrayImage img(4, 4, std::uint8_t{0});
    CHECK_THROWS_AS(downscale(img, 0, 2), DimensionError);
    CHECK_THROWS_AS(downscale(img, 5, 4), DimensionError);
}

TEST_CASE("downscale checkerboard stays in range and preserves the mean") {
    GrayImage img(4, 4);
    for (std::size_t y = 0; y < 4; ++y)
        for (std::size_t x = 0; x < 4; ++x) img.at(y, x) = ((y + x) % 2 == 0) ? 0 : 255;
    const GrayImage out = downscale(img, 2, 2);
    const double in_mean =
        std::accumulate(img.data.begin(), img.data.end(), 0.0) / static_cast<double>(img.data.size());
    const double out_mean =
        std::accumulate(out.data.begin(), out.data.end(), 0.0) / static_cast<double>(out.data.size());
    CHECK(std::abs(out_mean - in_mean) <= 1.0);
    // each output pixel equals the pixel-center bilinear sample
    for (std::size_t oy = 0; oy < 2; ++oy)
        for (std::size_t ox = 0; ox < 2; ++ox) {
            const double sample =
                bilinear_oracle(img, (oy + 0.5) * 2.0 - 0.5, (ox + 0.5) * 2.0 - 0.5);
            CHECK(out.at(oy, ox) == static_cast<std::uint8_t>(std::floor(sample + 0.5)));
        }
}

TEST_CASE("pyramid of a 1242x375 frame at step 1.2 has the expected levels") {
    const GrayImage img(1242, 375, std::uint8_t{0});
    const ImagePyramid pyr = build_pyramid(img, 1.2);
    // the floor recurrence continues 415x125, but 125 is below the window
    // height, so generation stops after the 498x150 level
    const std::vector<std::pair<std::size_t, std::size_t>> expected = {
        {1242, 375}, {1035, 312}, {862, 260}, {718, 216}, {598, 180}, {498, 150}};
    REQUIRE(pyr.levels.size() == expected.size());
    for (std::size_t k = 0; k < expected.size(); ++k) {
        CHECK(pyr.levels[k].image.width == expected[k].first);
        CHECK(pyr.levels[k].image.height == expected[k].second);
    }
    CHECK(pyr.levels[0].scale == 1.0);
}

TEST_CASE("pyramid dims follow the iterated floor recurrence") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::size_t> wdist(64, 700);
    std::uniform_int_distribution<std::size_t> hdist(128, 500);
    for (int i = 0; i < 10; ++i) {
        const std::size_t w = wdist(rng), h = hdist(rng);
        const ImagePyramid pyr = build_pyramid(GrayImage(w, h, std::uint8_t{0}), 1.3);
        std::size_t ew = w, eh = h;
        for (std::size_t k = 0; k < pyr.levels.size(); ++k) {
            CHECK(pyr.levels[k].image.width == ew);
            CHECK(pyr.levels[k].image.height == eh);
            CHECK(ew >= 64);
            CHECK(eh >= 128);
            ew = static_cast<std::size_t>(static_cast<double>(ew) / 1.3);
            eh = static_cast<std::size_t>(static_cast<double>(eh) / 1.3);
        }
        // generation stopped exactly when a dim dropped below its minimum
        CHECK((ew < 64 || eh < 128));
    }
}

TEST_CASE("pyramid boundary cases") {
    CHECK(build_pyramid(GrayImage(64, 128, std::uint8_t{9}), 1.2).levels.size() == 1);
    CHECK_THROWS_AS(build_pyramid(GrayImage(63, 128, std::uint8_t{9}), 1.2), DimensionError);
    CHECK_THROWS_AS(build_pyramid(GrayImage(64, 128, std::uint8_t{9}), 1.0), DimensionError);
}

TEST_CASE("crop_to_multiple_of_8 trims bottom and right") {
    std::mt19937_64 rng(3);
    const GrayImage img = random_image(rng, 21, 17);
    const GrayImage out = crop_to_multiple_of_8(img);
    CHECK(out.width == 16);
    CHECK(out.height == 16);
    for (std::size_t y = 0; y < out.height; ++y)
        for (std::size_t x = 0; x < out.width; ++x) CHECK(out.at(y, x) == img.at(y, x));
}
