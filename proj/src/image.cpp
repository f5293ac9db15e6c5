#include "pedscan/image.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "pedscan/errors.hpp"

namespace pedscan {

GrayImage::GrayImage(std::size_t w, std::size_t h, std::uint8_t fill)
    : width(w), height(h), data(w * h, fill) {
    if (w == 0 || h == 0) throw DimensionError("GrayImage dims must be >= 1");
}

GrayImage::GrayImage(std::size_t w, std::size_t h, std::vector<std::uint8_t> pixels)
    : width(w), height(h), data(std::move(pixels)) {
    if (w == 0 || h == 0) throw DimensionError("GrayImage dims must be >= 1");
    if (data.size() != w * h) throw DimensionError("GrayImage data length != width * height");
}

std::uint8_t GrayImage::at_clamped(std::ptrdiff_t y, std::ptrdiff_t x) const {
    const std::ptrdiff_t cy = std::clamp<std::ptrdiff_t>(y, 0, static_cast<std::ptrdiff_t>(height) - 1);
    const std::ptrdiff_t cx = std::clamp<std::ptrdiff_t>(x, 0, static_cast<std::ptrdiff_t>(width) - 1);
    return data[static_cast<std::size_t>(cy) * width + static_cast<std::size_t>(cx)];
}

namespace {

// PGM headers allow '#' comments and arbitrary whitespace between tokens.
std::string next_pgm_token(std::istream& in) {
    std::string token;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {}
            continue;
        }
        if (std::isspace(c)) continue;
        token.push_back(static_cast<char>(c));
        while ((c = in.peek()) != EOF && !std::isspace(c) && c != '#')
            token.push_back(static_cast<char>(in.get()));
        return token;
    }
    return token;
}

std::size_t parse_dim(const std::string& token, const std::string& path, const char* what) {
    std::size_t value = 0;
    for (char c : token) {
        if (c < '0' || c > '9')
            throw FormatError(path + ": malformed PGM header (bad " + what + " '" + token + "')");
        value = value * 10 + static_cast<std::size_t>(c - '0');
    }
    if (token.empty() || value == 0)
        throw FormatError(path + ": malformed PGM header (bad " + what + ")");
    return value;
}

}  // namespace

GrayImage load_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path + ": cannot open file");

    const std::string magic = next_pgm_token(in);
    if (magic != "P5")
        throw FormatError(path + ": malformed PGM header (expected P5, got '" + magic + "')");
    const std::size_t width = parse_dim(next_pgm_token(in), path, "width");
    const std::size_t height = parse_dim(next_pgm_token(in), path, "height");
    const std::string maxval_token = next_pgm_token(in);
    if (maxval_token.empty()) throw FormatError(path + ": malformed PGM header (missing maxval)");
    if (maxval_token != "255")
        throw FormatError(path + ": unsupported maxval '" + maxval_token + "' (must be 255)");
    // exactly one whitespace byte separates maxval from the payload
    const int sep = in.get();
    if (sep == EOF || !std::isspace(sep))
        throw FormatError(path + ": malformed PGM header (missing payload separator)");

    std::vector<std::uint8_t> pixels(width * height);
    in.read(reinterpret_cast<char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
    if (static_cast<std::size_t>(in.gcount()) != pixels.size())
        throw FormatError(path + ": truncated PGM payload (expected " +
                          std::to_string(pixels.size()) + " bytes, got " +
                          std::to_string(in.gcount()) + ")");
    return GrayImage(width, height, std::move(pixels));
}

void save_pgm(const GrayImage& image, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(path + ": cannot open file for writing");
    out << "P5\n" << image.width << ' ' << image.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(image.data.data()),
              static_cast<std::streamsize>(image.data.size()));
    if (!out) throw IoError(path + ": write failed");
}

GrayImage downscale(const GrayImage& image, std::size_t out_width, std::size_t out_height) {
    if (out_width == 0 || out_height == 0)
        throw DimensionError("downscale: target dims must be >= 1");
    if (out_width > image.width || out_height > image.height)
        throw DimensionError("downscale: target must not exceed the source");
    if (out_width == image.width && out_height == image.height) return image;

    GrayImage out(out_width, out_height);
    const double sx = static_cast<double>(image.width) / static_cast<double>(out_width);
    const double sy = static_cast<double>(image.height) / static_cast<double>(out_height);
    for (std::size_t oy = 0; oy < out_height; ++oy) {
        // pixel-center alignment: output center maps to source coordinates
        const double fy = (static_cast<double>(oy) + 0.5) * sy - 0.5;
        const double cy = std::clamp(fy, 0.0, static_cast<double>(image.height - 1));
        const std::size_t y0 = static_cast<std::size_t>(cy);
        const std::size_t y1 = std::min(y0 + 1, image.height - 1);
        const double wy = cy - static_cast<double>(y0);
        for (std::size_t ox = 0; ox < out_width; ++ox) {
            const double fx = (static_cast<double>(ox) + 0.5) * sx - 0.5;
            const double cx = std::clamp(fx, 0.0, static_cast<double>(image.width - 1));
            const std::size_t x0 = static_cast<std::size_t>(cx);
            const std::size_t x1 = std::min(x0 + 1, image.width - 1);
            const double wx = cx - static_cast<double>(x0);
            const double top = (1.0 - wx) * image.at(y0, x0) + wx * image.at(y0, x1);
            const double bottom = (1.0 - wx) * image.at(y1, x0) + wx * image.at(y1, x1);
            const double value = (1.0 - wy) * top + wy * bottom;
            out.at(oy, ox) = static_cast<std::uint8_t>(std::floor(value + 0.5));
        }
    }
    return out;
}

ImagePyramid build_pyramid(const GrayImage& image, double scale_step, std::size_t min_width,
                           std::size_t min_height) {
    if (scale_step <= 1.0) throw DimensionError("build_pyramid: scale_step must be > 1");
    if (image.width < min_width || image.height < min_height)
        throw DimensionError("build_pyramid: image smaller than one detection window");

    ImagePyramid pyramid;
    pyramid.levels.push_back({image, 1.0});
    std::size_t w = image.width;
    std::size_t h = image.height;
    while (true) {
        w = static_cast<std::size_t>(static_cast<double>(w) / scale_step);
        h = static_cast<std::size_t>(static_cast<double>(h) / scale_step);
        if (w < min_width || h < min_height) break;
        // each level resampled from the original, not the previous level
        const double scale = static_cast<double>(w) / static_cast<double>(image.width);
        pyramid.levels.push_back({downscale(image, w, h), scale});
    }
    return pyramid;
}

GrayImage crop_to_multiple_of_8(const GrayImage& image) {
    const std::size_t w = image.width - image.width % 8;
    const std::size_t h = image.height - image.height % 8;
    if (w == 0 || h == 0) throw DimensionError("crop_to_multiple_of_8: image smaller than 8x8");
    if (w == image.width && h == image.height) return image;
    GrayImage out(w, h);
    for (std::size_t y = 0; y < h; ++y)
        std::copy_n(image.data.begin() + static_cast<std::ptrdiff_t>(y * image.width), w,
                    out.data.begin() + static_cast<std::ptrdiff_t>(y * w));
    return out;
}

}  // namespace pedscan
