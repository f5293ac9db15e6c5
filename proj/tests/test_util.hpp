#pragma once

#include <atomic>
#include <filesystem>
#include <random>
#include <string>

#include "pedscan/image.hpp"

namespace pedscan::testutil {

inline GrayImage random_image(std::mt19937_64& rng, std::size_t width, std::size_t height) {
    std::uniform_int_distribution<int> dist(0, 255);
    GrayImage img(width, height);
    for (auto& p : img.data) p = static_cast<std::uint8_t>(dist(rng));
    return img;
}

/// Unique temp file path, removed on destruction.
struct TempFile {
    std::filesystem::path path;
    explicit TempFile(const std::string& suffix = ".tmp") {
        static std::atomic<unsigned> counter{0};
        path = std::filesystem::temp_directory_path() /
               ("pedscan_test_" + std::to_string(counter++) + "_" +
                std::to_string(std::random_device{}()) + suffix);
    }
    ~TempFile() {
        std::error_code ec;
        std::filesystem::remove(path, ec);
    }
    std::string str() const { return path.string(); }
};

}  // namespace pedscan::testutil
