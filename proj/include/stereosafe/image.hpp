#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace stereosafe {

/// 8-bit grayscale image, row-major.
struct Image {
    int width{0};
    int height{0};
    std::vector<std::uint8_t> pixels;

    Image() = default;
    Image(int w, int h, std::uint8_t fill = 0) : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, fill) {}

    std::uint8_t at(int u, int v) const { return pixels[static_cast<std::size_t>(v) * width + u]; }
    std::uint8_t& at(int u, int v) { return pixels[static_cast<std::size_t>(v) * width + u]; }

    /// Clamped access for window operations near borders.
    std::uint8_t at_clamped(int u, int v) const {
        if (u < 0) u = 0;
        if (u >= width) u = width - 1;
        if (v < 0) v = 0;
        if (v >= height) v = height - 1;
        return at(u, v);
    }

    bool same_size(const Image& other) const { return width == other.width && height == other.height; }
};

/// Time-synchronized grayscale triple: left, center, right.
struct ImageTriple {
    Image i1;
    Image i2;
    Image i3;
};

void write_pgm(const Image& img, const std::string& path);
Image read_pgm(const std::string& path);

}  // namespace stereosafe
