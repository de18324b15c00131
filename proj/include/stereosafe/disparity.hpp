#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace stereosafe {

/// Integer disparity map. Entries are either in [0, d_max] or kInvalid.
/// Invalid pixels never enter constraint sets or training losses.
struct DisparityMap {
    static constexpr std::int16_t kInvalid = -1;

    int width{0};
    int height{0};
    int d_max{0};
    std::vector<std::int16_t> values;

    DisparityMap() = default;
    DisparityMap(int w, int h, int d_max_, std::int16_t fill = kInvalid)
        : width(w), height(h), d_max(d_max_), values(static_cast<std::size_t>(w) * h, fill) {}

    std::int16_t at(int u, int v) const { return values[static_cast<std::size_t>(v) * width + u]; }
    std::int16_t& at(int u, int v) { return values[static_cast<std::size_t>(v) * width + u]; }

    bool valid(int u, int v) const { return at(u, v) != kInvalid; }
    bool same_size(const DisparityMap& other) const { return width == other.width && height == other.height; }

    std::size_t count_valid() const {
        std::size_t n = 0;
        for (auto d : values) n += (d != kInvalid);
        return n;
    }
};

// Binary grid file: magic "DM16", u32 width, u32 height, u16 d_max, then
// width*height little-endian u16 values in row-major order, 0xFFFF = invalid.
void write_disparity(const DisparityMap& map, const std::string& path);
DisparityMap read_disparity(const std::string& path);

}  // namespace stereosafe
