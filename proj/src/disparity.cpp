#include "stereosafe/disparity.hpp"

#include <array>
#include <cstring>
#include <fstream>

#include "stereosafe/errors.hpp"

namespace stereosafe {

namespace {

constexpr char kMagic[4] = {'D', 'M', '1', '6'};
constexpr std::uint16_t kInvalidWire = 0xFFFF;

void put_u32(std::ofstream& out, std::uint32_t v) {
    const std::array<unsigned char, 4> b = {static_cast<unsigned char>(v & 0xFF),
                                            static_cast<unsigned char>((v >> 8) & 0xFF),
                                            static_cast<unsigned char>((v >> 16) & 0xFF),
                                            static_cast<unsigned char>((v >> 24) & 0xFF)};
    out.write(reinterpret_cast<const char*>(b.data()), 4);
}

void put_u16(std::ofstream& out, std::uint16_t v) {
    const std::array<unsigned char, 2> b = {static_cast<unsigned char>(v & 0xFF),
                                            static_cast<unsigned char>((v >> 8) & 0xFF)};
    out.write(reinterpret_cast<const char*>(b.data()), 2);
}

std::uint32_t get_u32(std::ifstream& in) {
    std::array<unsigned char, 4> b{};
    in.read(reinterpret_cast<char*>(b.data()), 4);
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

std::uint16_t get_u16(std::ifstream& in) {
    std::array<unsigned char, 2> b{};
    in.read(reinterpret_cast<char*>(b.data()), 2);
    return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
}

}  // namespace

void write_disparity(const DisparityMap& map, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("write_disparity: cannot open " + path);
    out.write(kMagic, 4);
    put_u32(out, static_cast<std::uint32_t>(map.width));
    put_u32(out, static_cast<std::uint32_t>(map.height));
    put_u16(out, static_cast<std::uint16_t>(map.d_max));
    for (auto d : map.values) put_u16(out, d == DisparityMap::kInvalid ? kInvalidWire : static_cast<std::uint16_t>(d));
    if (!out) throw IoError("write_disparity: write failed: " + path);
}

DisparityMap read_disparity(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("read_disparity: cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0) throw IoError("read_disparity: bad magic in " + path);
    const auto w = get_u32(in);
    const auto h = get_u32(in);
    const auto d_max = get_u16(in);
    if (!in || w == 0 || h == 0) throw IoError("read_disparity: bad header in " + path);

    DisparityMap map(static_cast<int>(w), static_cast<int>(h), d_max);
    for (auto& d : map.values) {
        const auto wire = get_u16(in);
        d = (wire == kInvalidWire) ? DisparityMap::kInvalid : static_cast<std::int16_t>(wire);
    }
    if (!in) throw IoError("read_disparity: truncated data in " + path);
    return map;
}

}  // namespace stereosafe
