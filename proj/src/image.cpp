#include "stereosafe/image.hpp"

#include <cstdio>
#include <fstream>

#include "stereosafe/errors.hpp"

namespace stereosafe {

void write_pgm(const Image& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("write_pgm: cannot open " + path);
    out << "P5\n" << img.width << " " << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size()));
    if (!out) throw IoError("write_pgm: write failed: " + path);
}

Image read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("read_pgm: cannot open " + path);
    std::string magic;
    in >> magic;
    if (magic != "P5") throw IoError("read_pgm: not a binary PGM: " + path);

    auto next_token = [&in, &path]() {
        // Skip whitespace and '#' comment lines between header fields.
        int value = 0;
        char c;
        while (in.get(c)) {
            if (c == '#') {
                while (in.get(c) && c != '\n') {
                }
            } else if (!std::isspace(static_cast<unsigned char>(c))) {
                in.unget();
                if (!(in >> value)) throw IoError("read_pgm: bad header: " + path);
                return value;
            }
        }
        throw IoError("read_pgm: truncated header: " + path);
    };

    const int w = next_token();
    const int h = next_token();
    const int maxval = next_token();
    if (w <= 0 || h <= 0 || maxval != 255) throw IoError("read_pgm: unsupported header in " + path);
    in.get();  // single whitespace after maxval

    Image img(w, h);
    in.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size()));
    if (in.gcount() != static_cast<std::streamsize>(img.pixels.size()))
        throw IoError("read_pgm: truncated pixel data: " + path);
    return img;
}

}  // namespace stereosafe
