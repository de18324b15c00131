#include "stereosafe/plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "stereosafe/errors.hpp"

namespace stereosafe {

namespace {

constexpr int kMargin = 24;

struct Canvas {
    int width, height;
    std::vector<std::uint8_t> rgb;

    Canvas(int w, int h) : width(w), height(h), rgb(static_cast<std::size_t>(w) * h * 3, 255) {}

    void set(int x, int y, const std::array<std::uint8_t, 3>& c) {
        if (x < 0 || x >= width || y < 0 || y >= height) return;
        const std::size_t i = (static_cast<std::size_t>(y) * width + x) * 3;
        rgb[i] = c[0];
        rgb[i + 1] = c[1];
        rgb[i + 2] = c[2];
    }

    void line(int x0, int y0, int x1, int y1, const std::array<std::uint8_t, 3>& c) {
        const int dx = std::abs(x1 - x0), sx = x0 < x1 ? 1 : -1;
        const int dy = -std::abs(y1 - y0), sy = y0 < y1 ? 1 : -1;
        int err = dx + dy;
        while (true) {
            set(x0, y0, c);
            if (x0 == x1 && y0 == y1) break;
            const int e2 = 2 * err;
            if (e2 >= dy) { err += dy; x0 += sx; }
            if (e2 <= dx) { err += dx; y0 += sy; }
        }
    }
};

}  // namespace

void write_line_plot(const std::string& path, std::span<const PlotSeries> series, int width, int height) {
    double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
    double y_min = x_min, y_max = -x_min;
    for (const auto& s : series) {
        for (double x : s.x) { x_min = std::min(x_min, x); x_max = std::max(x_max, x); }
        for (double y : s.y) { y_min = std::min(y_min, y); y_max = std::max(y_max, y); }
    }
    if (!(x_min <= x_max)) { x_min = 0.0; x_max = 1.0; }
    if (!(y_min <= y_max)) { y_min = 0.0; y_max = 1.0; }
    if (x_max - x_min < 1e-12) { x_min -= 0.5; x_max += 0.5; }
    const double y_pad = std::max(1e-3, 0.08 * (y_max - y_min));
    y_min -= y_pad;
    y_max += y_pad;

    Canvas canvas(width, height);
    const auto px = [&](double x) {
        return kMargin + static_cast<int>(std::lround((x - x_min) / (x_max - x_min) * (width - 2 * kMargin)));
    };
    const auto py = [&](double y) {
        return height - kMargin -
               static_cast<int>(std::lround((y - y_min) / (y_max - y_min) * (height - 2 * kMargin)));
    };

    const std::array<std::uint8_t, 3> axis = {90, 90, 90};
    canvas.line(kMargin, height - kMargin, width - kMargin, height - kMargin, axis);
    canvas.line(kMargin, kMargin, kMargin, height - kMargin, axis);
    if (y_min < 0.0 && y_max > 0.0)
        canvas.line(kMargin, py(0.0), width - kMargin, py(0.0), {200, 200, 200});

    for (const auto& s : series) {
        for (std::size_t i = 1; i < s.x.size(); ++i)
            canvas.line(px(s.x[i - 1]), py(s.y[i - 1]), px(s.x[i]), py(s.y[i]), s.color);
    }

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("write_line_plot: cannot open " + path);
    out << "P6\n" << width << " " << height << "\n255\n";
    out.write(reinterpret_cast<const char*>(canvas.rgb.data()), static_cast<std::streamsize>(canvas.rgb.size()));
    if (!out) throw IoError("write_line_plot: write failed: " + path);
}

}  // namespace stereosafe
