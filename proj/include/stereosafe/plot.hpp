#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace stereosafe {

struct PlotSeries {
    std::vector<double> x;
    std::vector<double> y;
    std::array<std::uint8_t, 3> color{0, 0, 0};
};

/// Minimal deterministic line plot written as a binary PPM (P6): white
/// canvas, dark axes through zero (when in range), one polyline per series.
void write_line_plot(const std::string& path, std::span<const PlotSeries> series, int width = 640,
                     int height = 320);

}  // namespace stereosafe
