#pragma once

#include "ava/image.hpp"

#include <array>
#include <cmath>
#include <string>
#include <vector>

namespace ava {

using Rgb = std::array<double, 3>;  // components in [0,1]

struct CanvasConfig {
    int width = 640;
    int height = 480;
    int margin = 40;
    Rgba background{255, 255, 255, 255};
};

struct DrawCounters {
    long discs = 0;
    long segments = 0;
    long polylines = 0;
    long labels = 0;
};

// Floating-point RGB raster that composites with the "over" operator and
// quantizes once on export.
class Canvas {
public:
    explicit Canvas(const CanvasConfig& config);

    int width() const noexcept { return config_.width; }
    int height() const noexcept { return config_.height; }
    const CanvasConfig& config() const noexcept { return config_; }
    DrawCounters& counters() noexcept { return counters_; }
    const DrawCounters& counters() const noexcept { return counters_; }

    bool inside(int x, int y) const noexcept { return x >= 0 && y >= 0 && x < width() && y < height(); }
    void blend(int x, int y, const Rgb& colour, double alpha);

    // Pixels whose centres lie within radius of (cx, cy); calls visit(x, y) for each.
    template <class F>
    void for_disc(double cx, double cy, double radius, F&& visit) const {
        const int x0 = static_cast<int>(std::floor(cx - radius));
        const int x1 = static_cast<int>(std::ceil(cx + radius));
        const int y0 = static_cast<int>(std::floor(cy - radius));
        const int y1 = static_cast<int>(std::ceil(cy + radius));
        for (int y = y0; y <= y1; ++y) {
            for (int x = x0; x <= x1; ++x) {
                const double dx = x + 0.5 - cx;
                const double dy = y + 0.5 - cy;
                if (inside(x, y) && dx * dx + dy * dy <= radius * radius) visit(x, y);
            }
        }
    }

    void disc(double cx, double cy, double radius, const Rgb& colour, double alpha);
    void line(double x0, double y0, double x1, double y1, const Rgb& colour, double alpha);
    void polyline(const std::vector<std::array<double, 2>>& points, const Rgb& colour, double alpha);
    // 5x7 bitmap glyphs scaled by `scale`; letters are drawn upper-case.
    void text(double x, double y, const std::string& s, const Rgb& colour, int scale = 1);

    Image to_image() const;

private:
    CanvasConfig config_;
    std::vector<double> rgb_;
    DrawCounters counters_;
};

inline constexpr int kGlyphWidth = 5;
inline constexpr int kGlyphHeight = 7;
// Width in pixels of a string drawn by Canvas::text at the given scale.
int text_width(const std::string& s, int scale = 1);

Rgb to_rgb(Rgba c);

// Two images next to each other with a gap; heights may differ.
Image side_by_side(const Image& left, const Image& right, int gap = 10, Rgba fill = {255, 255, 255, 255});

}  // namespace ava
