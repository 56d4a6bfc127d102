#include "ava/charts/canvas.hpp"

#include "ava/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

namespace ava {

namespace {

using Glyph = std::array<std::uint8_t, kGlyphHeight>;

const Glyph& glyph(char c) {
    static const Glyph kDigits[10] = {
        {0x0E, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0E}, {0x04, 0x0C, 0x04, 0x04, 0x04, 0x04, 0x0E},
        {0x0E, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1F}, {0x1F, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0E},
        {0x02, 0x06, 0x0A, 0x12, 0x1F, 0x02, 0x02}, {0x1F, 0x10, 0x1E, 0x01, 0x01, 0x11, 0x0E},
        {0x06, 0x08, 0x10, 0x1E, 0x11, 0x11, 0x0E}, {0x1F, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08},
        {0x0E, 0x11, 0x11, 0x0E, 0x11, 0x11, 0x0E}, {0x0E, 0x11, 0x11, 0x0F, 0x01, 0x02, 0x0C},
    };
    static const Glyph kLetters[26] = {
        {0x0E, 0x11, 0x11, 0x1F, 0x11, 0x11, 0x11}, {0x1E, 0x11, 0x11, 0x1E, 0x11, 0x11, 0x1E},
        {0x0E, 0x11, 0x10, 0x10, 0x10, 0x11, 0x0E}, {0x1C, 0x12, 0x11, 0x11, 0x11, 0x12, 0x1C},
        {0x1F, 0x10, 0x10, 0x1E, 0x10, 0x10, 0x1F}, {0x1F, 0x10, 0x10, 0x1E, 0x10, 0x10, 0x10},
        {0x0E, 0x11, 0x10, 0x17, 0x11, 0x11, 0x0F}, {0x11, 0x11, 0x11, 0x1F, 0x11, 0x11, 0x11},
        {0x0E, 0x04, 0x04, 0x04, 0x04, 0x04, 0x0E}, {0x07, 0x02, 0x02, 0x02, 0x02, 0x12, 0x0C},
        {0x11, 0x12, 0x14, 0x18, 0x14, 0x12, 0x11}, {0x10, 0x10, 0x10, 0x10, 0x10, 0x10, 0x1F},
        {0x11, 0x1B, 0x15, 0x15, 0x11, 0x11, 0x11}, {0x11, 0x11, 0x19, 0x15, 0x13, 0x11, 0x11},
        {0x0E, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0E}, {0x1E, 0x11, 0x11, 0x1E, 0x10, 0x10, 0x10},
        {0x0E, 0x11, 0x11, 0x11, 0x15, 0x12, 0x0D}, {0x1E, 0x11, 0x11, 0x1E, 0x14, 0x12, 0x11},
        {0x0F, 0x10, 0x10, 0x0E, 0x01, 0x01, 0x1E}, {0x1F, 0x04, 0x04, 0x04, 0x04, 0x04, 0x04},
        {0x11, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0E}, {0x11, 0x11, 0x11, 0x11, 0x11, 0x0A, 0x04},
        {0x11, 0x11, 0x11, 0x15, 0x15, 0x15, 0x0A}, {0x11, 0x11, 0x0A, 0x04, 0x0A, 0x11, 0x11},
        {0x11, 0x11, 0x11, 0x0A, 0x04, 0x04, 0x04}, {0x1F, 0x01, 0x02, 0x04, 0x08, 0x10, 0x1F},
    };
    static const Glyph kSpace{0, 0, 0, 0, 0, 0, 0};
    static const Glyph kDash{0, 0, 0, 0x1F, 0, 0, 0};
    static const Glyph kUnderscore{0, 0, 0, 0, 0, 0, 0x1F};
    static const Glyph kDot{0, 0, 0, 0, 0, 0x0C, 0x0C};
    static const Glyph kUnknown{0x1F, 0x11, 0x11, 0x11, 0x11, 0x11, 0x1F};
    const auto u = static_cast<unsigned char>(c);
    if (std::isdigit(u)) return kDigits[c - '0'];
    if (std::isalpha(u)) return kLetters[std::toupper(u) - 'A'];
    switch (c) {
        case ' ': return kSpace;
        case '-': return kDash;
        case '_': return kUnderscore;
        case '.': return kDot;
        default: return kUnknown;
    }
}

std::uint8_t quantize(double c) {
    return static_cast<std::uint8_t>(std::lround(std::clamp(c, 0.0, 1.0) * 255.0));
}

}  // namespace

Rgb to_rgb(Rgba c) { return {c.r / 255.0, c.g / 255.0, c.b / 255.0}; }

Canvas::Canvas(const CanvasConfig& config) : config_(config) {
    if (config.width <= 0 || config.height <= 0) throw InvalidParams("canvas size must be positive");
    if (config.margin < 0 || 2 * config.margin >= std::min(config.width, config.height)) {
        throw InvalidParams("canvas margin leaves no plot area");
    }
    const Rgb bg = to_rgb(config.background);
    rgb_.resize(static_cast<std::size_t>(config.width) * config.height * 3);
    for (std::size_t i = 0; i < rgb_.size(); i += 3) {
        rgb_[i] = bg[0];
        rgb_[i + 1] = bg[1];
        rgb_[i + 2] = bg[2];
    }
}

void Canvas::blend(int x, int y, const Rgb& colour, double alpha) {
    if (!inside(x, y)) return;
    const std::size_t i = (static_cast<std::size_t>(y) * config_.width + x) * 3;
    for (int k = 0; k < 3; ++k) rgb_[i + k] = alpha * colour[k] + (1.0 - alpha) * rgb_[i + k];
}

void Canvas::disc(double cx, double cy, double radius, const Rgb& colour, double alpha) {
    for_disc(cx, cy, radius, [&](int x, int y) { blend(x, y, colour, alpha); });
    ++counters_.discs;
}

void Canvas::line(double x0, double y0, double x1, double y1, const Rgb& colour, double alpha) {
    const double dx = x1 - x0;
    const double dy = y1 - y0;
    const int steps = std::max(1, static_cast<int>(std::ceil(std::max(std::abs(dx), std::abs(dy)))));
    int last_x = std::numeric_limits<int>::min();
    int last_y = std::numeric_limits<int>::min();
    for (int i = 0; i <= steps; ++i) {
        const double t = static_cast<double>(i) / steps;
        const int x = static_cast<int>(std::floor(x0 + t * dx));
        const int y = static_cast<int>(std::floor(y0 + t * dy));
        if (x == last_x && y == last_y) continue;
        blend(x, y, colour, alpha);
        last_x = x;
        last_y = y;
    }
    ++counters_.segments;
}

void Canvas::polyline(const std::vector<std::array<double, 2>>& points, const Rgb& colour, double alpha) {
    const long segments_before = counters_.segments;
    for (std::size_t i = 1; i < points.size(); ++i) {
        line(points[i - 1][0], points[i - 1][1], points[i][0], points[i][1], colour, alpha);
    }
    counters_.segments = segments_before;
    ++counters_.polylines;
}

void Canvas::text(double x, double y, const std::string& s, const Rgb& colour, int scale) {
    int pen = static_cast<int>(std::lround(x));
    const int top = static_cast<int>(std::lround(y));
    for (char c : s) {
        const Glyph& g = glyph(c);
        for (int row = 0; row < kGlyphHeight; ++row) {
            for (int col = 0; col < kGlyphWidth; ++col) {
                if (!(g[row] & (1 << (kGlyphWidth - 1 - col)))) continue;
                for (int sy = 0; sy < scale; ++sy) {
                    for (int sx = 0; sx < scale; ++sx) {
                        blend(pen + col * scale + sx, top + row * scale + sy, colour, 1.0);
                    }
                }
            }
        }
        pen += (kGlyphWidth + 1) * scale;
    }
    ++counters_.labels;
}

int text_width(const std::string& s, int scale) {
    if (s.empty()) return 0;
    return static_cast<int>(s.size()) * (kGlyphWidth + 1) * scale - scale;
}

Image Canvas::to_image() const {
    Image img(config_.width, config_.height);
    for (int y = 0; y < config_.height; ++y) {
        for (int x = 0; x < config_.width; ++x) {
            const std::size_t i = (static_cast<std::size_t>(y) * config_.width + x) * 3;
            img.set(x, y, Rgba{quantize(rgb_[i]), quantize(rgb_[i + 1]), quantize(rgb_[i + 2]), 255});
        }
    }
    return img;
}

Image side_by_side(const Image& left, const Image& right, int gap, Rgba fill) {
    Image out(left.width() + gap + right.width(), std::max(left.height(), right.height()), fill);
    for (int y = 0; y < left.height(); ++y) {
        for (int x = 0; x < left.width(); ++x) out.set(x, y, left.at(x, y));
    }
    const int offset = left.width() + gap;
    for (int y = 0; y < right.height(); ++y) {
        for (int x = 0; x < right.width(); ++x) out.set(offset + x, y, right.at(x, y));
    }
    return out;
}

}  // namespace ava
