#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ava {

using Bytes = std::vector<std::uint8_t>;

struct Rgba {
    std::uint8_t r = 0, g = 0, b = 0, a = 255;
    friend bool operator==(const Rgba&, const Rgba&) = default;
};

// 8-bit RGBA raster, row-major, top row first.
class Image {
public:
    Image() = default;
    Image(int width, int height, Rgba fill = {});

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    bool empty() const noexcept { return pixels_.empty(); }

    Rgba at(int x, int y) const;
    void set(int x, int y, Rgba c);

    std::span<const std::uint8_t> data() const noexcept { return pixels_; }
    std::span<std::uint8_t> data() noexcept { return pixels_; }

    friend bool operator==(const Image&, const Image&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> pixels_;
};

// PNG codec (RGBA, 8-bit). Encoding is deterministic for a given image.
Bytes encode_png(const Image& image);
Image decode_png(std::span<const std::uint8_t> png);

// Lowercase hex SHA-256 of the bytes; used as the content address of stored images.
std::string content_hash(std::span<const std::uint8_t> bytes);

std::string base64_encode(std::span<const std::uint8_t> bytes);
Bytes base64_decode(const std::string& text);

Bytes read_file(const std::string& path);
void write_file(const std::string& path, std::span<const std::uint8_t> bytes);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace ava
