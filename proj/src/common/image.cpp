#include "ava/image.hpp"

#include "ava/errors.hpp"

#include <openssl/evp.h>
#include <openssl/sha.h>
#include <png.h>

#include <cstring>
#include <fstream>
#include <iterator>

namespace ava {

Image::Image(int width, int height, Rgba fill) : width_(width), height_(height) {
    if (width <= 0 || height <= 0) {
        throw ImageError("image dimensions must be positive");
    }
    pixels_.resize(static_cast<std::size_t>(width) * height * 4);
    for (std::size_t i = 0; i < pixels_.size(); i += 4) {
        pixels_[i] = fill.r;
        pixels_[i + 1] = fill.g;
        pixels_[i + 2] = fill.b;
        pixels_[i + 3] = fill.a;
    }
}

Rgba Image::at(int x, int y) const {
    const auto i = (static_cast<std::size_t>(y) * width_ + x) * 4;
    return {pixels_[i], pixels_[i + 1], pixels_[i + 2], pixels_[i + 3]};
}

void Image::set(int x, int y, Rgba c) {
    const auto i = (static_cast<std::size_t>(y) * width_ + x) * 4;
    pixels_[i] = c.r;
    pixels_[i + 1] = c.g;
    pixels_[i + 2] = c.b;
    pixels_[i + 3] = c.a;
}

Bytes encode_png(const Image& image) {
    if (image.empty()) {
        throw ImageError("cannot encode an empty image");
    }
    png_image desc;
    std::memset(&desc, 0, sizeof desc);
    desc.version = PNG_IMAGE_VERSION;
    desc.width = static_cast<png_uint_32>(image.width());
    desc.height = static_cast<png_uint_32>(image.height());
    desc.format = PNG_FORMAT_RGBA;

    png_alloc_size_t size = 0;
    if (!png_image_write_to_memory(&desc, nullptr, &size, 0, image.data().data(), 0, nullptr)) {
        throw ImageError(std::string("png size query failed: ") + desc.message);
    }
    Bytes out(size);
    if (!png_image_write_to_memory(&desc, out.data(), &size, 0, image.data().data(), 0, nullptr)) {
        throw ImageError(std::string("png encode failed: ") + desc.message);
    }
    out.resize(size);
    return out;
}

Image decode_png(std::span<const std::uint8_t> png) {
    png_image desc;
    std::memset(&desc, 0, sizeof desc);
    desc.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_memory(&desc, png.data(), png.size())) {
        throw ImageError(std::string("png header invalid: ") + desc.message);
    }
    desc.format = PNG_FORMAT_RGBA;
    if (desc.width == 0 || desc.height == 0) {
        png_image_free(&desc);
        throw ImageError("png has zero extent");
    }
    Image out(static_cast<int>(desc.width), static_cast<int>(desc.height));
    if (!png_image_finish_read(&desc, nullptr, out.data().data(), 0, nullptr)) {
        throw ImageError(std::string("png decode failed: ") + desc.message);
    }
    return out;
}

std::string content_hash(std::span<const std::uint8_t> bytes) {
    unsigned char digest[SHA256_DIGEST_LENGTH];
    SHA256(bytes.data(), bytes.size(), digest);
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * SHA256_DIGEST_LENGTH);
    for (unsigned char c : digest) {
        out.push_back(hex[c >> 4]);
        out.push_back(hex[c & 0xF]);
    }
    return out;
}

std::string base64_encode(std::span<const std::uint8_t> bytes) {
    std::string out(4 * ((bytes.size() + 2) / 3), '\0');
    const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), bytes.data(),
                                  static_cast<int>(bytes.size()));
    out.resize(static_cast<std::size_t>(n));
    return out;
}

Bytes base64_decode(const std::string& text) {
    if (text.size() % 4 != 0) {
        throw ImageError("base64 payload length is not a multiple of 4");
    }
    Bytes out(3 * text.size() / 4);
    const int n = EVP_DecodeBlock(out.data(), reinterpret_cast<const unsigned char*>(text.data()),
                                  static_cast<int>(text.size()));
    if (n < 0) {
        throw ImageError("invalid base64 payload");
    }
    // EVP_DecodeBlock keeps the padding bytes; strip them.
    std::size_t pad = 0;
    if (!text.empty() && text.back() == '=') ++pad;
    if (text.size() > 1 && text[text.size() - 2] == '=') ++pad;
    out.resize(static_cast<std::size_t>(n) - pad);
    return out;
}

Bytes read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path);
    }
    return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write " + path);
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

void write_text_file(const std::string& path, const std::string& text) {
    write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

}  // namespace ava
