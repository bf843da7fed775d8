#include "gazeviz/png.hpp"

#include "gazeviz/error.hpp"

#include <zlib.h>

#include <array>
#include <vector>

namespace gazeviz {

namespace {

void put_u32(std::string& out, std::uint32_t v) {
    out.push_back(static_cast<char>((v >> 24) & 0xff));
    out.push_back(static_cast<char>((v >> 16) & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
    out.push_back(static_cast<char>(v & 0xff));
}

void put_chunk(std::string& out, const char type[4], const std::string& data) {
    put_u32(out, static_cast<std::uint32_t>(data.size()));
    std::string body(type, 4);
    body += data;
    out += body;
    const auto crc = crc32(0L, reinterpret_cast<const Bytef*>(body.data()), static_cast<uInt>(body.size()));
    put_u32(out, static_cast<std::uint32_t>(crc));
}

std::uint32_t get_u32(const std::string& s, std::size_t at) {
    return (static_cast<std::uint32_t>(static_cast<unsigned char>(s[at])) << 24) |
           (static_cast<std::uint32_t>(static_cast<unsigned char>(s[at + 1])) << 16) |
           (static_cast<std::uint32_t>(static_cast<unsigned char>(s[at + 2])) << 8) |
           static_cast<std::uint32_t>(static_cast<unsigned char>(s[at + 3]));
}

constexpr std::array<unsigned char, 8> kSignature{0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};

}  // namespace

std::string encode_png(const Image& image) {
    if (image.width <= 0 || image.height <= 0) throw Error(ErrorCode::parameter, "empty image");
    const std::size_t stride = static_cast<std::size_t>(image.width) * 4;

    // Filter type 0 (None) on every scanline.
    std::vector<unsigned char> raw;
    raw.reserve((stride + 1) * image.height);
    for (int y = 0; y < image.height; ++y) {
        raw.push_back(0);
        const auto* row = image.rgba.data() + y * stride;
        raw.insert(raw.end(), row, row + stride);
    }

    uLongf packed_size = compressBound(static_cast<uLong>(raw.size()));
    std::vector<unsigned char> packed(packed_size);
    if (compress2(packed.data(), &packed_size, raw.data(), static_cast<uLong>(raw.size()), 6) != Z_OK) {
        throw Error(ErrorCode::io, "zlib compression failed");
    }

    std::string out(reinterpret_cast<const char*>(kSignature.data()), kSignature.size());
    std::string ihdr;
    put_u32(ihdr, static_cast<std::uint32_t>(image.width));
    put_u32(ihdr, static_cast<std::uint32_t>(image.height));
    ihdr.push_back(8);  // bit depth
    ihdr.push_back(6);  // RGBA
    ihdr.push_back(0);
    ihdr.push_back(0);
    ihdr.push_back(0);
    put_chunk(out, "IHDR", ihdr);
    put_chunk(out, "IDAT", std::string(reinterpret_cast<const char*>(packed.data()), packed_size));
    put_chunk(out, "IEND", {});
    return out;
}

PngInfo read_png_info(const std::string& bytes) {
    if (bytes.size() < 24 || bytes.compare(0, 8, reinterpret_cast<const char*>(kSignature.data()), 8) != 0 ||
        bytes.compare(12, 4, "IHDR") != 0) {
        throw Error(ErrorCode::format, "not a PNG stream");
    }
    return {static_cast<int>(get_u32(bytes, 16)), static_cast<int>(get_u32(bytes, 20))};
}

}  // namespace gazeviz
