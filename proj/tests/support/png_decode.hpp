#pragma once

// Minimal PNG reader for checking served images: 8-bit RGBA, non-interlaced,
// all five scanline filters.

#include <zlib.h>

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

namespace gazeviz::testpng {

struct Decoded {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgba;
    std::vector<std::string> chunk_types;

    const std::uint8_t* at(int x, int y) const { return &rgba[(static_cast<std::size_t>(y) * width + x) * 4]; }
};

inline std::uint32_t be32(const std::string& s, std::size_t at) {
    return (std::uint32_t(std::uint8_t(s[at])) << 24) | (std::uint32_t(std::uint8_t(s[at + 1])) << 16) |
           (std::uint32_t(std::uint8_t(s[at + 2])) << 8) | std::uint32_t(std::uint8_t(s[at + 3]));
}

inline Decoded decode(const std::string& png) {
    if (png.size() < 8 || png.compare(0, 8, "\x89PNG\r\n\x1a\n") != 0) throw std::runtime_error("bad signature");
    Decoded d;
    std::string idat;
    std::size_t pos = 8;
    while (pos + 12 <= png.size()) {
        const auto len = be32(png, pos);
        const auto type = png.substr(pos + 4, 4);
        if (pos + 12 + len > png.size()) throw std::runtime_error("truncated chunk");
        const auto crc = be32(png, pos + 8 + len);
        const auto want = crc32(crc32(0, nullptr, 0), reinterpret_cast<const Bytef*>(png.data() + pos + 4), len + 4);
        if (crc != want) throw std::runtime_error("bad crc in " + type);
        d.chunk_types.push_back(type);
        if (type == "IHDR") {
            d.width = static_cast<int>(be32(png, pos + 8));
            d.height = static_cast<int>(be32(png, pos + 12));
            if (png[pos + 16] != 8 || png[pos + 17] != 6 || png[pos + 20] != 0)
                throw std::runtime_error("only 8-bit RGBA non-interlaced");
        } else if (type == "IDAT") {
            idat += png.substr(pos + 8, len);
        } else if (type == "IEND") {
            break;
        }
        pos += 12 + len;
    }
    const std::size_t stride = static_cast<std::size_t>(d.width) * 4;
    std::vector<std::uint8_t> raw((stride + 1) * d.height);
    uLongf raw_len = raw.size();
    if (uncompress(raw.data(), &raw_len, reinterpret_cast<const Bytef*>(idat.data()), idat.size()) != Z_OK ||
        raw_len != raw.size())
        throw std::runtime_error("bad image data");

    d.rgba.assign(stride * d.height, 0);
    for (int y = 0; y < d.height; ++y) {
        const std::uint8_t filter = raw[y * (stride + 1)];
        const std::uint8_t* in = &raw[y * (stride + 1) + 1];
        std::uint8_t* out = &d.rgba[y * stride];
        const std::uint8_t* up = y > 0 ? &d.rgba[(y - 1) * stride] : nullptr;
        for (std::size_t i = 0; i < stride; ++i) {
            const int a = i >= 4 ? out[i - 4] : 0;
            const int b = up ? up[i] : 0;
            const int c = up && i >= 4 ? up[i - 4] : 0;
            int pred = 0;
            switch (filter) {
                case 0: pred = 0; break;
                case 1: pred = a; break;
                case 2: pred = b; break;
                case 3: pred = (a + b) / 2; break;
                case 4: {
                    const int p = a + b - c, pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
                    pred = pa <= pb && pa <= pc ? a : pb <= pc ? b : c;
                    break;
                }
                default: throw std::runtime_error("bad filter");
            }
            out[i] = static_cast<std::uint8_t>(in[i] + pred);
        }
    }
    return d;
}

}  // namespace gazeviz::testpng
