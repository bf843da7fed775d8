#pragma once

#include "gazeviz/density.hpp"

#include <cstdint>
#include <string>

namespace gazeviz {

/// 8-bit RGBA PNG, fixed compression level, no ancillary chunks; identical
/// images always encode to identical bytes.
std::string encode_png(const Image& image);

struct PngInfo {
    int width = 0;
    int height = 0;
};

/// Reads the IHDR dimensions of a PNG byte stream.
PngInfo read_png_info(const std::string& bytes);

}  // namespace gazeviz
