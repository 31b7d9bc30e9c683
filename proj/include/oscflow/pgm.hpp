#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "oscflow/grid.hpp"

namespace oscflow {

struct GrayImage {
    int width = 0;
    int height = 0;
    int maxval = 255;
    std::vector<std::uint16_t> pixels;  // row-major, top row first
};

/// Reads P5 or P2. Throws Error(io) on anything malformed.
GrayImage read_pgm(const std::string& path);
GrayImage parse_pgm(const std::string& bytes);

/// Writes P5 with maxval 255.
void write_pgm(const std::string& path, const GrayImage& image);
std::string encode_pgm(const GrayImage& image);

/// Dark pixels (below half of maxval) are inside the set.
BinarySet image_to_set(const GrayImage& image, double spacing = 1.0, BoundaryMode boundary = {});
/// 0 = inside, 255 = outside.
GrayImage set_to_image(const BinarySet& set);

}  // namespace oscflow
