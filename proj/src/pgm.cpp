#include "oscflow/pgm.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "oscflow/error.hpp"

namespace oscflow {

namespace {

struct Reader {
    const std::string& s;
    std::size_t pos = 0;

    void skip_space_and_comments() {
        while (pos < s.size()) {
            if (std::isspace(static_cast<unsigned char>(s[pos]))) {
                ++pos;
            } else if (s[pos] == '#') {
                while (pos < s.size() && s[pos] != '\n') ++pos;
            } else {
                break;
            }
        }
    }

    long number() {
        skip_space_and_comments();
        if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos])))
            throw Error(ErrorCode::io, "malformed PGM header");
        long v = 0;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
            v = v * 10 + (s[pos] - '0');
            if (v > 1'000'000'000) throw Error(ErrorCode::io, "PGM header value too large");
            ++pos;
        }
        return v;
    }
};

}  // namespace

GrayImage parse_pgm(const std::string& bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '2'))
        throw Error(ErrorCode::io, "not a P5/P2 PGM");
    const bool binary = bytes[1] == '5';
    Reader r{bytes, 2};
    GrayImage img;
    long w = r.number(), h = r.number(), maxval = r.number();
    if (w < 1 || h < 1 || maxval < 1 || maxval > 65535) throw Error(ErrorCode::io, "bad PGM dimensions");
    if (w * h > (1L << 28)) throw Error(ErrorCode::io, "PGM too large");
    img.width = static_cast<int>(w);
    img.height = static_cast<int>(h);
    img.maxval = static_cast<int>(maxval);
    const std::size_t n = static_cast<std::size_t>(w * h);
    img.pixels.resize(n);

    if (binary) {
        if (r.pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[r.pos])))
            throw Error(ErrorCode::io, "missing PGM header terminator");
        ++r.pos;
        const std::size_t bpp = maxval > 255 ? 2 : 1;
        if (bytes.size() - r.pos < n * bpp) throw Error(ErrorCode::io, "truncated PGM raster");
        for (std::size_t i = 0; i < n; ++i) {
            unsigned v = static_cast<unsigned char>(bytes[r.pos + i * bpp]);
            if (bpp == 2) v = (v << 8) | static_cast<unsigned char>(bytes[r.pos + i * bpp + 1]);
            img.pixels[i] = static_cast<std::uint16_t>(v);
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) img.pixels[i] = static_cast<std::uint16_t>(r.number());
    }
    for (auto p : img.pixels)
        if (p > maxval) throw Error(ErrorCode::io, "PGM sample exceeds maxval");
    return img;
}

GrayImage read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::io, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_pgm(ss.str());
}

std::string encode_pgm(const GrayImage& image) {
    std::string out = "P5\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
    out.reserve(out.size() + image.pixels.size());
    for (auto p : image.pixels) {
        unsigned v = image.maxval == 255 ? p : static_cast<unsigned>((p * 255u + image.maxval / 2) / image.maxval);
        out.push_back(static_cast<char>(v));
    }
    return out;
}

void write_pgm(const std::string& path, const GrayImage& image) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::io, "cannot write " + path);
    auto bytes = encode_pgm(image);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorCode::io, "write failed for " + path);
}

BinarySet image_to_set(const GrayImage& image, double spacing, BoundaryMode boundary) {
    Grid2D grid(image.width, image.height, spacing, boundary);
    std::vector<std::uint8_t> mask(image.pixels.size());
    for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = 2u * image.pixels[i] < static_cast<unsigned>(image.maxval);
    return {grid, std::move(mask)};
}

GrayImage set_to_image(const BinarySet& set) {
    GrayImage img;
    img.width = set.grid().width();
    img.height = set.grid().height();
    img.pixels.resize(set.grid().size());
    for (std::size_t i = 0; i < img.pixels.size(); ++i) img.pixels[i] = set[i] ? 0 : 255;
    return img;
}

}  // namespace oscflow
