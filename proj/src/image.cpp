#include "wmark/image.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iterator>
#include <string>

#include "wmark/error.hpp"

namespace wmark {

Image::Image(int width, int height, std::uint8_t fill)
    : Image(width, height,
            std::vector<std::uint8_t>(
                width > 0 && height > 0 ? static_cast<std::size_t>(width) * height : 0, fill)) {}

Image::Image(int width, int height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
    if (width <= 0 || height <= 0) {
        throw InvalidArgument("image dimensions must be positive, got " + std::to_string(width) +
                              "x" + std::to_string(height));
    }
    if (pixels_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
        throw InvalidArgument("pixel buffer size does not match image dimensions");
    }
}

namespace {

class HeaderReader {
public:
    explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    // Skips whitespace and '#' comments, then reads one unsigned decimal.
    long next_number() {
        skip_space_and_comments();
        if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) {
            throw IoError("malformed PGM header");
        }
        long value = 0;
        while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
            value = value * 10 + (bytes_[pos_++] - '0');
            if (value > 1'000'000'000L) throw IoError("malformed PGM header: number too large");
        }
        return value;
    }

    // Exactly one whitespace byte separates the maxval from the raster.
    std::size_t raster_offset() {
        if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
            throw IoError("malformed PGM header");
        }
        return pos_ + 1;
    }

private:
    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            if (std::isspace(bytes_[pos_])) {
                ++pos_;
            } else if (bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 2;
};

}  // namespace

Image decode_pgm(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P') throw IoError("not a PNM file");
    if (bytes[1] != '5') {
        throw IoError(std::string("unsupported format P") + static_cast<char>(bytes[1]) +
                      " (only binary 8-bit PGM P5 is supported)");
    }
    HeaderReader header(bytes);
    const long width = header.next_number();
    const long height = header.next_number();
    const long maxval = header.next_number();
    if (width <= 0 || height <= 0) throw IoError("malformed PGM header: zero dimension");
    if (maxval != 255) {
        throw IoError("unsupported bit depth: maxval " + std::to_string(maxval) + " (need 255)");
    }
    const std::size_t offset = header.raster_offset();
    const auto count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    if (bytes.size() < offset + count) throw IoError("truncated PGM payload");
    std::vector<std::uint8_t> pixels(bytes.begin() + static_cast<std::ptrdiff_t>(offset),
                                     bytes.begin() + static_cast<std::ptrdiff_t>(offset + count));
    return Image(static_cast<int>(width), static_cast<int>(height), std::move(pixels));
}

std::vector<std::uint8_t> encode_pgm(const Image& img) {
    if (img.empty()) throw InvalidArgument("cannot encode an empty image");
    const std::string header = "P5\n" + std::to_string(img.width()) + " " +
                               std::to_string(img.height()) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.insert(out.end(), img.pixels().begin(), img.pixels().end());
    return out;
}

Image load_image(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    try {
        return decode_pgm(bytes);
    } catch (const IoError& e) {
        throw IoError(path.string() + ": " + e.what());
    }
}

void save_image(const Image& img, const std::filesystem::path& path) {
    const auto bytes = encode_pgm(img);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed for " + path.string());
}

BlockGrid make_grid(int width, int height, int k, EdgePolicy edges) {
    if (k < 2) throw InvalidArgument("block size must be >= 2");
    if (width <= 0 || height <= 0) throw InvalidArgument("cannot partition an empty image");
    if (edges == EdgePolicy::reject && (width % k != 0 || height % k != 0)) {
        throw InvalidArgument("image " + std::to_string(width) + "x" + std::to_string(height) +
                              " is not divisible into " + std::to_string(k) + "x" +
                              std::to_string(k) + " blocks");
    }
    return BlockGrid{k, (width + k - 1) / k, (height + k - 1) / k, width, height};
}

Image extract_block(const Image& img, const BlockGrid& grid, int index) {
    Image block(grid.k, grid.k);
    const int x0 = grid.origin_x(index);
    const int y0 = grid.origin_y(index);
    for (int y = 0; y < grid.k; ++y) {
        const int sy = std::min(y0 + y, img.height() - 1);
        for (int x = 0; x < grid.k; ++x) {
            const int sx = std::min(x0 + x, img.width() - 1);
            block.at(x, y) = img.at(sx, sy);
        }
    }
    return block;
}

Partition partition(const Image& img, int k, EdgePolicy edges) {
    Partition result{make_grid(img.width(), img.height(), k, edges), {}};
    result.blocks.reserve(static_cast<std::size_t>(result.grid.block_count()));
    for (int i = 0; i < result.grid.block_count(); ++i) {
        result.blocks.push_back(extract_block(img, result.grid, i));
    }
    return result;
}

Image assemble(const BlockGrid& grid, std::span<const Image> blocks) {
    if (blocks.size() != static_cast<std::size_t>(grid.block_count())) {
        throw InvalidArgument("block count " + std::to_string(blocks.size()) +
                              " does not match grid (" + std::to_string(grid.block_count()) + ")");
    }
    Image out(grid.width, grid.height);
    for (int i = 0; i < grid.block_count(); ++i) {
        const Image& b = blocks[static_cast<std::size_t>(i)];
        if (b.width() != grid.k || b.height() != grid.k) {
            throw InvalidArgument("block " + std::to_string(i) + " has the wrong size");
        }
        const int x0 = grid.origin_x(i);
        const int y0 = grid.origin_y(i);
        const int w = std::min(grid.k, grid.width - x0);
        const int h = std::min(grid.k, grid.height - y0);
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) out.at(x0 + x, y0 + y) = b.at(x, y);
        }
    }
    return out;
}

}  // namespace wmark
