#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace wmark {

/// 8-bit grayscale raster, row-major.
class Image {
public:
    Image() = default;
    Image(int width, int height, std::uint8_t fill = 0);
    Image(int width, int height, std::vector<std::uint8_t> pixels);

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t size() const { return pixels_.size(); }
    bool empty() const { return pixels_.empty(); }

    std::uint8_t at(int x, int y) const { return pixels_[index(x, y)]; }
    std::uint8_t& at(int x, int y) { return pixels_[index(x, y)]; }

    std::span<const std::uint8_t> pixels() const { return pixels_; }
    std::span<std::uint8_t> pixels() { return pixels_; }

    friend bool operator==(const Image&, const Image&) = default;

private:
    std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(x);
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> pixels_;
};

/// Reads a binary 8-bit PGM (P5). Comment lines are skipped.
Image load_image(const std::filesystem::path& path);

/// Writes `img` as "P5\n<w> <h>\n255\n" followed by the raw samples.
void save_image(const Image& img, const std::filesystem::path& path);

/// In-memory forms of the same codec.
Image decode_pgm(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_pgm(const Image& img);

enum class EdgePolicy {
    reject,     // dimensions must be multiples of k
    replicate,  // pad by repeating the last row/column, crop on assemble
};

/// Tiling of an image into k x k blocks, numbered row-major.
struct BlockGrid {
    int k = 0;
    int blocks_x = 0;
    int blocks_y = 0;
    int width = 0;   // source dimensions, before padding
    int height = 0;

    int block_count() const { return blocks_x * blocks_y; }
    int origin_x(int index) const { return (index % blocks_x) * k; }
    int origin_y(int index) const { return (index / blocks_x) * k; }

    friend bool operator==(const BlockGrid&, const BlockGrid&) = default;
};

struct Partition {
    BlockGrid grid;
    std::vector<Image> blocks;
};

BlockGrid make_grid(int width, int height, int k, EdgePolicy edges = EdgePolicy::reject);

Partition partition(const Image& img, int k, EdgePolicy edges = EdgePolicy::reject);

Image assemble(const BlockGrid& grid, std::span<const Image> blocks);

/// Copies the k x k block at `index` (edge-replicated when it overhangs).
Image extract_block(const Image& img, const BlockGrid& grid, int index);

}  // namespace wmark
