#include <doctest.h>

#include <fstream>

#include "helpers.hpp"
#include "wmark/error.hpp"
#include "wmark/image.hpp"

using namespace wmark;

namespace {

std::vector<std::uint8_t> bytes_of(const std::string& s) { return {s.begin(), s.end()}; }

void write_file(const std::filesystem::path& p, const std::string& s) {
    std::ofstream(p, std::ios::binary) << s;
}

}  // namespace

TEST_CASE("image invariants") {
    CHECK_THROWS_AS(Image(0, 4), InvalidArgument);
    CHECK_THROWS_AS(Image(2, 2, std::vector<std::uint8_t>(3)), InvalidArgument);
    Image img(3, 2, 9);
    CHECK(img.size() == 6);
    img.at(2, 1) = 7;
    CHECK(img.pixels()[5] == 7);
}

TEST_CASE("decode a 2x2 P5") {
    std::string text = "P5\n2 2\n255\n";
    text += std::string{'\0', '\xff', '\x80', '\x40'};
    const Image img = decode_pgm(bytes_of(text));
    CHECK(img == Image(2, 2, {0, 255, 128, 64}));
}

TEST_CASE("header comments are skipped") {
    std::string text = "P5\n# made by hand\n2 # width\n1\n255\n";
    text += "\x01\x02";
    CHECK(decode_pgm(bytes_of(text)) == Image(2, 1, {1, 2}));
}

TEST_CASE("1x1 encode is canonical") {
    const auto bytes = encode_pgm(Image(1, 1, {7}));
    CHECK(std::string(bytes.begin(), bytes.end()) == std::string("P5\n1 1\n255\n\x07"));
}

TEST_CASE("decoder errors") {
    CHECK_THROWS_WITH_AS(decode_pgm(bytes_of("P6\n1 1\n255\nabc")), doctest::Contains("unsupported format"), IoError);
    CHECK_THROWS_WITH_AS(decode_pgm(bytes_of("P5\n1 1\n65535\nab")), doctest::Contains("unsupported bit depth"),
                         IoError);
    CHECK_THROWS_AS(decode_pgm(bytes_of("P5\n4 4\n255\nabc")), IoError);
    CHECK_THROWS_AS(decode_pgm(bytes_of("P5\nx 4\n255\n")), IoError);
    CHECK_THROWS_AS(decode_pgm(bytes_of("")), IoError);
    CHECK_THROWS_AS(decode_pgm(bytes_of("P5\n0 4\n255\n")), IoError);
}

TEST_CASE("file round trip") {
    const auto p = test::temp_path("rt.pgm");
    const Image img = test::random_image(32, 32, 11);
    save_image(img, p);
    CHECK(load_image(p) == img);

    // Re-saving a loaded file with comments yields the canonical form.
    std::string text = "P5\n#c\n2 1\n255\n";
    text += "\x05\x06";
    write_file(p, text);
    save_image(load_image(p), p);
    std::ifstream in(p, std::ios::binary);
    const std::string back((std::istreambuf_iterator<char>(in)), {});
    CHECK(back == std::string("P5\n2 1\n255\n\x05\x06"));
    std::filesystem::remove(p);
}

TEST_CASE("io errors") {
    CHECK_THROWS_AS(load_image(test::temp_path("does_not_exist.pgm")), IoError);
    CHECK_THROWS_AS(save_image(Image(), test::temp_path("empty.pgm")), InvalidArgument);
    CHECK_THROWS_AS(save_image(Image(1, 1), "/nonexistent_dir/x.pgm"), IoError);
}

TEST_CASE("partition counts") {
    CHECK(partition(Image(64, 64), 32).blocks.size() == 4);
    CHECK(partition(Image(512, 512), 32).blocks.size() == 256);
    CHECK_THROWS_AS(partition(Image(50, 50), 32), InvalidArgument);
    CHECK_THROWS_AS(partition(Image(64, 64), 1), InvalidArgument);

    const auto padded = partition(Image(50, 40), 32, EdgePolicy::replicate);
    CHECK(padded.grid.blocks_x == 2);
    CHECK(padded.grid.blocks_y == 2);
}

TEST_CASE("partition / assemble is a bijection") {
    for (int k : {8, 16, 32}) {
        const Image img = test::random_image(64, 96, static_cast<std::uint32_t>(k));
        const auto parts = partition(img, k);
        CHECK(assemble(parts.grid, parts.blocks) == img);

        // Every pixel lands in exactly one block.
        std::vector<int> hits(img.size(), 0);
        for (int b = 0; b < parts.grid.block_count(); ++b) {
            for (int y = 0; y < k; ++y) {
                for (int x = 0; x < k; ++x) {
                    const int gx = parts.grid.origin_x(b) + x, gy = parts.grid.origin_y(b) + y;
                    CHECK(parts.blocks[static_cast<std::size_t>(b)].at(x, y) == img.at(gx, gy));
                    ++hits[static_cast<std::size_t>(gy) * 64 + gx];
                }
            }
        }
        CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
    }
}

TEST_CASE("single block and replicate padding round trip") {
    const Image img = test::random_image(32, 32, 3);
    CHECK(assemble(partition(img, 32).grid, partition(img, 32).blocks) == img);

    const Image odd = test::random_image(50, 37, 4);
    const auto parts = partition(odd, 16, EdgePolicy::replicate);
    CHECK(assemble(parts.grid, parts.blocks) == odd);
    // Padding repeats the last column.
    const auto& last = parts.blocks[3];
    CHECK(last.at(15, 0) == odd.at(49, 0));
}

TEST_CASE("swapping two blocks changes exactly their regions") {
    const Image img = test::random_image(64, 32, 5);
    auto parts = partition(img, 32);
    std::swap(parts.blocks[0], parts.blocks[1]);
    const Image swapped = assemble(parts.grid, parts.blocks);
    for (int y = 0; y < 32; ++y) {
        for (int x = 0; x < 64; ++x) {
            const int sx = x < 32 ? x + 32 : x - 32;
            CHECK(swapped.at(x, y) == img.at(sx, y));
        }
    }
}

TEST_CASE("assemble errors") {
    const auto parts = partition(Image(64, 64), 32);
    std::vector<Image> three(parts.blocks.begin(), parts.blocks.begin() + 3);
    CHECK_THROWS_AS(assemble(parts.grid, three), InvalidArgument);
    auto wrong = parts.blocks;
    wrong[2] = Image(16, 16);
    CHECK_THROWS_AS(assemble(parts.grid, wrong), InvalidArgument);
}
