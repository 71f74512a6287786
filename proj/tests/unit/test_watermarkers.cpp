#include <doctest.h>

#include <cmath>
#include <numeric>

#include "helpers.hpp"
#include "wmark/attacks.hpp"
#include "wmark/error.hpp"
#include "wmark/watermarkers.hpp"

using namespace wmark;

namespace {

int max_pixel_diff(const Image& a, const Image& b) {
    int m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(int(a.pixels()[i]) - int(b.pixels()[i])));
    return m;
}

Image midtone_block(int k, std::uint32_t seed) {
    Image img = test::random_image(k, k, seed);
    for (auto& p : img.pixels()) p = static_cast<std::uint8_t>(64 + p / 2);
    return img;
}

}  // namespace

TEST_CASE("LSB substitution") {
    const Image host = test::random_image(8, 8, 1), mark = test::random_image(8, 8, 2);
    CHECK(embed_lsb(host, mark, 0) == host);
    CHECK(embed_lsb(host, mark, 8) == mark);
    CHECK(embed_lsb(Image(1, 1, 0b10110000), Image(1, 1, 0b11000000), 2).at(0, 0) == 179);
    CHECK_THROWS_AS(embed_lsb(host, Image(4, 4), 1), InvalidArgument);
    CHECK_THROWS_AS(embed_lsb(host, mark, 9), InvalidArgument);
}

TEST_CASE("LSB extraction recovers the top planes") {
    const Image host = test::random_image(16, 16, 3), mark = test::random_image(16, 16, 4);
    for (int n = 1; n <= 8; ++n) {
        const Image back = extract_lsb(embed_lsb(host, mark, n), n);
        const auto keep = static_cast<std::uint8_t>(0xff << (8 - n));
        for (std::size_t i = 0; i < mark.size(); ++i) CHECK(back.pixels()[i] == (mark.pixels()[i] & keep));
    }
    CHECK(extract_lsb(host, 0) == Image(16, 16, 0));
}

TEST_CASE("LSB plane is fragile under JPEG") {
    const Image host = test::textured_image(64, 64, 5), mark = test::random_image(64, 64, 6);
    const Image attacked = jpeg_like(embed_lsb(host, mark, 1), 50);
    const Image back = extract_lsb(attacked, 1);
    std::size_t errors = 0;
    for (std::size_t i = 0; i < mark.size(); ++i) errors += (back.pixels()[i] >> 7) != (mark.pixels()[i] >> 7);
    CHECK(errors > 0);
}

TEST_CASE("LSB carrier layout") {
    const Image host = test::random_image(4, 4, 7);
    const auto lsb = make_carrier(host, AlgoParams{Algo::lsb});
    CHECK(lsb->capacity() == 128);
    // 16 bits fill exactly one plane: the LSB.
    const auto bits16 = gen_sequence({1, 0}, 16);
    const Image one = lsb->embed(bits16, 0.0);
    for (std::size_t i = 0; i < 16; ++i) {
        CHECK((one.pixels()[i] & 1U) == bits16.bit(i));
        CHECK((one.pixels()[i] & ~1U) == (host.pixels()[i] & ~1U));
    }
    // 128 bits overwrite every plane: the result is the mark image itself.
    const auto bits128 = gen_sequence({1, 0}, 128);
    CHECK(lsb->embed(bits128, 0.0) == lsb_mark_image(bits128, 4, 4));
    const auto soft = region_soft_values(one, AlgoParams{Algo::lsb}, 16);
    for (std::size_t i = 0; i < 16; ++i) CHECK(soft[i] == bits16.bipolar(i));
}

TEST_CASE("additive rule") {
    CHECK(additive_rule(10.0, +1, 0.1) == doctest::Approx(11.0));
    CHECK(additive_rule(-10.0, +1, 0.1) == doctest::Approx(-9.0));
    CHECK(additive_rule(10.0, -1, 0.1) == doctest::Approx(9.0));
    CHECK(additive_rule(0.0, +1, 0.7) == 0.0);
    CHECK(additive_rule(0.0, -1, 0.7) == 0.0);
    CHECK(additive_rule(3.5, -1, 0.0) == 3.5);
}

TEST_CASE("DCT embedding") {
    const Image block = test::textured_image(32, 32, 8);
    const auto seq = gen_sequence({9, 0}, 500);
    CHECK(max_pixel_diff(embed_dct(block, seq, {64, 0.0, 500}), block) <= 1);
    CHECK(embed_dct(block, seq, {64, 0.3, 0}) == block);

    // Coefficient changes carry the sign of x wherever |t| is large enough to
    // survive rounding.
    const DctEmbedParams p{64, 0.2, 300};
    const auto before = scan(dct2(to_samples(block)), zigzag(32));
    const auto after = scan(dct2(to_samples(embed_dct(block, seq, p))), zigzag(32));
    int checked = 0;
    for (std::size_t i = 0; i < p.m; ++i) {
        const double t = before[64 + i];
        if (std::abs(t) * p.alpha < 4.0) continue;
        CHECK((after[64 + i] - t) * seq.bipolar(i) > 0);
        ++checked;
    }
    CHECK(checked > 20);

    CHECK_THROWS_AS(embed_dct(block, seq, {64, 0.1, 1000}), InvalidArgument);
    CHECK_THROWS_AS(embed_dct(block, seq, {0, 0.1, 10}), InvalidArgument);
    CHECK_THROWS_AS(embed_dct(block, gen_sequence({9, 0}, 2000), {64, 0.1, 1000}), InvalidArgument);
}

TEST_CASE("DCT leaves zero coefficients alone") {
    // A horizontal cosine has energy in a single coefficient.
    CoeffBlock c{16, 16, std::vector<double>(256, 0.0)};
    c.at(0, 0) = 128.0 * 16;
    c.at(0, 3) = 200.0;
    const Image block = to_image(idct2(c));
    const auto seq = gen_sequence({1, 0}, 200);
    const Image marked = embed_dct(block, seq, {8, 0.5, 200});
    const auto d = dct2(to_samples(marked));
    const auto o = dct2(to_samples(block));
    // Only rounding noise appears off the support.
    for (int r = 0; r < 16; ++r)
        for (int k = 0; k < 16; ++k) {
            if ((r == 0 && k == 0) || (r == 0 && k == 3)) continue;
            CHECK(std::abs(d.at(r, k) - o.at(r, k)) < 1.5);
        }
}

TEST_CASE("DWT embedding") {
    const Image block = midtone_block(32, 10);
    const auto seq = gen_sequence({2, 0}, 960);
    CHECK(max_pixel_diff(embed_dwt(block, seq, 0.0, 960), block) <= 1);
    CHECK(embed_dwt(Image(32, 32, 90), seq, 0.8, 960) == Image(32, 32, 90));
    CHECK_THROWS_AS(embed_dwt(block, seq, 0.1, 961), InvalidArgument);

    const auto details = detail_scan(32, 32, 2);
    auto detail_energy = [&](const Image& img) {
        const auto c = dwt2_haar(to_samples(img), 2);
        double e = 0;
        for (auto i : details) e += c.coeffs[i] * c.coeffs[i];
        return e;
    };
    CHECK(detail_energy(embed_dwt(block, seq, 0.5, 960)) > detail_energy(block));

    // The approximation band is untouched up to rounding.
    const auto a = dwt2_haar(to_samples(block), 2), b = dwt2_haar(to_samples(embed_dwt(block, seq, 0.5, 960)), 2);
    for (int r = 0; r < 8; ++r)
        for (int k = 0; k < 8; ++k) CHECK(std::abs(a.at(r, k) - b.at(r, k)) < 2.0);
}

TEST_CASE("DWT ranking is by magnitude with scan tie-break") {
    CoeffBlock c{4, 4, std::vector<double>(16, 0.0)};
    const auto scan1 = detail_scan(4, 4, 1);
    c.coeffs[scan1[5]] = -9.0;
    c.coeffs[scan1[2]] = 9.0;
    c.coeffs[scan1[7]] = 3.0;
    const auto ranked = rank_details(c, 1);
    CHECK(ranked[0] == scan1[2]);
    CHECK(ranked[1] == scan1[5]);
    CHECK(ranked[2] == scan1[7]);
    CHECK(ranked[3] == scan1[0]);
}

TEST_CASE("Walsh codes") {
    CHECK(walsh_codes(2) == std::vector<std::vector<int>>{{1, 1}, {1, -1}});
    CHECK(walsh_codes(4) ==
          std::vector<std::vector<int>>{{1, 1, 1, 1}, {1, -1, 1, -1}, {1, 1, -1, -1}, {1, -1, -1, 1}});
    const auto w = walsh_codes(64);
    for (int i = 0; i < 64; ++i)
        for (int j = 0; j < 64; ++j) {
            int dot = 0;
            for (int t = 0; t < 64; ++t) dot += w[i][t] * w[j][t];
            CHECK(dot == (i == j ? 64 : 0));
        }
    CHECK_THROWS_AS(walsh_codes(6), InvalidArgument);
}

TEST_CASE("FWHT agrees with the code matrix") {
    const auto w = walsh_codes(16);
    std::vector<double> v(16);
    for (int i = 0; i < 16; ++i) v[i] = std::sin(1.0 + i);
    std::vector<double> expect(16, 0.0);
    for (int g = 0; g < 16; ++g)
        for (int i = 0; i < 16; ++i) expect[i] += v[g] * w[g][i];
    fwht(v);
    for (int i = 0; i < 16; ++i) CHECK(v[i] == doctest::Approx(expect[i]).epsilon(1e-12));
}

TEST_CASE("multilevel symbols") {
    const auto w = multilevel_weights(4);
    CHECK(std::accumulate(w.begin(), w.end(), 0.0) == doctest::Approx(1.0));
    CHECK(w[0] == doctest::Approx(8.0 / 15));
    CHECK(group_symbol(WatermarkSequence({1, 1, 1, 1}), 0, w) == doctest::Approx(1.0));
    CHECK(group_symbol(WatermarkSequence({0, 0, 0, 0}), 0, w) == doctest::Approx(-1.0));
    CHECK(group_symbol(WatermarkSequence({1, 0, 0, 0}), 0, w) == doctest::Approx(1.0 / 15));
}

TEST_CASE("CDMA embedding") {
    const Image block = midtone_block(32, 11);
    CdmaParams p;
    const auto seq = gen_sequence({3, 0}, 64);
    CHECK(max_pixel_diff(embed_cdma(block, seq, p, 0.0), block) <= 1);

    // Opposite bits produce opposite deltas.
    const auto ones = WatermarkSequence({1, 1, 1, 1});
    const auto zeros = WatermarkSequence({0, 0, 0, 0});
    const Image up = embed_cdma(block, ones, p, 6.0), down = embed_cdma(block, zeros, p, 6.0);
    for (std::size_t i = 0; i < block.size(); ++i) {
        const int d1 = int(up.pixels()[i]) - int(block.pixels()[i]);
        const int d0 = int(down.pixels()[i]) - int(block.pixels()[i]);
        CHECK(std::abs(d1 + d0) <= 1);
    }

    CHECK_THROWS_AS(embed_cdma(block, WatermarkSequence({1, 0, 1}), p, 1.0), InvalidArgument);
    CHECK_THROWS_AS(embed_cdma(block, gen_sequence({3, 0}, 4 * 65), p, 1.0), InvalidArgument);
    p.code_len = 48;
    CHECK_THROWS_AS(embed_cdma(block, seq, p, 1.0), InvalidArgument);
}

TEST_CASE("orthogonal codes do not leak") {
    // Group 2 only, spread in the coefficient domain, then despread.
    const int L = 64;
    std::vector<double> spread(L, 0.0);
    spread[1] = 0.73;
    fwht(spread);
    CoeffBlock level1{32, 32, std::vector<double>(1024, 0.0)};
    const auto carriers = cdma_carriers(32, 32, L);
    for (int i = 0; i < L; ++i) level1.coeffs[carriers[i]] = spread[i];
    const auto d = cdma_despread(level1, carriers);
    CHECK(d[0] == 0.0);
    CHECK(d[1] == doctest::Approx(0.73));
    for (int g = 2; g < L; ++g) CHECK(d[g] == 0.0);
}

TEST_CASE("CDMA carriers") {
    const auto c = cdma_carriers(32, 32, 64);
    const auto scan1 = detail_scan(32, 32, 1);
    CHECK(c.size() == 64);
    CHECK(c[0] == scan1[0]);
    CHECK(c[1] == scan1[12]);
    CHECK_THROWS_AS(cdma_carriers(8, 8, 64), InvalidArgument);
}

TEST_CASE("soft values recover the mark") {
    const Image block = test::textured_image(32, 32, 12);
    for (Algo algo : {Algo::dct, Algo::dwt, Algo::cdma}) {
        AlgoParams params{algo};
        const auto carrier = make_carrier(block, params);
        const std::size_t n = algo == Algo::cdma ? 32 : 200;
        const auto seq = gen_sequence({4, 0}, n);
        const double strength = algo == Algo::cdma ? 8.0 : 0.3;
        const Image marked = carrier->embed(seq, strength);
        const auto pos = carrier->positions(n);
        const auto soft_marked = region_soft_values(marked, params, n, pos);
        const auto soft_host = region_soft_values(block, params, n, pos);
        std::vector<double> diff(n);
        for (std::size_t i = 0; i < n; ++i) diff[i] = soft_marked[i] - soft_host[i];
        CHECK(correlate(diff, seq) > 0.0);
        CHECK(correlate(soft_marked, seq) > correlate(soft_marked, gen_sequence({5, 0}, n)));
    }
}

TEST_CASE("correlation detection") {
    const Image img = test::textured_image(64, 64, 13);
    const auto seq = gen_sequence({6, 0}, 1500);
    AlgoParams params{Algo::dct};
    params.dct_skip = 100;
    const Image marked = make_carrier(img, params)->embed(seq, 0.2);
    EmbedLayout layout;
    layout.params = params;
    layout.blockwise = false;
    layout.width = 64;
    layout.height = 64;
    layout.region_bits = {1500};

    const double truth = correlation_detect(marked, seq, layout);
    for (std::uint64_t j = 0; j < 299; ++j) CHECK(truth > correlation_detect(marked, gen_sequence({777, j}, 1500), layout));
    CHECK(correlation_detect(marked, seq.negated(), layout) == doctest::Approx(-truth).epsilon(1e-12));

    const auto soft = extract_soft(marked, layout);
    CHECK_THROWS_AS(correlate(soft, WatermarkSequence()), InvalidArgument);
    CHECK_THROWS_AS(correlate(soft, seq.prefix(10)), InvalidArgument);
    CHECK_THROWS_AS(extract_soft(Image(32, 32), layout), InvalidArgument);
}
