#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "helpers.hpp"
#include "wmark/error.hpp"
#include "wmark/transforms.hpp"

using namespace wmark;

namespace {

double max_abs_diff(const CoeffBlock& a, const CoeffBlock& b) {
    double m = 0;
    for (std::size_t i = 0; i < a.coeffs.size(); ++i) m = std::max(m, std::abs(a.coeffs[i] - b.coeffs[i]));
    return m;
}

double direct_energy(const CoeffBlock& b) {
    long double e = 0;
    for (double v : b.coeffs) e += static_cast<long double>(v) * v;
    return static_cast<double>(e);
}

// O(n^4) textbook DCT-II with orthonormal scaling.
CoeffBlock naive_dct(const CoeffBlock& x) {
    const int n = x.rows;
    CoeffBlock out{n, n, std::vector<double>(x.coeffs.size())};
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v) {
            long double s = 0;
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c)
                    s += x.at(r, c) * std::cos((2 * r + 1) * u * std::numbers::pi_v<long double> / (2 * n)) *
                         std::cos((2 * c + 1) * v * std::numbers::pi_v<long double> / (2 * n));
            const long double au = u == 0 ? std::sqrt(1.0L / n) : std::sqrt(2.0L / n);
            const long double av = v == 0 ? std::sqrt(1.0L / n) : std::sqrt(2.0L / n);
            out.at(u, v) = static_cast<double>(au * av * s);
        }
    return out;
}

}  // namespace

TEST_CASE("constant block DCT") {
    CoeffBlock b{4, 4, std::vector<double>(16, 8.0)};
    const auto c = dct2(b);
    CHECK(c.at(0, 0) == doctest::Approx(32.0).epsilon(1e-14));
    for (std::size_t i = 1; i < 16; ++i) CHECK(std::abs(c.coeffs[i]) < 1e-12);

    CoeffBlock dc{4, 4, std::vector<double>(16, 0.0)};
    dc.at(0, 0) = 32.0;
    for (double v : idct2(dc).coeffs) CHECK(v == doctest::Approx(8.0).epsilon(1e-14));
    for (double v : idct2(CoeffBlock{4, 4, std::vector<double>(16, 0.0)}).coeffs) CHECK(v == 0.0);
}

TEST_CASE("DCT matches the textbook sum") {
    const auto x = test::random_block(8, 8, 3);
    CHECK(max_abs_diff(dct2(x), naive_dct(x)) < 1e-10);
}

TEST_CASE("DCT round trips and Parseval") {
    for (std::uint32_t s = 0; s < 10; ++s) {
        const auto x = test::random_block(32, 32, s);
        const auto c = dct2(x);
        CHECK(max_abs_diff(idct2(c), x) < 1e-8);
        CHECK(max_abs_diff(dct2(idct2(x)), x) < 1e-8);
        CHECK(std::abs(direct_energy(c) - direct_energy(x)) / direct_energy(x) < 1e-6);
    }
    const auto rect = test::random_block(24, 40, 9);
    CHECK(max_abs_diff(idct2(dct2(rect)), rect) < 1e-8);
}

TEST_CASE("zigzag orders") {
    CHECK(zigzag(2) == ZigzagOrder{{0, 0}, {0, 1}, {1, 0}, {1, 1}});
    CHECK(zigzag(3) == ZigzagOrder{{0, 0}, {0, 1}, {1, 0}, {2, 0}, {1, 1}, {0, 2}, {1, 2}, {2, 1}, {2, 2}});
    // Start of the JPEG 8x8 table.
    const auto z8 = zigzag(8);
    CHECK(z8[6] == std::pair{0, 3});
    CHECK(z8[7] == std::pair{1, 2});
    CHECK(z8[8] == std::pair{2, 1});
    CHECK(z8[63] == std::pair{7, 7});

    for (auto [r, c] : std::vector<std::pair<int, int>>{{32, 32}, {5, 9}, {9, 5}}) {
        const auto z = zigzag(r, c);
        std::set<std::pair<int, int>> seen(z.begin(), z.end());
        CHECK(seen.size() == static_cast<std::size_t>(r * c));
        CHECK(z.front() == std::pair{0, 0});
        for (std::size_t i = 1; i < z.size(); ++i) CHECK(z[i].first + z[i].second >= z[i - 1].first + z[i - 1].second);
    }
}

TEST_CASE("scan / unscan") {
    const auto c = test::random_block(8, 8, 4);
    const auto z = zigzag(8);
    const auto flat = scan(c, z);
    CHECK(flat.front() == c.at(0, 0));
    CHECK(unscan(flat, z, 8, 8).coeffs == c.coeffs);
    std::vector<double> short_list(63);
    CHECK_THROWS_AS(unscan(short_list, z, 8, 8), InvalidArgument);
}

TEST_CASE("Haar basics") {
    CoeffBlock ones{2, 2, {1, 1, 1, 1}};
    const auto h = dwt2_haar(ones, 1);
    CHECK(h.at(0, 0) == doctest::Approx(2.0));
    CHECK(h.at(0, 1) == 0.0);
    CHECK(h.at(1, 0) == 0.0);
    CHECK(h.at(1, 1) == 0.0);

    CoeffBlock approx{2, 2, {2 * 5.0, 0, 0, 0}};
    for (double v : idwt2_haar(approx, 1).coeffs) CHECK(v == doctest::Approx(5.0));
    for (double v : idwt2_haar(CoeffBlock{4, 4, std::vector<double>(16, 0.0)}, 2).coeffs) CHECK(v == 0.0);

    CoeffBlock flat{32, 32, std::vector<double>(1024, 77.0)};
    const auto fc = dwt2_haar(flat, 2);
    for (auto i : detail_scan(32, 32, 2)) CHECK(fc.coeffs[i] == 0.0);
}

TEST_CASE("Haar round trips and Parseval") {
    for (std::uint32_t s = 0; s < 10; ++s) {
        const auto x = test::random_block(32, 32, s);
        for (int levels : {1, 2, 3}) {
            const auto c = dwt2_haar(x, levels);
            CHECK(max_abs_diff(idwt2_haar(c, levels), x) < 1e-10);
            CHECK(std::abs(direct_energy(c) - direct_energy(x)) / direct_energy(x) < 1e-6);
        }
    }
    CHECK_THROWS_AS(dwt2_haar(test::random_block(12, 12, 1), 3), InvalidArgument);
    CHECK_THROWS_AS(dwt2_haar(test::random_block(8, 8, 1), 0), InvalidArgument);
}

TEST_CASE("detail scan layout") {
    const auto scan2 = detail_scan(32, 32, 2);
    CHECK(scan2.size() == 960);
    std::set<std::size_t> unique(scan2.begin(), scan2.end());
    CHECK(unique.size() == 960);
    // Level 1 first: top-right band starts at (0, 16).
    CHECK(scan2[0] == 16);
    CHECK(level1_detail_count(32, 32) == 768);
    // Level 2 follows: top-right band of the 16x16 approximation starts at (0, 8).
    CHECK(scan2[768] == 8);
    // The approximation band is never listed.
    for (auto i : scan2) CHECK(!((i / 32) < 8 && (i % 32) < 8));
}
