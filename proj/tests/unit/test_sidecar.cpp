#include <doctest.h>

#include "helpers.hpp"
#include "wmark/error.hpp"
#include "wmark/sidecar.hpp"

using namespace wmark;

TEST_CASE("sidecar round trip for every algorithm and mode") {
    const Image img = test::textured_image(64, 64, 30);
    for (Algo a : kAllAlgos) {
        const auto cfg = EmbedConfig::defaults(a);
        const auto adaptive = embed_image_adaptive(img, 99, cfg);
        const auto original = embed_image_original(img, adaptive, cfg);
        for (const Sidecar& s : {make_sidecar(adaptive, cfg, 99), make_sidecar(adaptive, original, cfg, 99)}) {
            const auto text = s.serialize();
            const auto back = Sidecar::parse(text);
            CHECK(back == s);
            CHECK(back.serialize() == text);
            CHECK(back.sequence() == adaptive.total_sequence);
        }
        // The recorded layouts reproduce the harness layouts.
        const auto sa = make_sidecar(adaptive, cfg, 99);
        CHECK(extract_soft(adaptive.watermarked, sa.layout()) ==
              extract_soft(adaptive.watermarked, adaptive.layout(cfg)));
        const auto so = make_sidecar(adaptive, original, cfg, 99);
        CHECK(extract_soft(original.watermarked, so.layout()) == extract_soft(original.watermarked, original.layout));
    }
}

TEST_CASE("sidecar file io") {
    const Image img = test::textured_image(64, 32, 31);
    const auto cfg = EmbedConfig::defaults(Algo::dwt);
    const auto s = make_sidecar(embed_image_adaptive(img, 1, cfg), cfg, 1);
    const auto p = test::temp_path("side.txt");
    s.save(p);
    CHECK(Sidecar::load(p) == s);
    std::filesystem::remove(p);
    CHECK_THROWS_AS(Sidecar::load(p), IoError);
}

TEST_CASE("corrupt sidecars are rejected") {
    const Image img = test::textured_image(64, 64, 32);
    const auto cfg = EmbedConfig::defaults(Algo::dct);
    const auto good = make_sidecar(embed_image_adaptive(img, 1, cfg), cfg, 1).serialize();

    auto replace = [&](const std::string& from, const std::string& to) {
        std::string t = good;
        t.replace(t.find(from), from.size(), to);
        return t;
    };
    CHECK_THROWS_AS(Sidecar::parse("garbage"), IoError);
    CHECK_THROWS_AS(Sidecar::parse(""), IoError);
    CHECK_THROWS_AS(Sidecar::parse(replace("format=wmark-sidecar/1", "format=other")), IoError);
    CHECK_THROWS_AS(Sidecar::parse(replace("algo=dct", "algo=fft")), IoError);
    CHECK_THROWS_AS(Sidecar::parse(replace("seed=1", "seed=-1")), IoError);
    CHECK_THROWS_AS(Sidecar::parse(replace("k=32", "k=16")), IoError);  // block count no longer matches
    CHECK_THROWS_AS(Sidecar::parse(replace("thr2=", "thr2=x")), IoError);
    CHECK_THROWS_AS(Sidecar::parse(good + "extra=1\n"), IoError);
    CHECK_THROWS_AS(Sidecar::parse(good + "seed=2\n"), IoError);
    CHECK_THROWS_AS(Sidecar::parse(replace("regions=0", "regions=1")), IoError);
}
