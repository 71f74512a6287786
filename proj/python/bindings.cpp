#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cstring>

#include "wmark/adaptive.hpp"
#include "wmark/attacks.hpp"
#include "wmark/error.hpp"
#include "wmark/evaluation.hpp"
#include "wmark/quality.hpp"
#include "wmark/sidecar.hpp"
#include "wmark/transforms.hpp"

namespace py = pybind11;
using namespace wmark;

using U8Array = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;
using F64Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

namespace {

Image from_numpy(const U8Array& a) {
    if (a.ndim() != 2) throw py::value_error("expected a 2-D uint8 array");
    const auto h = static_cast<int>(a.shape(0));
    const auto w = static_cast<int>(a.shape(1));
    std::vector<std::uint8_t> px(a.data(), a.data() + a.size());
    return Image(w, h, std::move(px));
}

U8Array to_numpy(const Image& img) {
    U8Array out({img.height(), img.width()});
    std::memcpy(out.mutable_data(), img.pixels().data(), img.size());
    return out;
}

CoeffBlock block_from_numpy(const F64Array& a) {
    if (a.ndim() != 2) throw py::value_error("expected a 2-D float array");
    CoeffBlock b;
    b.rows = static_cast<int>(a.shape(0));
    b.cols = static_cast<int>(a.shape(1));
    b.coeffs.assign(a.data(), a.data() + a.size());
    return b;
}

F64Array block_to_numpy(const CoeffBlock& b) {
    F64Array out({b.rows, b.cols});
    std::memcpy(out.mutable_data(), b.coeffs.data(), b.coeffs.size() * sizeof(double));
    return out;
}

EmbedConfig make_config(const std::string& algo, int k, double thr2, const std::string& accept_rule) {
    auto cfg = EmbedConfig::defaults(parse_algo(algo), k);
    cfg.thr2 = thr2;
    cfg.accept_rule = parse_accept_rule(accept_rule);
    return cfg;
}

}  // namespace

PYBIND11_MODULE(_wmark, m) {
    m.doc() = "Block-adaptive SSIM-gated image watermarking";

    // Translators are tried newest first, so the base class goes in first.
    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);
    py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);

    m.def("load_image", [](const std::filesystem::path& p) { return to_numpy(load_image(p)); }, py::arg("path"));
    m.def("save_image", [](const U8Array& a, const std::filesystem::path& p) { save_image(from_numpy(a), p); },
          py::arg("image"), py::arg("path"));

    m.def("mse", [](const U8Array& a, const U8Array& b) { return mse(from_numpy(a), from_numpy(b)); });
    m.def("ssim", [](const U8Array& a, const U8Array& b) { return mean_ssim(from_numpy(a), from_numpy(b)); },
          "Mean SSIM over 8x8 sliding windows");

    m.def("dct2", [](const F64Array& a) { return block_to_numpy(dct2(block_from_numpy(a))); });
    m.def("idct2", [](const F64Array& a) { return block_to_numpy(idct2(block_from_numpy(a))); });
    m.def("dwt2_haar", [](const F64Array& a, int levels) { return block_to_numpy(dwt2_haar(block_from_numpy(a), levels)); },
          py::arg("block"), py::arg("levels") = 1);
    m.def("idwt2_haar",
          [](const F64Array& a, int levels) { return block_to_numpy(idwt2_haar(block_from_numpy(a), levels)); },
          py::arg("coeffs"), py::arg("levels") = 1);

    m.def("gen_sequence", [](std::uint64_t seed, std::uint64_t block, std::size_t n) {
        const auto s = gen_sequence(WatermarkKey{seed, block}, n);
        return std::vector<std::uint8_t>(s.bits().begin(), s.bits().end());
    }, py::arg("seed"), py::arg("block_index"), py::arg("n"));

    m.def(
        "embed",
        [](const U8Array& host, const std::string& algo, std::uint64_t seed, double thr2, int k,
           const std::string& mode, const std::string& accept_rule) {
            const Image img = from_numpy(host);
            const auto cfg = make_config(algo, k, thr2, accept_rule);
            Image marked;
            Sidecar side;
            {
                py::gil_scoped_release release;
                const auto adaptive = embed_image_adaptive(img, seed, cfg);
                if (parse_mode(mode) == EmbedMode::adaptive) {
                    marked = adaptive.watermarked;
                    side = make_sidecar(adaptive, cfg, seed);
                } else {
                    const auto original = embed_image_original(img, adaptive, cfg);
                    marked = original.watermarked;
                    side = make_sidecar(adaptive, original, cfg, seed);
                }
            }
            return py::make_tuple(to_numpy(marked), side.serialize());
        },
        py::arg("image"), py::arg("algo"), py::arg("seed"), py::arg("thr2") = 0.8, py::arg("k") = 32,
        py::arg("mode") = "adaptive", py::arg("accept_rule") = "last_above",
        "Returns (watermarked image, sidecar text)");

    m.def(
        "detect",
        [](const U8Array& test, const std::string& sidecar, std::size_t trials) {
            const auto side = Sidecar::parse(sidecar);
            const auto soft = extract_soft(from_numpy(test), side.layout());
            const auto mark = side.sequence();
            std::vector<double> scores{correlate(soft, mark)};
            for (std::size_t j = 0; j + 1 < trials; ++j) {
                scores.push_back(correlate(soft, background_sequence(side.seed, j, mark.size())));
            }
            return scores;
        },
        py::arg("image"), py::arg("sidecar"), py::arg("trials") = 300,
        "Correlation scores; index 0 is the recorded mark");

    m.def(
        "attack",
        [](const U8Array& img, const std::string& kind, double sigma, int kernel, int quality, std::uint64_t seed) {
            AttackSpec spec;
            spec.kind = parse_attack(kind);
            spec.sigma = sigma;
            spec.kernel = kernel;
            spec.quality = quality;
            spec.seed = seed;
            return to_numpy(apply_attack(from_numpy(img), spec));
        },
        py::arg("image"), py::arg("kind"), py::arg("sigma") = 10.0, py::arg("kernel") = 3, py::arg("quality") = 50,
        py::arg("seed") = 0);

    m.def(
        "compare",
        [](const U8Array& img, std::uint64_t seed, double thr2, int k) {
            const auto configs = default_configs(k, thr2);
            return format_csv(run_comparison(from_numpy(img), "image", seed, configs));
        },
        py::arg("image"), py::arg("seed") = 1, py::arg("thr2") = 0.8, py::arg("k") = 32,
        "Adaptive vs whole-image comparison for all four algorithms, as CSV text");
}
