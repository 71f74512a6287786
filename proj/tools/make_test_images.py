#!/usr/bin/env python3
"""Export the grayscale test images used by the test suites.

The images come from scikit-image's bundled sample data. Colour images are
converted to luminance and every image is centre-cropped so both sides are
multiples of 64 (capped at 512).
"""
import pathlib
import sys

import numpy as np
from skimage import color, data

CORPUS = ["astronaut", "brick", "camera", "chelsea", "coffee", "coins", "moon", "rocket"]


def to_gray(img):
    if img.ndim == 3:
        img = color.rgb2gray(img[..., :3])
        img = np.round(img * 255.0)
    return np.clip(img, 0, 255).astype(np.uint8)


def crop(img, multiple=64, cap=512):
    h, w = img.shape
    nh, nw = min(h - h % multiple, cap), min(w - w % multiple, cap)
    y0, x0 = (h - nh) // 2, (w - nw) // 2
    return img[y0:y0 + nh, x0:x0 + nw]


def write_pgm(path, img):
    h, w = img.shape
    with open(path, "wb") as f:
        f.write(b"P5\n%d %d\n255\n" % (w, h))
        f.write(np.ascontiguousarray(img).tobytes())


def main(out_dir):
    out = pathlib.Path(out_dir)
    (out / "corpus").mkdir(parents=True, exist_ok=True)
    for name in CORPUS:
        img = crop(to_gray(getattr(data, name)()))
        write_pgm(out / "corpus" / f"{name}.pgm", img)
    write_pgm(out / "camera.pgm", crop(to_gray(data.camera())))


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "tests/data")
