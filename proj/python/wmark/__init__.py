"""Block-adaptive SSIM-gated image watermarking."""

from ._wmark import (
    Error,
    InvalidArgument,
    IoError,
    attack,
    compare,
    dct2,
    detect,
    dwt2_haar,
    embed,
    gen_sequence,
    idct2,
    idwt2_haar,
    load_image,
    mse,
    save_image,
    ssim,
)

__all__ = [
    "Error",
    "InvalidArgument",
    "IoError",
    "attack",
    "compare",
    "dct2",
    "detect",
    "dwt2_haar",
    "embed",
    "gen_sequence",
    "idct2",
    "idwt2_haar",
    "load_image",
    "mse",
    "save_image",
    "ssim",
]
