#!/usr/bin/env python3
"""Regenerate assets/sample.jpg, the bundled demo image.

A procedurally textured cat portrait, saved as JPEG. The compressed bytes
are what the staged randomness comparison needs: biased enough that the
chi-square of the raw file clearly exceeds that of its XOR-randomized
form, yet close enough to uniform that the randomized plaintext carries
no gross structure. Deterministic (fixed-seed noise), so the committed
asset can be rebuilt byte-for-byte with the same Pillow version.
"""
from __future__ import annotations

import io
import pathlib

import numpy as np
from PIL import Image, ImageDraw, ImageFilter

SIZE = 512
SEED = 20240917

out_path = pathlib.Path(__file__).resolve().parents[1] / "assets" / "sample.jpg"


def base_scene(rng: np.random.Generator) -> Image.Image:
    y = np.linspace(0, 1, SIZE)[:, None]
    sky = 150 + 70 * (1 - y)
    grain = rng.normal(0, 9, (SIZE, SIZE))
    img = np.clip(sky + grain, 0, 255).astype(np.uint8)
    return Image.fromarray(img, "L")


def draw_cat(img: Image.Image, rng: np.random.Generator) -> Image.Image:
    d = ImageDraw.Draw(img)
    d.ellipse((110, 378, 430, 470), fill=58)
    d.ellipse((150, 240, 380, 430), fill=96)          # body
    d.line((360, 400, 460, 300), fill=96, width=26)   # tail
    d.ellipse((438, 282, 474, 318), fill=96)
    d.ellipse((165, 110, 355, 300), fill=104)         # head
    d.polygon((180, 160, 205, 60, 262, 140), fill=104)
    d.polygon((340, 160, 315, 60, 258, 140), fill=104)
    d.polygon((192, 148, 208, 84, 244, 134), fill=52)
    d.polygon((328, 148, 312, 84, 276, 134), fill=52)
    d.ellipse((205, 180, 240, 222), fill=190)          # eyes
    d.ellipse((280, 180, 315, 222), fill=190)
    d.ellipse((216, 190, 230, 214), fill=28)
    d.ellipse((291, 190, 305, 214), fill=28)
    d.polygon((250, 232, 270, 232, 260, 248), fill=40)
    for y0, y1 in ((200, 188), (214, 214), (228, 240)):
        d.line((120, y1, 205, y0), fill=36, width=3)
        d.line((315, y0, 400, y1), fill=36, width=3)
    for x in (210, 250, 290):                          # stripes
        d.line((x, 300, x + 22, 370), fill=60, width=12)
    # fur texture
    arr = np.asarray(img).astype(np.float64)
    arr += rng.normal(0, 14, arr.shape) * (arr < 140)
    return Image.fromarray(np.clip(arr, 0, 255).astype(np.uint8), "L")


def main() -> None:
    rng = np.random.default_rng(SEED)
    img = draw_cat(base_scene(rng), rng)
    img = img.filter(ImageFilter.GaussianBlur(0.6))
    buf = io.BytesIO()
    img.save(buf, "JPEG", quality=96)
    data = buf.getvalue()
    # one measurement per state over the 2-bit blocks of this file must
    # give a sampled stream of >= 64 KiB
    if len(data) < 66000:
        raise SystemExit(f"asset came out too small: {len(data)} bytes")
    out_path.parent.mkdir(parents=True, exist_ok=True)
    out_path.write_bytes(data)
    print(f"wrote {out_path} ({len(data)} bytes)")


if __name__ == "__main__":
    main()
