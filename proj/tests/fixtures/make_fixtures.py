#!/usr/bin/env python3
"""Regenerates fixture_images.hpp: tiny images with formula-defined pixel
values, exercising every decode path of the image reader. The C++ tests
recompute the same formulas and assert per-sample equality."""

import io
import struct
import zlib

from PIL import Image


def png8_gradient():
    # v(x, y) = 7 + 3x + 11y, 6 wide x 4 tall
    img = Image.new("L", (6, 4))
    img.putdata([7 + 3 * x + 11 * y for y in range(4) for x in range(6)])
    buf = io.BytesIO()
    img.save(buf, format="PNG")
    return buf.getvalue()


def png16_ramp():
    # v(x, y) = 123 + 1000x + 137y, 5 wide x 3 tall
    img = Image.new("I;16", (5, 3))
    img.putdata([123 + 1000 * x + 137 * y for y in range(3) for x in range(5)])
    buf = io.BytesIO()
    img.save(buf, format="PNG")
    return buf.getvalue()


def png_rgb():
    img = Image.new("RGB", (4, 4), (10, 20, 30))
    buf = io.BytesIO()
    img.save(buf, format="PNG")
    return buf.getvalue()


def png_palette():
    img = Image.new("P", (4, 4), 0)
    buf = io.BytesIO()
    img.save(buf, format="PNG")
    return buf.getvalue()


def pil_tiff(mode, size, values, **save_kwargs):
    img = Image.new(mode, size)
    img.putdata(values)
    buf = io.BytesIO()
    img.save(buf, format="TIFF", **save_kwargs)
    return buf.getvalue()


def tiff8_none_le():
    # v(x, y) = 5 + 2x + 9y, 6 wide x 4 tall
    return pil_tiff("L", (6, 4), [5 + 2 * x + 9 * y for y in range(4) for x in range(6)])


def tiff16_deflate_le():
    # v(x, y) = 100 + 500x + 77y, 5 wide x 3 tall
    return pil_tiff(
        "I;16",
        (5, 3),
        [100 + 500 * x + 77 * y for y in range(3) for x in range(5)],
        compression="tiff_adobe_deflate",
    )


def tiff8_lzw_le():
    # v(x, y) = (13 * x + 7 * y) % 200, 16 wide x 8 tall (worth compressing)
    return pil_tiff(
        "L",
        (16, 8),
        [(13 * x + 7 * y) % 200 for y in range(8) for x in range(16)],
        compression="tiff_lzw",
    )


def handmade_tiff(little_endian, bits, width, height, rows_per_strip, value,
                  predictor, compress):
    """Strip-organized grayscale TIFF built byte by byte."""
    e = "<" if little_endian else ">"

    def rows(y0, y1):
        data = b""
        for y in range(y0, y1):
            row = [value(x, y) for x in range(width)]
            if predictor == 2:
                row = [row[0]] + [(row[i] - row[i - 1]) % (1 << bits)
                                  for i in range(1, width)]
            fmt = "B" if bits == 8 else "H"
            data += struct.pack(f"{e}{width}{fmt}", *row)
        return data

    strips = []
    y = 0
    while y < height:
        top = min(y + rows_per_strip, height)
        raw = rows(y, top)
        strips.append(zlib.compress(raw) if compress else raw)
        y = top

    entries = []  # (tag, type, count, value or bytes-offset placeholder)

    def entry(tag, typ, count, value):
        entries.append((tag, typ, count, value))

    n_strips = len(strips)
    # IFD is written right after the 8-byte header; offset/count arrays are
    # inlined into the IFD entry when there is a single strip
    ifd_off = 8
    ifd_size = 2 + 12 * 12 + 4
    arrays_off = ifd_off + ifd_size
    array_bytes = 0 if n_strips == 1 else 4 * n_strips
    offsets_array_off = arrays_off
    counts_array_off = arrays_off + array_bytes
    data_off = counts_array_off + array_bytes

    strip_offsets = []
    pos = data_off
    for s in strips:
        strip_offsets.append(pos)
        pos += len(s)

    def long_list(values, inline_off):
        if len(values) == 1:
            return values[0], b""
        return inline_off, b"".join(struct.pack(e + "I", v) for v in values)

    offsets_value, offsets_bytes = long_list(strip_offsets, offsets_array_off)
    counts_value, counts_bytes = long_list([len(s) for s in strips], counts_array_off)

    entry(256, 3, 1, width)
    entry(257, 3, 1, height)
    entry(258, 3, 1, bits)
    entry(259, 3, 1, 8 if compress else 1)
    entry(262, 3, 1, 1)  # BlackIsZero
    entry(273, 4, n_strips, offsets_value)
    entry(277, 3, 1, 1)
    entry(278, 3, 1, rows_per_strip)
    entry(279, 4, n_strips, counts_value)
    entry(284, 3, 1, 1)
    entry(317, 3, 1, predictor)
    entry(339, 3, 1, 1)

    out = struct.pack(e + "2sHI", b"II" if little_endian else b"MM", 42, ifd_off)
    out += struct.pack(e + "H", len(entries))
    for tag, typ, count, value in sorted(entries):
        if typ == 3 and count == 1:
            value_bytes = struct.pack(e + "HH", value, 0)
        else:
            value_bytes = struct.pack(e + "I", value)
        out += struct.pack(e + "HHI", tag, typ, count) + value_bytes
    out += struct.pack(e + "I", 0)  # no next IFD
    out += offsets_bytes + counts_bytes
    for s in strips:
        out += s
    return out


def tiff8_le_pred2_deflate():
    # v(x, y) = 7 + 3x + 11y, 4x4, two strips
    return handmade_tiff(True, 8, 4, 4, 2, lambda x, y: 7 + 3 * x + 11 * y, 2, True)


def tiff16_mm_pred2_deflate():
    # v(x, y) = 123 + 300x + 1000y, 3 wide x 4 tall, two strips
    return handmade_tiff(False, 16, 3, 4, 2,
                         lambda x, y: 123 + 300 * x + 1000 * y, 2, True)


def tiff8_white_is_zero():
    # stored v(x, y) = x + 4y on photometric 0; loader must invert
    body = handmade_tiff(True, 8, 3, 3, 3, lambda x, y: x + 4 * y, 1, False)
    # patch tag 262 from 1 to 0: single IFD, find the entry
    out = bytearray(body)
    count = struct.unpack("<H", out[8:10])[0]
    for i in range(count):
        off = 10 + 12 * i
        tag = struct.unpack("<H", out[off:off + 2])[0]
        if tag == 262:
            out[off + 8:off + 10] = struct.pack("<H", 0)
    return bytes(out)


FIXTURES = [
    ("png8_gradient", png8_gradient()),
    ("png16_ramp", png16_ramp()),
    ("png_rgb", png_rgb()),
    ("png_palette", png_palette()),
    ("tiff8_none_le", tiff8_none_le()),
    ("tiff16_deflate_le", tiff16_deflate_le()),
    ("tiff8_lzw_le", tiff8_lzw_le()),
    ("tiff8_le_pred2_deflate", tiff8_le_pred2_deflate()),
    ("tiff16_mm_pred2_deflate", tiff16_mm_pred2_deflate()),
    ("tiff8_white_is_zero", tiff8_white_is_zero()),
]


def main():
    lines = [
        "// Generated by fixtures/make_fixtures.py. Do not edit by hand.",
        "#pragma once",
        "",
        "#include <cstddef>",
        "",
        "namespace fixtures {",
        "",
    ]
    for name, data in FIXTURES:
        hexbytes = ", ".join(str(b) for b in data)
        lines.append(f"inline const unsigned char {name}[] = {{{hexbytes}}};")
        lines.append(f"inline const std::size_t {name}_len = sizeof({name});")
        lines.append("")
    lines.append("}  // namespace fixtures")
    lines.append("")
    with open("fixture_images.hpp", "w") as f:
        f.write("\n".join(lines))
    for name, data in FIXTURES:
        print(f"{name}: {len(data)} bytes")


if __name__ == "__main__":
    main()
