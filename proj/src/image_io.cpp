#include "phirm/image_io.hpp"

#include <png.h>
#include <zlib.h>

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <vector>

namespace phirm {

namespace {

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (!in.good() && !in.eof()) throw std::runtime_error("read failed: " + path.string());
  return bytes;
}

struct MemoryReader {
  const std::uint8_t* data;
  std::size_t size;
  std::size_t pos;
};

void png_mem_read(png_structp png, png_bytep out, png_size_t n) {
  auto* r = static_cast<MemoryReader*>(png_get_io_ptr(png));
  if (r->pos + n > r->size) {
    png_error(png, "unexpected end of PNG stream");
  }
  std::memcpy(out, r->data + r->pos, n);
  r->pos += n;
}

LoadedImage load_png(const std::vector<std::uint8_t>& bytes,
                     const std::string& path) {
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw std::runtime_error("libpng init failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw std::runtime_error("libpng init failed");
  }

  MemoryReader reader{bytes.data(), bytes.size(), 0};
  // longjmp target: no C++ objects with destructors live between here and
  // the png_read_png call below.
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw std::runtime_error("invalid PNG: " + path);
  }
  png_set_read_fn(png, &reader, png_mem_read);
  png_read_png(png, info, PNG_TRANSFORM_IDENTITY, nullptr);

  const png_uint_32 width = png_get_image_width(png, info);
  const png_uint_32 height = png_get_image_height(png, info);
  const int bit_depth = png_get_bit_depth(png, info);
  const int color_type = png_get_color_type(png, info);
  png_bytepp rows = png_get_rows(png, info);

  if (color_type != PNG_COLOR_TYPE_GRAY || (bit_depth != 8 && bit_depth != 16)) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw std::runtime_error(path + ": only 8-bit or 16-bit grayscale PNG is supported");
  }

  LoadedImage out;
  out.bits_per_sample = bit_depth;
  out.samples.resize(static_cast<Eigen::Index>(height),
                     static_cast<Eigen::Index>(width));
  for (png_uint_32 y = 0; y < height; ++y) {
    const png_bytep row = rows[y];
    for (png_uint_32 x = 0; x < width; ++x) {
      if (bit_depth == 8) {
        out.samples(y, x) = row[x];
      } else {
        // 16-bit PNG samples are big-endian.
        out.samples(y, x) =
            (static_cast<std::uint32_t>(row[2 * x]) << 8) | row[2 * x + 1];
      }
    }
  }
  png_destroy_read_struct(&png, &info, nullptr);
  return out;
}

// --- minimal TIFF reader -------------------------------------------------
//
// Supports the subset this tool needs to ingest microscope exports:
// single-image baseline TIFF, one sample per pixel, 8- or 16-bit unsigned,
// strip layout, compression none/Deflate/LZW, horizontal predictor, either
// byte order.

struct TiffParser {
  const std::vector<std::uint8_t>& bytes;
  bool little_endian = true;

  std::uint16_t u16(std::size_t off) const {
    require(off + 2);
    return little_endian
               ? static_cast<std::uint16_t>(bytes[off] | (bytes[off + 1] << 8))
               : static_cast<std::uint16_t>((bytes[off] << 8) | bytes[off + 1]);
  }
  std::uint32_t u32(std::size_t off) const {
    require(off + 4);
    if (little_endian) {
      return bytes[off] | (bytes[off + 1] << 8) | (bytes[off + 2] << 16) |
             (static_cast<std::uint32_t>(bytes[off + 3]) << 24);
    }
    return (static_cast<std::uint32_t>(bytes[off]) << 24) |
           (bytes[off + 1] << 16) | (bytes[off + 2] << 8) | bytes[off + 3];
  }
  void require(std::size_t end) const {
    if (end > bytes.size()) throw std::runtime_error("truncated TIFF");
  }
};

struct TiffField {
  std::uint16_t type = 0;
  std::vector<std::uint32_t> values;

  std::uint32_t scalar() const {
    if (values.size() != 1) throw std::runtime_error("TIFF field is not scalar");
    return values[0];
  }
};

std::size_t tiff_type_size(std::uint16_t type) {
  switch (type) {
    case 1: return 1;  // BYTE
    case 3: return 2;  // SHORT
    case 4: return 4;  // LONG
    default: return 0;
  }
}

std::vector<std::uint8_t> inflate_strip(const std::uint8_t* data,
                                        std::size_t size,
                                        std::size_t expected) {
  std::vector<std::uint8_t> out(expected);
  z_stream zs{};
  if (inflateInit(&zs) != Z_OK) throw std::runtime_error("zlib init failed");
  zs.next_in = const_cast<Bytef*>(data);
  zs.avail_in = static_cast<uInt>(size);
  zs.next_out = out.data();
  zs.avail_out = static_cast<uInt>(out.size());
  const int rc = inflate(&zs, Z_FINISH);
  inflateEnd(&zs);
  if (rc != Z_STREAM_END || zs.avail_out != 0) {
    throw std::runtime_error("TIFF deflate strip is corrupt");
  }
  return out;
}

// TIFF-variant LZW: MSB-first codes, clear=256, end=257, early code-width
// change at table sizes 511/1023/2047.
std::vector<std::uint8_t> lzw_decode_strip(const std::uint8_t* data,
                                           std::size_t size,
                                           std::size_t expected) {
  std::vector<std::uint8_t> out;
  out.reserve(expected);

  constexpr int kClear = 256;
  constexpr int kEnd = 257;
  // entries[i] = (prefix code, appended byte); codes < 256 are literals.
  std::vector<std::pair<int, std::uint8_t>> entries;
  int next_code = 258;
  int width = 9;

  std::size_t bitpos = 0;
  const std::size_t bitend = size * 8;
  const auto next_code_bits = [&]() -> int {
    if (bitpos + static_cast<std::size_t>(width) > bitend) return kEnd;
    int code = 0;
    for (int i = 0; i < width; ++i, ++bitpos) {
      code = (code << 1) | ((data[bitpos >> 3] >> (7 - (bitpos & 7))) & 1);
    }
    return code;
  };

  std::vector<std::uint8_t> scratch;
  const auto expand = [&](int code) -> const std::vector<std::uint8_t>& {
    scratch.clear();
    while (code >= 258) {
      const auto& [prefix, byte] = entries[static_cast<std::size_t>(code - 258)];
      scratch.push_back(byte);
      code = prefix;
    }
    if (code < 0 || code > 255) throw std::runtime_error("TIFF LZW stream is corrupt");
    scratch.push_back(static_cast<std::uint8_t>(code));
    std::reverse(scratch.begin(), scratch.end());
    return scratch;
  };
  const auto first_byte = [&](int code) -> std::uint8_t {
    while (code >= 258) code = entries[static_cast<std::size_t>(code - 258)].first;
    return static_cast<std::uint8_t>(code);
  };

  int prev = -1;
  for (;;) {
    const int code = next_code_bits();
    if (code == kEnd) break;
    if (code == kClear) {
      entries.clear();
      next_code = 258;
      width = 9;
      prev = -1;
      continue;
    }
    if (prev < 0) {
      if (code > 255) throw std::runtime_error("TIFF LZW stream is corrupt");
      out.push_back(static_cast<std::uint8_t>(code));
      prev = code;
      continue;
    }
    if (code < next_code) {
      const auto& s = expand(code);
      out.insert(out.end(), s.begin(), s.end());
      entries.emplace_back(prev, s.front());
    } else if (code == next_code) {
      const std::uint8_t fb = first_byte(prev);
      const auto& s = expand(prev);
      out.insert(out.end(), s.begin(), s.end());
      out.push_back(fb);
      entries.emplace_back(prev, fb);
    } else {
      throw std::runtime_error("TIFF LZW stream is corrupt");
    }
    ++next_code;
    if (next_code == (1 << width) - 1 && width < 12) ++width;
    prev = code;
    if (out.size() > expected) throw std::runtime_error("TIFF LZW strip overflows");
  }
  if (out.size() != expected) throw std::runtime_error("TIFF LZW strip is short");
  return out;
}

LoadedImage load_tiff(const std::vector<std::uint8_t>& bytes,
                      const std::string& path) {
  TiffParser p{bytes};
  if (bytes.size() < 8) throw std::runtime_error("truncated TIFF: " + path);
  if (bytes[0] == 'I' && bytes[1] == 'I') {
    p.little_endian = true;
  } else if (bytes[0] == 'M' && bytes[1] == 'M') {
    p.little_endian = false;
  } else {
    throw std::runtime_error("not a TIFF file: " + path);
  }
  if (p.u16(2) != 42) throw std::runtime_error("not a TIFF file: " + path);

  const std::uint32_t ifd = p.u32(4);
  const std::uint16_t entry_count = p.u16(ifd);
  std::map<std::uint16_t, TiffField> fields;
  for (std::uint16_t i = 0; i < entry_count; ++i) {
    const std::size_t off = ifd + 2 + static_cast<std::size_t>(i) * 12;
    const std::uint16_t tag = p.u16(off);
    TiffField field;
    field.type = p.u16(off + 2);
    const std::uint32_t count = p.u32(off + 4);
    const std::size_t elem = tiff_type_size(field.type);
    if (elem == 0) continue;  // RATIONAL etc: resolution metadata, ignored
    const std::size_t total = elem * count;
    const std::size_t value_off = total <= 4 ? off + 8 : p.u32(off + 8);
    p.require(value_off + total);
    field.values.reserve(count);
    for (std::uint32_t k = 0; k < count; ++k) {
      const std::size_t at = value_off + k * elem;
      if (elem == 1) field.values.push_back(bytes[at]);
      if (elem == 2) field.values.push_back(p.u16(at));
      if (elem == 4) field.values.push_back(p.u32(at));
    }
    fields.emplace(tag, std::move(field));
  }

  const auto get = [&](std::uint16_t tag, std::uint32_t fallback,
                       bool required = false) -> std::uint32_t {
    const auto it = fields.find(tag);
    if (it == fields.end()) {
      if (required) throw std::runtime_error(path + ": TIFF tag missing");
      return fallback;
    }
    return it->second.scalar();
  };

  const std::uint32_t width = get(256, 0, true);
  const std::uint32_t height = get(257, 0, true);
  const std::uint32_t bits = get(258, 1);
  const std::uint32_t compression = get(259, 1);
  const std::uint32_t photometric = get(262, 1);
  const std::uint32_t samples_per_pixel = get(277, 1);
  const std::uint32_t rows_per_strip = get(278, height);
  const std::uint32_t predictor = get(317, 1);
  const std::uint32_t sample_format = get(339, 1);

  if (width == 0 || height == 0) throw std::runtime_error(path + ": empty TIFF");
  if (samples_per_pixel != 1 || (photometric != 0 && photometric != 1)) {
    throw std::runtime_error(path + ": only single-channel grayscale TIFF is supported");
  }
  if (bits != 8 && bits != 16) {
    throw std::runtime_error(path + ": only 8-bit or 16-bit TIFF is supported");
  }
  if (sample_format != 1) {
    throw std::runtime_error(path + ": only unsigned integer TIFF samples are supported");
  }
  if (predictor != 1 && predictor != 2) {
    throw std::runtime_error(path + ": unsupported TIFF predictor");
  }
  if (compression != 1 && compression != 5 && compression != 8 &&
      compression != 32946) {
    throw std::runtime_error(
        path + ": unsupported TIFF compression (need none, LZW, or Deflate)");
  }

  const auto offsets_it = fields.find(273);
  const auto counts_it = fields.find(279);
  if (offsets_it == fields.end() || counts_it == fields.end()) {
    throw std::runtime_error(path + ": TIFF strip tables missing");
  }
  const auto& strip_offsets = offsets_it->second.values;
  const auto& strip_counts = counts_it->second.values;
  if (strip_offsets.size() != strip_counts.size() || strip_offsets.empty()) {
    throw std::runtime_error(path + ": TIFF strip tables do not match");
  }
  if (rows_per_strip == 0) throw std::runtime_error(path + ": TIFF rows per strip is zero");

  const std::size_t bytes_per_row = static_cast<std::size_t>(width) * (bits / 8);
  LoadedImage out;
  out.bits_per_sample = static_cast<int>(bits);
  out.samples.resize(static_cast<Eigen::Index>(height),
                     static_cast<Eigen::Index>(width));

  std::uint32_t row = 0;
  for (std::size_t s = 0; s < strip_offsets.size(); ++s) {
    const std::uint32_t strip_rows =
        std::min<std::uint32_t>(rows_per_strip, height - row);
    if (strip_rows == 0) throw std::runtime_error(path + ": TIFF has extra strips");
    const std::size_t expected = bytes_per_row * strip_rows;
    p.require(static_cast<std::size_t>(strip_offsets[s]) + strip_counts[s]);
    const std::uint8_t* raw = bytes.data() + strip_offsets[s];

    std::vector<std::uint8_t> strip;
    switch (compression) {
      case 1:
        if (strip_counts[s] != expected) {
          throw std::runtime_error(path + ": TIFF strip size mismatch");
        }
        strip.assign(raw, raw + expected);
        break;
      case 5:
        strip = lzw_decode_strip(raw, strip_counts[s], expected);
        break;
      default:
        strip = inflate_strip(raw, strip_counts[s], expected);
        break;
    }

    for (std::uint32_t r = 0; r < strip_rows; ++r, ++row) {
      const std::uint8_t* line = strip.data() + static_cast<std::size_t>(r) * bytes_per_row;
      if (bits == 8) {
        std::uint8_t acc = 0;
        for (std::uint32_t x = 0; x < width; ++x) {
          acc = predictor == 2 ? static_cast<std::uint8_t>(acc + line[x]) : line[x];
          out.samples(row, x) = acc;
        }
      } else {
        std::uint16_t acc = 0;
        for (std::uint32_t x = 0; x < width; ++x) {
          const std::uint16_t v =
              p.little_endian
                  ? static_cast<std::uint16_t>(line[2 * x] | (line[2 * x + 1] << 8))
                  : static_cast<std::uint16_t>((line[2 * x] << 8) | line[2 * x + 1]);
          acc = predictor == 2 ? static_cast<std::uint16_t>(acc + v) : v;
          out.samples(row, x) = acc;
        }
      }
    }
  }
  if (row != height) throw std::runtime_error(path + ": TIFF strips cover too few rows");

  if (photometric == 0) {
    // WhiteIsZero: invert so higher always means brighter.
    const std::uint32_t full = bits == 8 ? 255u : 65535u;
    out.samples = full - out.samples;
  }
  return out;
}

}  // namespace

LoadedImage load_image(const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = read_file(path);
  if (bytes.size() >= 8 && png_sig_cmp(bytes.data(), 0, 8) == 0) {
    return load_png(bytes, path.string());
  }
  if (bytes.size() >= 4 &&
      ((bytes[0] == 'I' && bytes[1] == 'I') || (bytes[0] == 'M' && bytes[1] == 'M'))) {
    return load_tiff(bytes, path.string());
  }
  throw std::runtime_error(path.string() + ": unrecognized image format (need PNG or TIFF)");
}

GrayImage load_gray8(const std::filesystem::path& path) {
  const LoadedImage img = load_image(path);
  if (img.bits_per_sample != 8) {
    throw std::runtime_error(
        path.string() + ": is " + std::to_string(img.bits_per_sample) +
        "-bit; rescale to 8-bit explicitly before scoring");
  }
  return img.samples.cast<std::uint8_t>();
}

void write_png8(const std::filesystem::path& path, const GrayImage& img) {
  if (img.size() == 0) throw std::invalid_argument("write_png8: empty image");
  std::FILE* fp = std::fopen(path.string().c_str(), "wb");
  if (!fp) throw std::runtime_error("cannot create " + path.string());

  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    if (png) png_destroy_write_struct(&png, &info);
    std::fclose(fp);
    throw std::runtime_error("libpng init failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
    throw std::runtime_error("PNG write failed: " + path.string());
  }
  png_init_io(png, fp);
  png_set_IHDR(png, info, static_cast<png_uint_32>(img.cols()),
               static_cast<png_uint_32>(img.rows()), 8, PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (Eigen::Index y = 0; y < img.rows(); ++y) {
    png_write_row(png, const_cast<png_bytep>(img.data() + y * img.cols()));
  }
  png_write_end(png, info);
  png_destroy_write_struct(&png, &info);
  if (std::fclose(fp) != 0) throw std::runtime_error("PNG write failed: " + path.string());
}

void write_mask_png(const std::filesystem::path& path, const BinaryMask& mask) {
  write_png8(path, mask_to_gray(mask));
}

}  // namespace phirm
