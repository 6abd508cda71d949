#include "phirm/maskgen.hpp"

#include <algorithm>
#include <cmath>

#include "phirm/morphology.hpp"
#include "phirm/rng.hpp"
#include "phirm/segment.hpp"

namespace phirm {

void RectMaskSpec::validate() const {
  if (image_side < 1) {
    throw std::invalid_argument("RectMaskSpec: image_side must be >= 1");
  }
  if (!(0.0 < area_fraction_lo && area_fraction_lo < area_fraction_hi &&
        area_fraction_hi <= 0.5)) {
    throw std::invalid_argument(
        "RectMaskSpec: need 0 < area_fraction_lo < area_fraction_hi <= 0.5");
  }
}

void IrregularMaskSpec::validate() const {
  if (image_side < 1) {
    throw std::invalid_argument("IrregularMaskSpec: image_side must be >= 1");
  }
  if (min_vertices < 2 || min_vertices > max_vertices) {
    throw std::invalid_argument(
        "IrregularMaskSpec: need 2 <= min_vertices <= max_vertices");
  }
  if (min_strokes < 1 || min_strokes > max_strokes) {
    throw std::invalid_argument(
        "IrregularMaskSpec: need 1 <= min_strokes <= max_strokes");
  }
  if (min_brush_width < 1 || min_brush_width > max_brush_width) {
    throw std::invalid_argument(
        "IrregularMaskSpec: need 1 <= min_brush_width <= max_brush_width");
  }
  if (!(min_segment_length > 0.0) || min_segment_length > max_segment_length) {
    throw std::invalid_argument(
        "IrregularMaskSpec: need 0 < min_segment_length <= max_segment_length");
  }
  if (!(max_angle_step >= 0.0)) {
    throw std::invalid_argument("IrregularMaskSpec: max_angle_step must be >= 0");
  }
}

BinaryMask extract_spa_mask(const GrayImage& cfp, double multiplier,
                            int morph_radius) {
  if (!(multiplier > 0.0 && multiplier <= 1.0)) {
    throw std::invalid_argument("extract_spa_mask: multiplier must be in (0, 1]");
  }
  const std::uint8_t base = otsu_threshold(cfp);
  const auto scaled = static_cast<std::uint8_t>(std::llround(base * multiplier));
  const BinaryMask raw = binarize(cfp, scaled);
  return morph_close(morph_open(raw, morph_radius), morph_radius);
}

BinaryMask gen_rect_mask(const RectMaskSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  const double side2 =
      static_cast<double>(spec.image_side) * static_cast<double>(spec.image_side);

  for (int attempt = 0; attempt < 1000; ++attempt) {
    const double aspect = rng.uniform_real(0.5, 2.0);  // width / height
    const double area = rng.uniform_real(spec.area_fraction_lo,
                                         spec.area_fraction_hi) * side2;
    const auto w = static_cast<int>(std::llround(std::sqrt(area * aspect)));
    const auto h = static_cast<int>(std::llround(std::sqrt(area / aspect)));
    if (w < 1 || h < 1 || w > spec.image_side || h > spec.image_side) continue;
    const double fraction = w * h / side2;
    if (fraction < spec.area_fraction_lo || fraction > spec.area_fraction_hi) {
      continue;  // integer rounding left the range
    }
    const auto x = static_cast<int>(rng.uniform_int(0, spec.image_side - w));
    const auto y = static_cast<int>(rng.uniform_int(0, spec.image_side - h));
    BinaryMask mask = BinaryMask::Constant(spec.image_side, spec.image_side, false);
    mask.block(y, x, h, w).setConstant(true);
    return mask;
  }
  throw std::runtime_error(
      "gen_rect_mask: no integer rectangle fits the fraction range");
}

namespace {

void paint_disc(BinaryMask& mask, double cx, double cy, double radius) {
  const int side_x = static_cast<int>(mask.cols());
  const int side_y = static_cast<int>(mask.rows());
  const int x0 = std::max(0, static_cast<int>(std::floor(cx - radius)));
  const int x1 = std::min(side_x - 1, static_cast<int>(std::ceil(cx + radius)));
  const int y0 = std::max(0, static_cast<int>(std::floor(cy - radius)));
  const int y1 = std::min(side_y - 1, static_cast<int>(std::ceil(cy + radius)));
  const double r2 = radius * radius;
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      const double dx = x - cx;
      const double dy = y - cy;
      if (dx * dx + dy * dy <= r2) mask(y, x) = true;
    }
  }
}

void paint_thick_segment(BinaryMask& mask, double x0, double y0, double x1,
                         double y1, double half_width) {
  const double vx = x1 - x0;
  const double vy = y1 - y0;
  const double len2 = vx * vx + vy * vy;
  const int cols = static_cast<int>(mask.cols());
  const int rows = static_cast<int>(mask.rows());
  const int bx0 = std::max(0, static_cast<int>(std::floor(std::min(x0, x1) - half_width)));
  const int bx1 = std::min(cols - 1, static_cast<int>(std::ceil(std::max(x0, x1) + half_width)));
  const int by0 = std::max(0, static_cast<int>(std::floor(std::min(y0, y1) - half_width)));
  const int by1 = std::min(rows - 1, static_cast<int>(std::ceil(std::max(y0, y1) + half_width)));
  const double hw2 = half_width * half_width;
  for (int y = by0; y <= by1; ++y) {
    for (int x = bx0; x <= bx1; ++x) {
      double t = len2 > 0.0 ? ((x - x0) * vx + (y - y0) * vy) / len2 : 0.0;
      t = std::clamp(t, 0.0, 1.0);
      const double dx = x - (x0 + t * vx);
      const double dy = y - (y0 + t * vy);
      if (dx * dx + dy * dy <= hw2) mask(y, x) = true;
    }
  }
}

}  // namespace

BinaryMask gen_irregular_mask(const IrregularMaskSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  BinaryMask mask = BinaryMask::Constant(spec.image_side, spec.image_side, false);
  const double lo = 0.0;
  const double hi = spec.image_side - 1.0;

  const auto strokes = rng.uniform_int(spec.min_strokes, spec.max_strokes);
  for (std::int64_t s = 0; s < strokes; ++s) {
    const auto brush = rng.uniform_int(spec.min_brush_width, spec.max_brush_width);
    const double half = brush / 2.0;
    const auto vertices = rng.uniform_int(spec.min_vertices, spec.max_vertices);

    double x = rng.uniform_real(lo, hi);
    double y = rng.uniform_real(lo, hi);
    double angle = rng.uniform_real(0.0, 2.0 * std::numbers::pi);
    paint_disc(mask, x, y, half);

    for (std::int64_t v = 1; v < vertices; ++v) {
      angle += rng.uniform_real(-spec.max_angle_step, spec.max_angle_step);
      const double len =
          rng.uniform_real(spec.min_segment_length, spec.max_segment_length);
      const double nx = std::clamp(x + len * std::cos(angle), lo, hi);
      const double ny = std::clamp(y + len * std::sin(angle), lo, hi);
      paint_thick_segment(mask, x, y, nx, ny, half);
      paint_disc(mask, nx, ny, half);
      x = nx;
      y = ny;
    }
  }
  return mask;
}

GrayImage apply_mask(const GrayImage& img, const BinaryMask& mask,
                     std::uint8_t fill) {
  require_same_dims(img, mask, "apply_mask");
  return mask.select(fill, img);
}

}  // namespace phirm
