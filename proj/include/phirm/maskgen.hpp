#pragma once

#include <cstdint>
#include <numbers>

#include "phirm/plane.hpp"

namespace phirm {

/// One solid axis-aligned rectangle whose area is a fixed fraction range
/// of the image. The benchmark classes are 10-20, 20-30, 30-40 and 40-50%
/// of a 256x256 image.
struct RectMaskSpec {
  int image_side = 256;
  double area_fraction_lo = 0.10;
  double area_fraction_hi = 0.20;
  std::uint64_t seed = 0;

  void validate() const;  // requires 0 < lo < hi <= 0.5, side >= 1
};

/// Free-form mask drawn as random thick polylines with a disc at every
/// vertex joint. Defaults are sized so that a sweep of seeds covers mask
/// areas from a few percent up to half the image.
struct IrregularMaskSpec {
  int image_side = 256;
  int min_vertices = 4;
  int max_vertices = 12;
  int min_strokes = 1;
  int max_strokes = 4;
  int min_brush_width = 10;
  int max_brush_width = 56;
  double max_angle_step = std::numbers::pi / 4;
  double min_segment_length = 10.0;
  double max_segment_length = 60.0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Artefact mask from a CFP-channel image: Otsu's threshold scaled by
/// `multiplier` (rounded to nearest), binarized, then opened and closed.
/// Scaling the threshold down recovers faint artefact borders that plain
/// Otsu drops. multiplier must be in (0, 1].
BinaryMask extract_spa_mask(const GrayImage& cfp, double multiplier = 0.7,
                            int morph_radius = 1);

/// Deterministic in the seed. Throws std::runtime_error when no integer
/// rectangle satisfies the fraction range after bounded resampling.
BinaryMask gen_rect_mask(const RectMaskSpec& spec);

/// Deterministic in the seed.
BinaryMask gen_irregular_mask(const IrregularMaskSpec& spec);

/// output = fill where mask is foreground, original pixel elsewhere.
GrayImage apply_mask(const GrayImage& img, const BinaryMask& mask,
                     std::uint8_t fill = 255);

}  // namespace phirm
