#include "phirm/morphology.hpp"

#include <vector>

namespace phirm {

namespace {

enum class Mode { Any, All };

// Separable sliding-window pass along rows then columns. Mode::Any is the
// dilation half (true if any in-window pixel is set), Mode::All the
// erosion half (true if every in-window, in-bounds pixel is set).
BinaryMask window_pass(const BinaryMask& in, int radius, Mode mode) {
  const Eigen::Index rows = in.rows();
  const Eigen::Index cols = in.cols();
  BinaryMask horiz(rows, cols);
  std::vector<std::int32_t> prefix;

  for (Eigen::Index r = 0; r < rows; ++r) {
    prefix.assign(static_cast<std::size_t>(cols) + 1, 0);
    for (Eigen::Index c = 0; c < cols; ++c) {
      prefix[c + 1] = prefix[c] + (in(r, c) ? 1 : 0);
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      const Eigen::Index lo = c - radius < 0 ? 0 : c - radius;
      const Eigen::Index hi = c + radius >= cols ? cols - 1 : c + radius;
      const std::int32_t set = prefix[hi + 1] - prefix[lo];
      horiz(r, c) = mode == Mode::Any ? set > 0 : set == hi - lo + 1;
    }
  }

  BinaryMask out(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    prefix.assign(static_cast<std::size_t>(rows) + 1, 0);
    for (Eigen::Index r = 0; r < rows; ++r) {
      prefix[r + 1] = prefix[r] + (horiz(r, c) ? 1 : 0);
    }
    for (Eigen::Index r = 0; r < rows; ++r) {
      const Eigen::Index lo = r - radius < 0 ? 0 : r - radius;
      const Eigen::Index hi = r + radius >= rows ? rows - 1 : r + radius;
      const std::int32_t set = prefix[hi + 1] - prefix[lo];
      out(r, c) = mode == Mode::Any ? set > 0 : set == hi - lo + 1;
    }
  }
  return out;
}

void require_radius(int radius) {
  if (radius < 1) throw std::invalid_argument("morphology: radius must be >= 1");
}

}  // namespace

BinaryMask dilate(const BinaryMask& mask, int radius) {
  require_radius(radius);
  return window_pass(mask, radius, Mode::Any);
}

BinaryMask erode(const BinaryMask& mask, int radius) {
  require_radius(radius);
  return window_pass(mask, radius, Mode::All);
}

BinaryMask morph_open(const BinaryMask& mask, int radius) {
  return dilate(erode(mask, radius), radius);
}

BinaryMask morph_close(const BinaryMask& mask, int radius) {
  return erode(dilate(mask, radius), radius);
}

}  // namespace phirm
