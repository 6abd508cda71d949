#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace phirm {

/// Dense row-major raster plane. Width = cols(), height = rows(), pixel
/// (x, y) = plane(y, x).
template <typename Scalar>
using Plane = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// 8-bit intensity raster, the common currency of the pipeline.
using GrayImage = Plane<std::uint8_t>;

/// Raster of raw sensor samples of arbitrary bit depth (up to 32).
using RawImage = Plane<std::uint32_t>;

/// Boolean raster; true = foreground.
using BinaryMask = Plane<bool>;

/// Connected-component ids; 0 = background, 1..K = components in
/// raster-scan first-encounter order.
using LabelMap = Plane<std::int32_t>;

using DoublePlane = Plane<double>;

template <typename A, typename B>
bool same_dims(const Eigen::ArrayBase<A>& a, const Eigen::ArrayBase<B>& b) {
  return a.rows() == b.rows() && a.cols() == b.cols();
}

template <typename A, typename B>
void require_same_dims(const Eigen::ArrayBase<A>& a, const Eigen::ArrayBase<B>& b,
                       const char* what) {
  if (!same_dims(a, b)) {
    throw std::invalid_argument(
        std::string(what) + ": dimension mismatch, " + std::to_string(a.cols()) +
        "x" + std::to_string(a.rows()) + " vs " + std::to_string(b.cols()) + "x" +
        std::to_string(b.rows()));
  }
}

/// Rescales a plane of arbitrary range to 0..255 with the min-max rule
/// out = round(255 * (v - min) / (max - min)).
///
/// The output attains both 0 and 255 unless the input is constant; a
/// constant input maps to all zeros (degenerate case, no range to
/// stretch).
template <typename Derived>
GrayImage normalize_minmax(const Eigen::ArrayBase<Derived>& raw) {
  if (raw.size() == 0) {
    throw std::invalid_argument("normalize_minmax: empty image");
  }
  const double lo = static_cast<double>(raw.minCoeff());
  const double hi = static_cast<double>(raw.maxCoeff());
  GrayImage out(raw.rows(), raw.cols());
  if (hi <= lo) {
    out.setZero();
    return out;
  }
  const double scale = 255.0 / (hi - lo);
  for (Eigen::Index r = 0; r < raw.rows(); ++r) {
    for (Eigen::Index c = 0; c < raw.cols(); ++c) {
      const double v = (static_cast<double>(raw(r, c)) - lo) * scale;
      out(r, c) = static_cast<std::uint8_t>(std::llround(v));
    }
  }
  return out;
}

/// bit[i] = img[i] > t. Strict comparison, so the threshold pixel itself
/// is background.
template <typename Derived>
BinaryMask binarize(const Eigen::ArrayBase<Derived>& img,
                    typename Derived::Scalar t) {
  return (img.derived() > t).eval();
}

/// img converted to 0/255 for mask serialization.
inline GrayImage mask_to_gray(const BinaryMask& mask) {
  GrayImage out(mask.rows(), mask.cols());
  for (Eigen::Index r = 0; r < mask.rows(); ++r) {
    for (Eigen::Index c = 0; c < mask.cols(); ++c) {
      out(r, c) = mask(r, c) ? 255 : 0;
    }
  }
  return out;
}

inline BinaryMask gray_to_mask(const GrayImage& img) {
  return img > std::uint8_t{0};
}

}  // namespace phirm
