#pragma once

#include "phirm/plane.hpp"

namespace phirm {

struct BaselineScores {
  double mse = 0.0;
  double psnr_db = 0.0;  // +infinity when mse == 0
  double ssim = 1.0;
};

/// Mean squared intensity difference.
double mse(const GrayImage& a, const GrayImage& b);

/// 10 * log10(255^2 / mse). Identical images give +infinity, which the
/// report serializers write out as the string "inf".
double psnr(const GrayImage& a, const GrayImage& b);

/// Mean local structural similarity: 11x11 Gaussian window (sigma 1.5),
/// K1 = 0.01, K2 = 0.03, dynamic range 255, windows fully inside the image
/// (no padding). Images must be at least 11x11.
double ssim(const GrayImage& a, const GrayImage& b);

BaselineScores baseline_scores(const GrayImage& a, const GrayImage& b);

}  // namespace phirm
