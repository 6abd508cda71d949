#include "phirm/baselines.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace phirm {

double mse(const GrayImage& a, const GrayImage& b) {
  require_same_dims(a, b, "mse");
  if (a.size() == 0) throw std::invalid_argument("mse: empty image");
  std::int64_t sum = 0;
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
      const std::int64_t d = static_cast<std::int64_t>(a(r, c)) - b(r, c);
      sum += d * d;
    }
  }
  return static_cast<double>(sum) / static_cast<double>(a.size());
}

double psnr(const GrayImage& a, const GrayImage& b) {
  const double err = mse(a, b);
  if (err == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(255.0 * 255.0 / err);
}

namespace {

constexpr int kWindow = 11;
constexpr double kSigma = 1.5;
constexpr double kC1 = (0.01 * 255.0) * (0.01 * 255.0);
constexpr double kC2 = (0.03 * 255.0) * (0.03 * 255.0);

std::vector<double> gaussian_kernel() {
  std::vector<double> k(kWindow);
  double total = 0.0;
  for (int i = 0; i < kWindow; ++i) {
    const double d = i - (kWindow - 1) / 2.0;
    k[i] = std::exp(-(d * d) / (2.0 * kSigma * kSigma));
    total += k[i];
  }
  for (double& v : k) v /= total;
  return k;
}

// Valid-mode separable convolution: output shrinks by kWindow-1 per axis.
DoublePlane filter_valid(const DoublePlane& in, const std::vector<double>& k) {
  const Eigen::Index rows = in.rows();
  const Eigen::Index cols = in.cols();
  const Eigen::Index out_cols = cols - kWindow + 1;
  const Eigen::Index out_rows = rows - kWindow + 1;

  DoublePlane horiz(rows, out_cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < out_cols; ++c) {
      double acc = 0.0;
      for (int i = 0; i < kWindow; ++i) acc += k[i] * in(r, c + i);
      horiz(r, c) = acc;
    }
  }
  DoublePlane out(out_rows, out_cols);
  for (Eigen::Index r = 0; r < out_rows; ++r) {
    for (Eigen::Index c = 0; c < out_cols; ++c) {
      double acc = 0.0;
      for (int i = 0; i < kWindow; ++i) acc += k[i] * horiz(r + i, c);
      out(r, c) = acc;
    }
  }
  return out;
}

}  // namespace

double ssim(const GrayImage& a, const GrayImage& b) {
  require_same_dims(a, b, "ssim");
  if (a.rows() < kWindow || a.cols() < kWindow) {
    throw std::invalid_argument("ssim: image smaller than the 11x11 window");
  }
  const std::vector<double> k = gaussian_kernel();

  const DoublePlane x = a.cast<double>();
  const DoublePlane y = b.cast<double>();
  const DoublePlane mu_x = filter_valid(x, k);
  const DoublePlane mu_y = filter_valid(y, k);
  const DoublePlane xx = filter_valid(x * x, k);
  const DoublePlane yy = filter_valid(y * y, k);
  const DoublePlane xy = filter_valid(x * y, k);

  double total = 0.0;
  for (Eigen::Index r = 0; r < mu_x.rows(); ++r) {
    for (Eigen::Index c = 0; c < mu_x.cols(); ++c) {
      const double mx = mu_x(r, c);
      const double my = mu_y(r, c);
      const double var_x = xx(r, c) - mx * mx;
      const double var_y = yy(r, c) - my * my;
      const double cov = xy(r, c) - mx * my;
      const double num = (2.0 * mx * my + kC1) * (2.0 * cov + kC2);
      const double den = (mx * mx + my * my + kC1) * (var_x + var_y + kC2);
      total += num / den;
    }
  }
  return total / static_cast<double>(mu_x.size());
}

BaselineScores baseline_scores(const GrayImage& a, const GrayImage& b) {
  BaselineScores s;
  s.mse = mse(a, b);
  s.psnr_db = s.mse == 0.0 ? std::numeric_limits<double>::infinity()
                           : 10.0 * std::log10(255.0 * 255.0 / s.mse);
  s.ssim = ssim(a, b);
  return s;
}

}  // namespace phirm
