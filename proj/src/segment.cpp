#include "phirm/segment.hpp"

#include <cstdlib>
#include <numeric>

namespace phirm {

std::array<std::int64_t, 256> histogram(const GrayImage& img) {
  std::array<std::int64_t, 256> h{};
  for (Eigen::Index r = 0; r < img.rows(); ++r) {
    for (Eigen::Index c = 0; c < img.cols(); ++c) {
      ++h[img(r, c)];
    }
  }
  return h;
}

namespace {

// Compares a1/b1 vs a2/b2 where each score is sq/(w0*w1), sq a squared
// 64-bit value and the denominator < 2^63. The cross products need up to
// ~190 bits, done in 64-bit limbs.
struct Wide {
  std::uint64_t limb[3];  // little-endian base-2^64
};

Wide mul_u128_u64(unsigned __int128 a, std::uint64_t b) {
  const std::uint64_t a_lo = static_cast<std::uint64_t>(a);
  const std::uint64_t a_hi = static_cast<std::uint64_t>(a >> 64);
  const unsigned __int128 lo = static_cast<unsigned __int128>(a_lo) * b;
  const unsigned __int128 hi = static_cast<unsigned __int128>(a_hi) * b;
  Wide out{};
  out.limb[0] = static_cast<std::uint64_t>(lo);
  const unsigned __int128 mid = (lo >> 64) + static_cast<std::uint64_t>(hi);
  out.limb[1] = static_cast<std::uint64_t>(mid);
  out.limb[2] = static_cast<std::uint64_t>(hi >> 64) +
                static_cast<std::uint64_t>(mid >> 64);
  return out;
}

int cmp_wide(const Wide& x, const Wide& y) {
  for (int i = 2; i >= 0; --i) {
    if (x.limb[i] != y.limb[i]) return x.limb[i] < y.limb[i] ? -1 : 1;
  }
  return 0;
}

}  // namespace

std::uint8_t otsu_threshold(const GrayImage& img) {
  if (img.size() == 0) {
    throw std::invalid_argument("otsu_threshold: empty image");
  }
  const auto h = histogram(img);
  const std::int64_t total = img.size();

  int lo = 0;
  while (h[lo] == 0) ++lo;
  int hi = 255;
  while (h[hi] == 0) --hi;
  if (lo == hi) {
    return static_cast<std::uint8_t>(lo);  // constant image, no separation
  }

  std::int64_t sum_total = 0;
  for (int v = 0; v < 256; ++v) sum_total += static_cast<std::int64_t>(v) * h[v];

  // Between-class variance for split {<= t} / {> t} is proportional to
  //   (sum0 * N - sum_total * w0)^2 / (w0 * (N - w0)),
  // compared exactly as integer rationals so ties are unambiguous and the
  // lowest maximizing t wins.
  int best_t = 0;
  unsigned __int128 best_sq = 0;
  std::uint64_t best_den = 1;
  bool have_best = false;

  std::int64_t w0 = 0;
  std::int64_t sum0 = 0;
  for (int t = 0; t < 256; ++t) {
    w0 += h[t];
    sum0 += static_cast<std::int64_t>(t) * h[t];
    if (w0 == 0 || w0 == total) continue;  // empty class, variance 0
    const std::int64_t diff = sum0 * total - sum_total * w0;
    const std::uint64_t mag =
        static_cast<std::uint64_t>(diff < 0 ? -diff : diff);
    const unsigned __int128 sq = static_cast<unsigned __int128>(mag) * mag;
    const std::uint64_t den = static_cast<std::uint64_t>(w0) *
                              static_cast<std::uint64_t>(total - w0);
    if (!have_best) {
      have_best = true;
      best_t = t;
      best_sq = sq;
      best_den = den;
      continue;
    }
    // sq/den > best_sq/best_den  <=>  sq*best_den > best_sq*den
    if (cmp_wide(mul_u128_u64(sq, best_den), mul_u128_u64(best_sq, den)) > 0) {
      best_t = t;
      best_sq = sq;
      best_den = den;
    }
  }
  return static_cast<std::uint8_t>(best_t);
}

namespace {

class UnionFind {
 public:
  std::int32_t make() {
    parent_.push_back(static_cast<std::int32_t>(parent_.size()));
    return parent_.back();
  }

  std::int32_t find(std::int32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void merge(std::int32_t a, std::int32_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[b < a ? a : b] = b < a ? b : a;
  }

 private:
  std::vector<std::int32_t> parent_;
};

}  // namespace

ComponentLabeling connected_components(const BinaryMask& mask) {
  const Eigen::Index rows = mask.rows();
  const Eigen::Index cols = mask.cols();
  ComponentLabeling out;
  out.map = LabelMap::Zero(rows, cols);
  if (mask.size() == 0) return out;

  LabelMap provisional = LabelMap::Constant(rows, cols, -1);
  UnionFind uf;

  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      if (!mask(r, c)) continue;
      std::int32_t label = -1;
      // 8-neighborhood predecessors: W, NW, N, NE.
      const Eigen::Index nbr[4][2] = {
          {r, c - 1}, {r - 1, c - 1}, {r - 1, c}, {r - 1, c + 1}};
      for (const auto& n : nbr) {
        if (n[0] < 0 || n[1] < 0 || n[1] >= cols) continue;
        const std::int32_t p = provisional(n[0], n[1]);
        if (p < 0) continue;
        if (label < 0) {
          label = uf.find(p);
        } else {
          uf.merge(label, p);
          label = uf.find(label);
        }
      }
      if (label < 0) label = uf.make();
      provisional(r, c) = label;
    }
  }

  // Dense relabel in raster-scan first-encounter order of the roots.
  std::vector<std::int32_t> dense;
  std::int32_t next = 0;
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      const std::int32_t p = provisional(r, c);
      if (p < 0) continue;
      const std::int32_t root = uf.find(p);
      if (static_cast<std::size_t>(root) >= dense.size()) {
        dense.resize(root + 1, 0);
      }
      if (dense[root] == 0) dense[root] = ++next;
      out.map(r, c) = dense[root];
    }
  }
  out.count = next;
  return out;
}

std::vector<ComponentStats> component_stats(const ComponentLabeling& labeling,
                                            const GrayImage& img) {
  require_same_dims(labeling.map, img, "component_stats");
  std::vector<std::int64_t> area(labeling.count, 0);
  std::vector<std::int64_t> sum(labeling.count, 0);
  std::vector<std::uint8_t> max(labeling.count, 0);
  for (Eigen::Index r = 0; r < img.rows(); ++r) {
    for (Eigen::Index c = 0; c < img.cols(); ++c) {
      const std::int32_t label = labeling.map(r, c);
      if (label == 0) continue;
      const std::size_t i = static_cast<std::size_t>(label) - 1;
      ++area[i];
      sum[i] += img(r, c);
      if (img(r, c) > max[i]) max[i] = img(r, c);
    }
  }
  std::vector<ComponentStats> stats(labeling.count);
  for (std::size_t i = 0; i < stats.size(); ++i) {
    stats[i].label = static_cast<std::int32_t>(i) + 1;
    stats[i].area = area[i];
    stats[i].mean = static_cast<double>(sum[i]) / static_cast<double>(area[i]);
    stats[i].max = max[i];
  }
  return stats;
}

}  // namespace phirm
