#include "phirm/patches.hpp"

#include <algorithm>
#include <cmath>

namespace phirm {

void PatchGrid::validate() const {
  if (patch_side < 1) throw std::invalid_argument("PatchGrid: patch_side must be >= 1");
  if (stride < 1) throw std::invalid_argument("PatchGrid: stride must be >= 1");
  if (!(zoom >= 1.0)) throw std::invalid_argument("PatchGrid: zoom must be >= 1");
}

int PatchGrid::crop_side() const {
  return static_cast<int>(std::llround(patch_side * zoom));
}

std::vector<int> patch_offsets(int dim, int crop, int stride, EdgePolicy policy) {
  std::vector<int> offsets;
  for (int x = 0; x + crop <= dim; x += stride) offsets.push_back(x);
  if (policy == EdgePolicy::AnchorToEdge &&
      (offsets.empty() || offsets.back() + crop < dim)) {
    offsets.push_back(dim - crop);  // final window re-anchored onto the edge
  }
  return offsets;
}

namespace {

// Bilinear resample of a raw crop to side x side, sampling at pixel centers.
DoublePlane resize_bilinear(const RawImage& crop, int side) {
  const int src = static_cast<int>(crop.rows());
  const double scale = static_cast<double>(src) / side;
  DoublePlane out(side, side);
  for (int r = 0; r < side; ++r) {
    const double sy = std::clamp((r + 0.5) * scale - 0.5, 0.0, src - 1.0);
    const int y0 = static_cast<int>(sy);
    const int y1 = std::min(y0 + 1, src - 1);
    const double fy = sy - y0;
    for (int c = 0; c < side; ++c) {
      const double sx = std::clamp((c + 0.5) * scale - 0.5, 0.0, src - 1.0);
      const int x0 = static_cast<int>(sx);
      const int x1 = std::min(x0 + 1, src - 1);
      const double fx = sx - x0;
      const double top = crop(y0, x0) * (1.0 - fx) + crop(y0, x1) * fx;
      const double bottom = crop(y1, x0) * (1.0 - fx) + crop(y1, x1) * fx;
      out(r, c) = top * (1.0 - fy) + bottom * fy;
    }
  }
  return out;
}

}  // namespace

std::vector<Patch> gen_patches(const RawImage& raw, const PatchGrid& grid) {
  grid.validate();
  const int crop = grid.crop_side();
  if (raw.cols() < crop || raw.rows() < crop) {
    throw std::invalid_argument("gen_patches: image smaller than the crop window");
  }
  const std::vector<int> xs =
      patch_offsets(static_cast<int>(raw.cols()), crop, grid.stride, grid.edge_policy);
  const std::vector<int> ys =
      patch_offsets(static_cast<int>(raw.rows()), crop, grid.stride, grid.edge_policy);

  std::vector<Patch> patches;
  patches.reserve(xs.size() * ys.size());
  for (std::size_t ri = 0; ri < ys.size(); ++ri) {
    for (std::size_t ci = 0; ci < xs.size(); ++ci) {
      const RawImage window = raw.block(ys[ri], xs[ci], crop, crop);
      Patch p;
      p.row = static_cast<int>(ri);
      p.col = static_cast<int>(ci);
      p.x_offset = xs[ci];
      p.y_offset = ys[ri];
      if (crop == grid.patch_side) {
        p.image = normalize_minmax(window);
      } else {
        p.image = normalize_minmax(resize_bilinear(window, grid.patch_side));
      }
      patches.push_back(std::move(p));
    }
  }
  return patches;
}

}  // namespace phirm
