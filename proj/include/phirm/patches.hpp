#pragma once

#include <vector>

#include "phirm/plane.hpp"

namespace phirm {

enum class EdgePolicy {
  /// The final row/column window is shifted back onto the image edge so
  /// the whole frame is covered (windows may overlap).
  AnchorToEdge,
  /// Windows that would cross the edge are dropped.
  DropPartial,
};

struct PatchGrid {
  int patch_side = 256;
  int stride = 256;
  EdgePolicy edge_policy = EdgePolicy::AnchorToEdge;
  /// Source crop side = round(patch_side * zoom); crops larger than the
  /// emitted patch are downsampled bilinearly. Must be >= 1.
  double zoom = 1.0;

  void validate() const;
  int crop_side() const;
};

struct Patch {
  GrayImage image;
  int row = 0;       // grid row index
  int col = 0;       // grid column index
  int x_offset = 0;  // left edge of the source window
  int y_offset = 0;  // top edge of the source window
};

/// Window start offsets along one axis of length `dim`.
std::vector<int> patch_offsets(int dim, int crop, int stride, EdgePolicy policy);

/// Extracts the grid of patches, row-major (left to right, top to bottom).
/// Each emitted patch is min-max normalized to 0..255 on its own. The
/// image must be at least crop_side() in both dimensions.
std::vector<Patch> gen_patches(const RawImage& raw, const PatchGrid& grid);

}  // namespace phirm
