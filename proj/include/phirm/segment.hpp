#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "phirm/plane.hpp"

namespace phirm {

std::array<std::int64_t, 256> histogram(const GrayImage& img);

/// Global threshold maximizing the between-class variance of the 256-bin
/// histogram, with classes {v <= t} / {v > t} so the result pairs with
/// binarize(img, t). Ties resolve to the smallest t. The comparison is
/// exact (integer rationals), so the argmax is well defined.
///
/// A constant image has no separating threshold; the pixel value itself is
/// returned, which makes binarize(img, t) all-background.
std::uint8_t otsu_threshold(const GrayImage& img);

struct ComponentLabeling {
  LabelMap map;
  int count = 0;  // labels are 1..count
};

/// 8-connected component labeling. Labels are dense and assigned in
/// raster-scan first-encounter order, so the output is deterministic.
ComponentLabeling connected_components(const BinaryMask& mask);

struct ComponentStats {
  std::int32_t label = 0;
  std::int64_t area = 0;      // pixel count
  double mean = 0.0;          // mean source intensity over the component
  std::uint8_t max = 0;       // max source intensity over the component
};

/// Per-component area / mean / max of `img` intensities, ordered by label.
std::vector<ComponentStats> component_stats(const ComponentLabeling& labeling,
                                            const GrayImage& img);

}  // namespace phirm
