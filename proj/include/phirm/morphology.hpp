#pragma once

#include "phirm/plane.hpp"

namespace phirm {

// Square structuring element of side 2*radius+1. Border rule: pixels
// outside the image are background for dilation, and erosion tests only
// the in-bounds part of its window (the complement-dilation rule). Under
// this pairing opening never grows a mask, closing never shrinks one, and
// both are idempotent, including at image borders.

BinaryMask dilate(const BinaryMask& mask, int radius);
BinaryMask erode(const BinaryMask& mask, int radius);

/// dilate(erode(mask)): removes specks smaller than the element.
BinaryMask morph_open(const BinaryMask& mask, int radius);

/// erode(dilate(mask)): fills holes smaller than the element.
BinaryMask morph_close(const BinaryMask& mask, int radius);

}  // namespace phirm
