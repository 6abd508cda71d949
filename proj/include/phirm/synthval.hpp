#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "phirm/metric.hpp"
#include "phirm/plane.hpp"

namespace phirm {

enum class NucleusProfile {
  FlatDisc,        // uniform intensity, exact footprint under segmentation
  RadialFalloff,   // quadratic falloff from peak at the center to background
};

struct NucleusSpec {
  double cx = 0.0;
  double cy = 0.0;
  double radius = 0.0;
  std::uint8_t peak = 200;  // < 255 so a nucleus never trips the artefact rule
  NucleusProfile profile = NucleusProfile::RadialFalloff;
};

struct SceneSpec {
  std::uint64_t seed = 0;
  int nucleus_count = 5;
  int image_side = 256;
  std::uint8_t background = 10;
  double min_radius = 14.0;
  double max_radius = 24.0;
  std::uint8_t peak = 200;
  NucleusProfile profile = NucleusProfile::RadialFalloff;
  double noise_sigma = 0.0;  // optional Gaussian pixel noise, off by default

  void validate() const;
};

struct Scene {
  GrayImage image;
  std::vector<NucleusSpec> nuclei;
  std::uint8_t background = 10;
};

/// Pixels (x, y) with (x-cx)^2 + (y-cy)^2 <= radius^2, clipped to the
/// image, in raster order.
std::vector<std::pair<int, int>> disc_footprint(double cx, double cy,
                                                double radius, int width,
                                                int height);

/// Places non-overlapping nuclei by rejection sampling and paints them on
/// a uniform background. Throws std::runtime_error when placement fails
/// after bounded retries. The painted scene summarizes to exactly
/// nucleus_count nuclei and zero artefact area.
Scene gen_scene(const SceneSpec& spec);

struct RemoveNucleus {
  int index = 0;
};

/// Deletes `fraction` of the nucleus's pixels, outermost first, keeping
/// the footprint a disc. Refuses (throws) when the remnant would fall
/// below min_remnant_area, because that would silently turn an area
/// manipulation into a count manipulation.
struct ErodeNucleusArea {
  int index = 0;
  double fraction = 0.3;  // in (0, 1)
  std::int64_t min_remnant_area = 50;
};

/// Paints a saturated (255) disc. Throws when the disc would overlap a
/// nucleus or leave the image.
struct AddArtefact {
  double cx = 0.0;
  double cy = 0.0;
  double radius = 12.0;
};

using Manipulation = std::variant<RemoveNucleus, ErodeNucleusArea, AddArtefact>;

/// Applies one manipulation; pixels outside the manipulation footprint are
/// untouched.
GrayImage apply_manipulation(const GrayImage& img,
                             const std::vector<NucleusSpec>& nuclei,
                             std::uint8_t background, const Manipulation& m);

struct LadderRung {
  int rank = 0;
  std::string label;
  GrayImage original;
  GrayImage manipulated;
  PhenotypeSummary expected_original;     // from construction, not segmentation
  PhenotypeSummary expected_manipulated;  // from construction, not segmentation
};

/// A fixed six-rung ladder of strictly increasing phenotypic damage over
/// one seeded scene: untouched, two erosion grades of the largest nucleus,
/// a dropped nucleus, a dropped nucleus plus a saturated artefact, three
/// dropped nuclei plus the artefact. Flat-disc nuclei keep the damage
/// arithmetic exact under segmentation.
std::vector<LadderRung> severity_ladder(std::uint64_t seed);

}  // namespace phirm
