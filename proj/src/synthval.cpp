#include "phirm/synthval.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "phirm/rng.hpp"

namespace phirm {

void SceneSpec::validate() const {
  if (image_side < 16) {
    throw std::invalid_argument("SceneSpec: image_side must be >= 16");
  }
  if (nucleus_count < 0) {
    throw std::invalid_argument("SceneSpec: nucleus_count must be >= 0");
  }
  if (!(min_radius >= 5.0) || min_radius > max_radius) {
    throw std::invalid_argument("SceneSpec: need 5 <= min_radius <= max_radius");
  }
  if (max_radius > image_side / 4.0) {
    throw std::invalid_argument("SceneSpec: max_radius too large for the image");
  }
  if (peak > 254) {
    throw std::invalid_argument("SceneSpec: peak must be <= 254");
  }
  if (peak < background + 30) {
    throw std::invalid_argument("SceneSpec: peak must exceed background by >= 30");
  }
  if (noise_sigma < 0.0) {
    throw std::invalid_argument("SceneSpec: noise_sigma must be >= 0");
  }
}

std::vector<std::pair<int, int>> disc_footprint(double cx, double cy,
                                                double radius, int width,
                                                int height) {
  std::vector<std::pair<int, int>> pixels;
  const int x0 = std::max(0, static_cast<int>(std::floor(cx - radius)));
  const int x1 = std::min(width - 1, static_cast<int>(std::ceil(cx + radius)));
  const int y0 = std::max(0, static_cast<int>(std::floor(cy - radius)));
  const int y1 = std::min(height - 1, static_cast<int>(std::ceil(cy + radius)));
  const double r2 = radius * radius;
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      const double dx = x - cx;
      const double dy = y - cy;
      if (dx * dx + dy * dy <= r2) pixels.emplace_back(x, y);
    }
  }
  return pixels;
}

namespace {

// Minimum clearance, in pixels, between any two painted footprints. Keeps
// blobs 8-disconnected after rounding.
constexpr double kSeparation = 4.0;
constexpr double kBorderMargin = 2.0;

void paint_nucleus(GrayImage& img, const NucleusSpec& n, std::uint8_t background) {
  const double r2 = n.radius * n.radius;
  for (const auto& [x, y] : disc_footprint(n.cx, n.cy, n.radius,
                                           static_cast<int>(img.cols()),
                                           static_cast<int>(img.rows()))) {
    if (n.profile == NucleusProfile::FlatDisc) {
      img(y, x) = n.peak;
    } else {
      const double dx = x - n.cx;
      const double dy = y - n.cy;
      const double falloff = 1.0 - (dx * dx + dy * dy) / r2;
      const double value =
          background + (static_cast<double>(n.peak) - background) * falloff;
      img(y, x) = static_cast<std::uint8_t>(std::llround(value));
    }
  }
}

// Rejection-sampled centers for the given radii, in order. Throws after
// bounded retries.
std::vector<NucleusSpec> place_nuclei(Rng& rng, int side,
                                      const std::vector<double>& radii,
                                      std::uint8_t peak, NucleusProfile profile) {
  std::vector<NucleusSpec> placed;
  placed.reserve(radii.size());
  for (const double radius : radii) {
    const double lo = radius + kBorderMargin;
    const double hi = side - 1.0 - radius - kBorderMargin;
    if (hi <= lo) {
      throw std::runtime_error("gen_scene: nucleus radius too large for the image");
    }
    bool ok = false;
    for (int attempt = 0; attempt < 1000 && !ok; ++attempt) {
      const double cx = rng.uniform_real(lo, hi);
      const double cy = rng.uniform_real(lo, hi);
      ok = true;
      for (const NucleusSpec& other : placed) {
        const double dx = cx - other.cx;
        const double dy = cy - other.cy;
        const double min_d = radius + other.radius + kSeparation;
        if (dx * dx + dy * dy < min_d * min_d) {
          ok = false;
          break;
        }
      }
      if (ok) {
        placed.push_back(NucleusSpec{cx, cy, radius, peak, profile});
      }
    }
    if (!ok) {
      throw std::runtime_error("gen_scene: nucleus placement infeasible");
    }
  }
  return placed;
}

}  // namespace

Scene gen_scene(const SceneSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);

  std::vector<double> radii(spec.nucleus_count);
  for (double& r : radii) r = rng.uniform_real(spec.min_radius, spec.max_radius);

  Scene scene;
  scene.background = spec.background;
  scene.nuclei =
      place_nuclei(rng, spec.image_side, radii, spec.peak, spec.profile);
  scene.image =
      GrayImage::Constant(spec.image_side, spec.image_side, spec.background);
  for (const NucleusSpec& n : scene.nuclei) {
    paint_nucleus(scene.image, n, spec.background);
  }

  if (spec.noise_sigma > 0.0) {
    for (Eigen::Index r = 0; r < scene.image.rows(); ++r) {
      for (Eigen::Index c = 0; c < scene.image.cols(); ++c) {
        const double u1 = 1.0 - rng.next_double();
        const double u2 = rng.next_double();
        const double z = std::sqrt(-2.0 * std::log(u1)) *
                         std::cos(2.0 * std::numbers::pi * u2);
        const double v = scene.image(r, c) + spec.noise_sigma * z;
        scene.image(r, c) =
            static_cast<std::uint8_t>(std::clamp(std::llround(v), 0ll, 255ll));
      }
    }
  }
  return scene;
}

namespace {

const NucleusSpec& nucleus_at(const std::vector<NucleusSpec>& nuclei, int index) {
  if (index < 0 || static_cast<std::size_t>(index) >= nuclei.size()) {
    throw std::invalid_argument("apply_manipulation: nucleus index out of range");
  }
  return nuclei[static_cast<std::size_t>(index)];
}

}  // namespace

GrayImage apply_manipulation(const GrayImage& img,
                             const std::vector<NucleusSpec>& nuclei,
                             std::uint8_t background, const Manipulation& m) {
  const int width = static_cast<int>(img.cols());
  const int height = static_cast<int>(img.rows());
  GrayImage out = img;

  if (const auto* remove = std::get_if<RemoveNucleus>(&m)) {
    const NucleusSpec& n = nucleus_at(nuclei, remove->index);
    for (const auto& [x, y] : disc_footprint(n.cx, n.cy, n.radius, width, height)) {
      out(y, x) = background;
    }
    return out;
  }

  if (const auto* erode = std::get_if<ErodeNucleusArea>(&m)) {
    if (!(erode->fraction > 0.0 && erode->fraction < 1.0)) {
      throw std::invalid_argument("ErodeNucleusArea: fraction must be in (0, 1)");
    }
    const NucleusSpec& n = nucleus_at(nuclei, erode->index);
    auto pixels = disc_footprint(n.cx, n.cy, n.radius, width, height);
    const auto remove_count =
        std::llround(erode->fraction * static_cast<double>(pixels.size()));
    const auto remnant = static_cast<std::int64_t>(pixels.size()) - remove_count;
    if (remnant < erode->min_remnant_area) {
      throw std::invalid_argument(
          "ErodeNucleusArea: remnant would fall below the minimum component "
          "area and change the nucleus count instead");
    }
    // Outermost first; ties resolve by raster order of the footprint so
    // the result is deterministic.
    std::stable_sort(pixels.begin(), pixels.end(),
                     [&n](const auto& a, const auto& b) {
                       const double da = (a.first - n.cx) * (a.first - n.cx) +
                                         (a.second - n.cy) * (a.second - n.cy);
                       const double db = (b.first - n.cx) * (b.first - n.cx) +
                                         (b.second - n.cy) * (b.second - n.cy);
                       return da > db;
                     });
    for (std::int64_t i = 0; i < remove_count; ++i) {
      out(pixels[i].second, pixels[i].first) = background;
    }
    return out;
  }

  const auto& artefact = std::get<AddArtefact>(m);
  if (artefact.cx - artefact.radius < 0 || artefact.cy - artefact.radius < 0 ||
      artefact.cx + artefact.radius > width - 1 ||
      artefact.cy + artefact.radius > height - 1) {
    throw std::invalid_argument("AddArtefact: disc leaves the image");
  }
  for (const NucleusSpec& n : nuclei) {
    const double dx = artefact.cx - n.cx;
    const double dy = artefact.cy - n.cy;
    const double min_d = artefact.radius + n.radius + 2.0;
    if (dx * dx + dy * dy < min_d * min_d) {
      throw std::invalid_argument("AddArtefact: disc would touch a nucleus");
    }
  }
  for (const auto& [x, y] :
       disc_footprint(artefact.cx, artefact.cy, artefact.radius, width, height)) {
    out(y, x) = 255;
  }
  return out;
}

namespace {

constexpr int kLadderSide = 256;
constexpr std::uint8_t kLadderBackground = 10;
constexpr std::uint8_t kLadderPeak = 200;
constexpr double kArtefactRadius = 12.6;  // ~500 px footprint

// The ladder scene has four small and four large nuclei. The size split
// guarantees that eroding 45% of the largest nucleus edits more pixels
// than deleting the smallest whole nucleus, while the phenotype penalty
// still orders the other way around; pixel-similarity metrics see these
// rungs in reverse.
std::vector<double> ladder_radii(Rng& rng) {
  std::vector<double> radii;
  for (int i = 0; i < 4; ++i) radii.push_back(rng.uniform_real(21.0, 22.0));
  for (int i = 0; i < 4; ++i) radii.push_back(rng.uniform_real(12.0, 13.0));
  return radii;
}

AddArtefact find_artefact_spot(Rng& rng, const std::vector<NucleusSpec>& nuclei) {
  const double lo = kArtefactRadius + kBorderMargin;
  const double hi = kLadderSide - 1.0 - kArtefactRadius - kBorderMargin;
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const double cx = rng.uniform_real(lo, hi);
    const double cy = rng.uniform_real(lo, hi);
    bool ok = true;
    for (const NucleusSpec& n : nuclei) {
      const double dx = cx - n.cx;
      const double dy = cy - n.cy;
      const double min_d = kArtefactRadius + n.radius + kSeparation;
      if (dx * dx + dy * dy < min_d * min_d) {
        ok = false;
        break;
      }
    }
    if (ok) return AddArtefact{cx, cy, kArtefactRadius};
  }
  throw std::runtime_error("severity_ladder: no room for the artefact disc");
}

}  // namespace

std::vector<LadderRung> severity_ladder(std::uint64_t seed) {
  Rng rng(seed);
  const std::vector<double> radii = ladder_radii(rng);

  Scene scene;
  scene.background = kLadderBackground;
  scene.nuclei = place_nuclei(rng, kLadderSide, radii, kLadderPeak,
                              NucleusProfile::FlatDisc);
  scene.image = GrayImage::Constant(kLadderSide, kLadderSide, kLadderBackground);
  for (const NucleusSpec& n : scene.nuclei) {
    paint_nucleus(scene.image, n, kLadderBackground);
  }

  std::vector<std::int64_t> footprint(scene.nuclei.size());
  for (std::size_t i = 0; i < scene.nuclei.size(); ++i) {
    footprint[i] = static_cast<std::int64_t>(
        disc_footprint(scene.nuclei[i].cx, scene.nuclei[i].cy,
                       scene.nuclei[i].radius, kLadderSide, kLadderSide)
            .size());
  }
  const std::int64_t total_area =
      std::accumulate(footprint.begin(), footprint.end(), std::int64_t{0});

  std::vector<int> by_size(scene.nuclei.size());
  std::iota(by_size.begin(), by_size.end(), 0);
  std::stable_sort(by_size.begin(), by_size.end(), [&](int a, int b) {
    return footprint[a] < footprint[b];
  });
  const int smallest = by_size.front();
  const int largest = by_size.back();

  const AddArtefact artefact = find_artefact_spot(rng, scene.nuclei);
  const auto artefact_area = static_cast<std::int64_t>(
      disc_footprint(artefact.cx, artefact.cy, artefact.radius, kLadderSide,
                     kLadderSide)
          .size());

  const auto nuclei_count = static_cast<std::int64_t>(scene.nuclei.size());
  const PhenotypeSummary base{nuclei_count, total_area, 0};

  auto apply_all = [&](const std::vector<Manipulation>& ms) {
    GrayImage img = scene.image;
    for (const Manipulation& m : ms) {
      img = apply_manipulation(img, scene.nuclei, scene.background, m);
    }
    return img;
  };

  const auto erode_pixels = [&](double fraction) {
    return std::llround(fraction * static_cast<double>(footprint[largest]));
  };

  std::vector<LadderRung> rungs;
  const auto add_rung = [&](std::string label, const std::vector<Manipulation>& ms,
                            PhenotypeSummary expected) {
    LadderRung rung;
    rung.rank = static_cast<int>(rungs.size());
    rung.label = std::move(label);
    rung.original = scene.image;
    rung.manipulated = apply_all(ms);
    rung.expected_original = base;
    rung.expected_manipulated = expected;
    rungs.push_back(std::move(rung));
  };

  add_rung("untouched", {}, base);
  add_rung("erode 12% of largest nucleus",
           {ErodeNucleusArea{largest, 0.12}},
           {nuclei_count, total_area - erode_pixels(0.12), 0});
  add_rung("erode 45% of largest nucleus",
           {ErodeNucleusArea{largest, 0.45}},
           {nuclei_count, total_area - erode_pixels(0.45), 0});
  add_rung("remove smallest nucleus", {RemoveNucleus{smallest}},
           {nuclei_count - 1, total_area - footprint[smallest], 0});
  add_rung("remove smallest nucleus + artefact",
           {RemoveNucleus{smallest}, artefact},
           {nuclei_count - 1, total_area - footprint[smallest], artefact_area});
  add_rung("remove three smallest nuclei + artefact",
           {RemoveNucleus{by_size[0]}, RemoveNucleus{by_size[1]},
            RemoveNucleus{by_size[2]}, artefact},
           {nuclei_count - 3,
            total_area - footprint[by_size[0]] - footprint[by_size[1]] -
                footprint[by_size[2]],
            artefact_area});
  return rungs;
}

}  // namespace phirm
