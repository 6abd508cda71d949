#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "phirm/plane.hpp"
#include "phirm/segment.hpp"

namespace phirm {

/// Weights and thresholds of the phenotype score. The defaults are the
/// calibration for fluorescent nuclei screens: artefacts are saturated
/// blobs (max 255, mean >= 210), nuclei below 50 px are noise, and a
/// component of 2200 px or more holds two overlapping nuclei.
struct PhirmConfig {
  double ncd_base = 1.1;       // count-difference base for missing nuclei
  double ncd_neg_base = 2.0;   // count-difference base for extra nuclei
  double w_nad = 0.0002;       // per-pixel weight of nucleus-area difference
  double w_aad = 0.001;        // per-pixel weight of artefact-area difference
  std::int64_t min_component_area = 50;
  std::uint8_t artefact_max_value = 255;
  double artefact_mean_floor = 210.0;
  std::int64_t single_nucleus_max_area = 2200;

  /// Throws std::invalid_argument when a field is out of range
  /// (bases > 1, weights > 0, areas >= 0, mean floor within 0..255).
  void validate() const;
};

enum class ComponentClass {
  Artefact,
  SingleNucleus,
  DoubleNucleus,
};

/// Classification of one component, assuming it already passed the
/// min-area filter:
///   * Artefact when max == artefact_max_value and mean >= artefact_mean_floor
///     (the unrounded mean is compared);
///   * otherwise a nucleus: single below single_nucleus_max_area, double at
///     or above it. Area alone decides single vs double, so a saturated
///     component with a sub-floor mean still lands in the right size class.
ComponentClass classify_component(const ComponentStats& stats,
                                  const PhirmConfig& cfg);

/// Per-image phenotype totals. A DoubleNucleus component contributes 2 to
/// the count and its full area to nucleus_area.
struct PhenotypeSummary {
  std::int64_t nucleus_count = 0;
  std::int64_t nucleus_area = 0;
  std::int64_t artefact_area = 0;

  bool operator==(const PhenotypeSummary&) const = default;
};

/// Accumulates classified components into a summary, dropping every
/// component below cfg.min_component_area first.
PhenotypeSummary summarize_components(std::span<const ComponentStats> stats,
                                      const PhirmConfig& cfg);

/// Full phenotype extraction: Otsu threshold, binarize, 8-connected
/// labeling, min-area filter, classification, totals.
PhenotypeSummary summarize_phenotype(const GrayImage& img, const PhirmConfig& cfg);

/// Count-difference penalty. alpha = count(original) - count(reconstructed):
/// missing nuclei give alpha > 0 and the mild ncd_base^alpha penalty,
/// hallucinated extra nuclei give alpha < 0 and the harsh
/// ncd_neg_base^|alpha| penalty.
double ncd(std::int64_t alpha, const PhirmConfig& cfg);

/// Area-difference penalties. Both use the absolute difference so that a
/// deviation in either direction is penalised; the signed differences are
/// kept in PhirmReport for diagnostics.
double nad(const PhenotypeSummary& original, const PhenotypeSummary& reconstructed,
           const PhirmConfig& cfg);
double aad(const PhenotypeSummary& original, const PhenotypeSummary& reconstructed,
           const PhirmConfig& cfg);

struct PhirmReport {
  std::int64_t alpha = 0;
  double ncd = 0.0;
  double nad = 0.0;
  double aad = 0.0;
  double raw_score = 1.0;  // (10 - (ncd + nad + aad)) / 10, unclamped
  double score = 1.0;      // raw_score clamped to [0, 1]
  std::int64_t nucleus_area_diff = 0;   // signed, original - reconstructed
  std::int64_t artefact_area_diff = 0;  // signed, original - reconstructed
  PhenotypeSummary original;
  PhenotypeSummary reconstructed;
};

PhirmReport score_summaries(const PhenotypeSummary& original,
                            const PhenotypeSummary& reconstructed,
                            const PhirmConfig& cfg);

/// Scores a reconstruction against its original. Both images must share
/// dimensions. Identical phenotype summaries give exactly 1.0.
PhirmReport phirm_score(const GrayImage& original, const GrayImage& reconstructed,
                        const PhirmConfig& cfg = {});

}  // namespace phirm
