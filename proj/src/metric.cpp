#include "phirm/metric.hpp"

#include <algorithm>
#include <cmath>

namespace phirm {

void PhirmConfig::validate() const {
  if (!(ncd_base > 1.0) || !(ncd_neg_base > 1.0)) {
    throw std::invalid_argument("PhirmConfig: count-difference bases must be > 1");
  }
  if (!(w_nad > 0.0) || !(w_aad > 0.0)) {
    throw std::invalid_argument("PhirmConfig: area weights must be > 0");
  }
  if (min_component_area < 0) {
    throw std::invalid_argument("PhirmConfig: min_component_area must be >= 0");
  }
  if (artefact_mean_floor < 0.0 || artefact_mean_floor > 255.0) {
    throw std::invalid_argument("PhirmConfig: artefact_mean_floor must be in 0..255");
  }
  if (single_nucleus_max_area <= 0) {
    throw std::invalid_argument("PhirmConfig: single_nucleus_max_area must be > 0");
  }
}

ComponentClass classify_component(const ComponentStats& stats,
                                  const PhirmConfig& cfg) {
  if (stats.max == cfg.artefact_max_value && stats.mean >= cfg.artefact_mean_floor) {
    return ComponentClass::Artefact;
  }
  return stats.area < cfg.single_nucleus_max_area ? ComponentClass::SingleNucleus
                                                  : ComponentClass::DoubleNucleus;
}

PhenotypeSummary summarize_components(std::span<const ComponentStats> stats,
                                      const PhirmConfig& cfg) {
  PhenotypeSummary summary;
  for (const ComponentStats& s : stats) {
    if (s.area < cfg.min_component_area) continue;
    switch (classify_component(s, cfg)) {
      case ComponentClass::Artefact:
        summary.artefact_area += s.area;
        break;
      case ComponentClass::SingleNucleus:
        summary.nucleus_count += 1;
        summary.nucleus_area += s.area;
        break;
      case ComponentClass::DoubleNucleus:
        summary.nucleus_count += 2;
        summary.nucleus_area += s.area;
        break;
    }
  }
  return summary;
}

PhenotypeSummary summarize_phenotype(const GrayImage& img, const PhirmConfig& cfg) {
  if (img.size() == 0) {
    throw std::invalid_argument("summarize_phenotype: empty image");
  }
  const std::uint8_t t = otsu_threshold(img);
  const BinaryMask mask = binarize(img, t);
  const ComponentLabeling labeling = connected_components(mask);
  const std::vector<ComponentStats> stats = component_stats(labeling, img);
  return summarize_components(stats, cfg);
}

double ncd(std::int64_t alpha, const PhirmConfig& cfg) {
  if (alpha == 0) return 0.0;
  if (alpha > 0) return std::pow(cfg.ncd_base, static_cast<double>(alpha));
  return std::pow(cfg.ncd_neg_base, static_cast<double>(-alpha));
}

double nad(const PhenotypeSummary& original, const PhenotypeSummary& reconstructed,
           const PhirmConfig& cfg) {
  const std::int64_t diff = original.nucleus_area - reconstructed.nucleus_area;
  return cfg.w_nad * static_cast<double>(diff < 0 ? -diff : diff);
}

double aad(const PhenotypeSummary& original, const PhenotypeSummary& reconstructed,
           const PhirmConfig& cfg) {
  const std::int64_t diff = original.artefact_area - reconstructed.artefact_area;
  return cfg.w_aad * static_cast<double>(diff < 0 ? -diff : diff);
}

PhirmReport score_summaries(const PhenotypeSummary& original,
                            const PhenotypeSummary& reconstructed,
                            const PhirmConfig& cfg) {
  PhirmReport r;
  r.original = original;
  r.reconstructed = reconstructed;
  r.alpha = original.nucleus_count - reconstructed.nucleus_count;
  r.nucleus_area_diff = original.nucleus_area - reconstructed.nucleus_area;
  r.artefact_area_diff = original.artefact_area - reconstructed.artefact_area;
  r.ncd = ncd(r.alpha, cfg);
  r.nad = nad(original, reconstructed, cfg);
  r.aad = aad(original, reconstructed, cfg);
  r.raw_score = (10.0 - (r.ncd + r.nad + r.aad)) / 10.0;
  r.score = std::clamp(r.raw_score, 0.0, 1.0);
  return r;
}

PhirmReport phirm_score(const GrayImage& original, const GrayImage& reconstructed,
                        const PhirmConfig& cfg) {
  require_same_dims(original, reconstructed, "phirm_score");
  return score_summaries(summarize_phenotype(original, cfg),
                         summarize_phenotype(reconstructed, cfg), cfg);
}

}  // namespace phirm
