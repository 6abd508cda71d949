#include "phirm/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include <nlohmann/json.hpp>

namespace phirm {

std::string format_double(double v) {
  // Shortest decimal form that parses back to the same bits.
  char buf[64];
  for (int precision = 1; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

nlohmann::ordered_json json_double(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

nlohmann::ordered_json to_json(const PhenotypeSummary& s) {
  return nlohmann::ordered_json{
      {"nucleus_count", s.nucleus_count},
      {"nucleus_area", s.nucleus_area},
      {"artefact_area", s.artefact_area},
  };
}

nlohmann::ordered_json to_json(const PhirmReport& r) {
  return nlohmann::ordered_json{
      {"score", json_double(r.score)},
      {"raw_score", json_double(r.raw_score)},
      {"alpha", r.alpha},
      {"ncd", json_double(r.ncd)},
      {"nad", json_double(r.nad)},
      {"aad", json_double(r.aad)},
      {"nucleus_area_diff", r.nucleus_area_diff},
      {"artefact_area_diff", r.artefact_area_diff},
      {"original", to_json(r.original)},
      {"reconstructed", to_json(r.reconstructed)},
  };
}

nlohmann::ordered_json to_json(const BaselineScores& b) {
  return nlohmann::ordered_json{
      {"mse", json_double(b.mse)},
      {"psnr_db", json_double(b.psnr_db)},
      {"ssim", json_double(b.ssim)},
  };
}

nlohmann::ordered_json to_json(const PhirmConfig& cfg) {
  return nlohmann::ordered_json{
      {"ncd_base", cfg.ncd_base},
      {"ncd_neg_base", cfg.ncd_neg_base},
      {"w_nad", cfg.w_nad},
      {"w_aad", cfg.w_aad},
      {"min_component_area", cfg.min_component_area},
      {"artefact_max_value", cfg.artefact_max_value},
      {"artefact_mean_floor", cfg.artefact_mean_floor},
      {"single_nucleus_max_area", cfg.single_nucleus_max_area},
  };
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (const char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string csv_line(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += csv_escape(fields[i]);
  }
  out += "\r\n";
  return out;
}

const std::vector<std::string>& report_csv_header() {
  static const std::vector<std::string> header{
      "original",
      "reconstructed",
      "score",
      "raw_score",
      "alpha",
      "ncd",
      "nad",
      "aad",
      "nucleus_count_original",
      "nucleus_count_reconstructed",
      "nucleus_area_original",
      "nucleus_area_reconstructed",
      "artefact_area_original",
      "artefact_area_reconstructed",
      "nucleus_area_diff",
      "artefact_area_diff",
      "mse",
      "psnr_db",
      "ssim",
  };
  return header;
}

namespace {

std::string csv_double(double v) {
  if (std::isfinite(v)) return format_double(v);
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

}  // namespace

std::vector<std::string> report_csv_fields(const std::string& original,
                                           const std::string& reconstructed,
                                           const PhirmReport& r,
                                           const BaselineScores& b) {
  return {
      original,
      reconstructed,
      csv_double(r.score),
      csv_double(r.raw_score),
      std::to_string(r.alpha),
      csv_double(r.ncd),
      csv_double(r.nad),
      csv_double(r.aad),
      std::to_string(r.original.nucleus_count),
      std::to_string(r.reconstructed.nucleus_count),
      std::to_string(r.original.nucleus_area),
      std::to_string(r.reconstructed.nucleus_area),
      std::to_string(r.original.artefact_area),
      std::to_string(r.reconstructed.artefact_area),
      std::to_string(r.nucleus_area_diff),
      std::to_string(r.artefact_area_diff),
      csv_double(b.mse),
      csv_double(b.psnr_db),
      csv_double(b.ssim),
  };
}

}  // namespace phirm
