#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "phirm/baselines.hpp"
#include "phirm/metric.hpp"

namespace phirm {

struct PairEntry {
  std::string stem;
  std::filesystem::path original;
  std::filesystem::path reconstructed;
  std::string group;  // empty = ungrouped
};

struct PairMatch {
  std::vector<PairEntry> pairs;          // sorted by stem
  std::vector<std::string> warnings;     // unmatched files, one line each
};

/// Pairs images across two directories by filename stem. Files without a
/// partner become warnings. Throws std::runtime_error when the
/// intersection is empty.
PairMatch pair_by_stem(const std::filesystem::path& dir_original,
                       const std::filesystem::path& dir_reconstructed);

/// stem -> group label, from a two-column CSV (header optional).
std::map<std::string, std::string> load_group_map(const std::filesystem::path& csv);

struct PairResult {
  PairEntry entry;
  std::string original_sha256;
  std::string reconstructed_sha256;
  PhirmReport report;
  BaselineScores baselines;
};

struct Aggregate {
  std::int64_t count = 0;
  double mean_score = 0.0;
  double median_score = 0.0;
  double min_score = 0.0;
};

Aggregate aggregate_scores(const std::vector<double>& scores);

struct RunManifest {
  std::vector<PairResult> results;       // in pair order (sorted by stem)
  std::vector<std::string> warnings;
  Aggregate overall;
  std::map<std::string, Aggregate> groups;
};

/// Scores every pair, up to `jobs` at a time. Results keep the input
/// order no matter how the work interleaves. A pair that fails to load or
/// score turns into a warning instead of aborting the batch.
RunManifest score_pairs(const std::vector<PairEntry>& pairs, const PhirmConfig& cfg,
                        int jobs = 1);

/// Full manifest document: tool version, timestamp, config snapshot,
/// per-pair rows with content hashes, warnings, aggregates.
nlohmann::ordered_json manifest_json(const RunManifest& manifest,
                                     const PhirmConfig& cfg);

/// Hex SHA-256 of a file's contents.
std::string sha256_file(const std::filesystem::path& path);

}  // namespace phirm
