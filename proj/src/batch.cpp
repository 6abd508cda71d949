#include "phirm/batch.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <ctime>
#include <fstream>
#include <optional>
#include <thread>

#include <nlohmann/json.hpp>

#include "phirm/image_io.hpp"
#include "phirm/report_io.hpp"
#include "phirm/version.hpp"

namespace phirm {

namespace {

bool image_extension(const std::filesystem::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext == ".png" || ext == ".tif" || ext == ".tiff";
}

// stem -> path for every image file directly in `dir`, in sorted filename
// order so duplicate-stem resolution is deterministic.
std::map<std::string, std::filesystem::path> index_dir(
    const std::filesystem::path& dir, std::vector<std::string>& warnings) {
  if (!std::filesystem::is_directory(dir)) {
    throw std::runtime_error(dir.string() + " is not a directory");
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && image_extension(entry.path())) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());

  std::map<std::string, std::filesystem::path> by_stem;
  for (const auto& path : files) {
    const auto [it, inserted] = by_stem.emplace(path.stem().string(), path);
    if (!inserted) {
      warnings.push_back("duplicate stem '" + it->first + "': ignoring " +
                         path.string());
    }
  }
  return by_stem;
}

}  // namespace

PairMatch pair_by_stem(const std::filesystem::path& dir_original,
                       const std::filesystem::path& dir_reconstructed) {
  PairMatch match;
  const auto originals = index_dir(dir_original, match.warnings);
  const auto reconstructions = index_dir(dir_reconstructed, match.warnings);

  for (const auto& [stem, path] : originals) {
    const auto it = reconstructions.find(stem);
    if (it == reconstructions.end()) {
      match.warnings.push_back("no reconstruction for " + path.string());
      continue;
    }
    match.pairs.push_back(PairEntry{stem, path, it->second, ""});
  }
  for (const auto& [stem, path] : reconstructions) {
    if (!originals.count(stem)) {
      match.warnings.push_back("no original for " + path.string());
    }
  }
  if (match.pairs.empty()) {
    throw std::runtime_error("no filename stems in common between " +
                             dir_original.string() + " and " +
                             dir_reconstructed.string());
  }
  return match;
}

std::map<std::string, std::string> load_group_map(const std::filesystem::path& csv) {
  std::ifstream in(csv);
  if (!in) throw std::runtime_error("cannot open group map " + csv.string());

  std::map<std::string, std::string> groups;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw std::runtime_error("group map " + csv.string() +
                               ": expected 'stem,group' lines");
    }
    const std::string stem = line.substr(0, comma);
    const std::string group = line.substr(comma + 1);
    if (first && stem == "stem" && group == "group") {
      first = false;
      continue;  // header row
    }
    first = false;
    groups[stem] = group;
  }
  return groups;
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());

  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
    EVP_MD_CTX_free(ctx);
    throw std::runtime_error("sha256 init failed");
  }
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    if (EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount())) != 1) {
      EVP_MD_CTX_free(ctx);
      throw std::runtime_error("sha256 update failed");
    }
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  const int rc = EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);
  if (rc != 1) throw std::runtime_error("sha256 final failed");

  static const char* hex = "0123456789abcdef";
  std::string out(static_cast<std::size_t>(len) * 2, '0');
  for (unsigned int i = 0; i < len; ++i) {
    out[2 * i] = hex[digest[i] >> 4];
    out[2 * i + 1] = hex[digest[i] & 0xf];
  }
  return out;
}

Aggregate aggregate_scores(const std::vector<double>& scores) {
  Aggregate agg;
  agg.count = static_cast<std::int64_t>(scores.size());
  if (scores.empty()) return agg;

  double sum = 0.0;
  double min = scores.front();
  for (const double s : scores) {
    sum += s;
    min = std::min(min, s);
  }
  agg.mean_score = sum / static_cast<double>(scores.size());
  agg.min_score = min;

  std::vector<double> sorted = scores;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = sorted.size() / 2;
  agg.median_score = sorted.size() % 2 ? sorted[mid]
                                       : (sorted[mid - 1] + sorted[mid]) / 2.0;
  return agg;
}

RunManifest score_pairs(const std::vector<PairEntry>& pairs, const PhirmConfig& cfg,
                        int jobs) {
  cfg.validate();
  const int workers = std::max(
      1, std::min(jobs, static_cast<int>(std::max<std::size_t>(pairs.size(), 1))));

  std::vector<std::optional<PairResult>> slots(pairs.size());
  std::vector<std::string> errors(pairs.size());
  std::atomic<std::size_t> next{0};

  const auto work = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= pairs.size()) return;
      try {
        PairResult result;
        result.entry = pairs[i];
        result.original_sha256 = sha256_file(pairs[i].original);
        result.reconstructed_sha256 = sha256_file(pairs[i].reconstructed);
        const GrayImage original = load_gray8(pairs[i].original);
        const GrayImage reconstructed = load_gray8(pairs[i].reconstructed);
        result.report = phirm_score(original, reconstructed, cfg);
        result.baselines = baseline_scores(original, reconstructed);
        slots[i] = std::move(result);
      } catch (const std::exception& e) {
        errors[i] = pairs[i].stem + ": " + e.what();
      }
    }
  };

  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(workers));
    for (int t = 0; t < workers; ++t) threads.emplace_back(work);
    for (auto& t : threads) t.join();
  }

  RunManifest manifest;
  std::vector<double> all_scores;
  std::map<std::string, std::vector<double>> group_scores;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (!errors[i].empty()) {
      manifest.warnings.push_back(errors[i]);
      continue;
    }
    const double score = slots[i]->report.score;
    all_scores.push_back(score);
    if (!slots[i]->entry.group.empty()) {
      group_scores[slots[i]->entry.group].push_back(score);
    }
    manifest.results.push_back(std::move(*slots[i]));
  }
  manifest.overall = aggregate_scores(all_scores);
  for (const auto& [group, scores] : group_scores) {
    manifest.groups.emplace(group, aggregate_scores(scores));
  }
  return manifest;
}

namespace {

nlohmann::ordered_json to_json(const Aggregate& agg) {
  return nlohmann::ordered_json{
      {"count", agg.count},
      {"mean_score", json_double(agg.mean_score)},
      {"median_score", json_double(agg.median_score)},
      {"min_score", json_double(agg.min_score)},
  };
}

std::string utc_now_iso8601() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

nlohmann::ordered_json manifest_json(const RunManifest& manifest,
                                     const PhirmConfig& cfg) {
  nlohmann::ordered_json pairs = nlohmann::ordered_json::array();
  for (const PairResult& r : manifest.results) {
    nlohmann::ordered_json row{
        {"stem", r.entry.stem},
        {"original", r.entry.original.string()},
        {"reconstructed", r.entry.reconstructed.string()},
        {"original_sha256", r.original_sha256},
        {"reconstructed_sha256", r.reconstructed_sha256},
        {"group", r.entry.group},
        {"phirm", to_json(r.report)},
        {"baselines", to_json(r.baselines)},
    };
    pairs.push_back(std::move(row));
  }

  nlohmann::ordered_json groups = nlohmann::ordered_json::object();
  for (const auto& [name, agg] : manifest.groups) {
    groups[name] = to_json(agg);
  }

  return nlohmann::ordered_json{
      {"tool", "phirm"},
      {"version", kVersion},
      {"created_at", utc_now_iso8601()},
      {"config", to_json(cfg)},
      {"pairs", std::move(pairs)},
      {"warnings", manifest.warnings},
      {"aggregates",
       nlohmann::ordered_json{
           {"overall", to_json(manifest.overall)},
           {"groups", std::move(groups)},
       }},
  };
}

}  // namespace phirm
