// phirm: score inpainted microscopy images against their originals, and
// produce the masks, patches and synthetic fixtures used to benchmark
// reconstruction models.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "phirm/batch.hpp"
#include "phirm/baselines.hpp"
#include "phirm/config_io.hpp"
#include "phirm/image_io.hpp"
#include "phirm/maskgen.hpp"
#include "phirm/metric.hpp"
#include "phirm/patches.hpp"
#include "phirm/report_io.hpp"
#include "phirm/synthval.hpp"
#include "phirm/version.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPartial = 1;
constexpr int kExitInvalidInput = 2;
constexpr int kExitInternal = 3;

std::uint64_t auto_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) | rd();
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot create " + path.string());
  out << text;
  if (!out.flush()) throw std::runtime_error("write failed: " + path.string());
}

// Appends a CSV row, writing the header first when the file is new/empty.
void append_report_csv(const fs::path& path, const std::vector<std::string>& row) {
  const bool fresh = !fs::exists(path) || fs::file_size(path) == 0;
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  if (fresh) out << phirm::csv_line(phirm::report_csv_header());
  out << phirm::csv_line(row);
  if (!out.flush()) throw std::runtime_error("write failed: " + path.string());
}

phirm::GrayImage load_as_gray8(const fs::path& path) {
  const phirm::LoadedImage img = phirm::load_image(path);
  if (img.bits_per_sample == 8) return img.samples.cast<std::uint8_t>();
  return phirm::normalize_minmax(img.samples);
}

// --- score pair -----------------------------------------------------------

struct PairArgs {
  std::string original;
  std::string reconstructed;
  std::string config;
  std::string csv;
};

int run_score_pair(const PairArgs& args) {
  const phirm::PhirmConfig cfg = phirm::resolve_config(args.config);
  const phirm::GrayImage original = phirm::load_gray8(args.original);
  const phirm::GrayImage reconstructed = phirm::load_gray8(args.reconstructed);

  const phirm::PhirmReport report = phirm::phirm_score(original, reconstructed, cfg);
  const phirm::BaselineScores base = phirm::baseline_scores(original, reconstructed);

  const ordered_json doc{
      {"original", args.original},
      {"reconstructed", args.reconstructed},
      {"phirm", phirm::to_json(report)},
      {"baselines", phirm::to_json(base)},
  };
  std::cout << doc.dump(2) << "\n";

  if (!args.csv.empty()) {
    append_report_csv(args.csv, phirm::report_csv_fields(args.original,
                                                         args.reconstructed,
                                                         report, base));
  }
  return kExitOk;
}

// --- score batch ------------------------------------------------------------

struct BatchArgs {
  std::string dir_original;
  std::string dir_reconstructed;
  std::string pairs_csv;
  std::string config;
  std::string groups;
  std::string manifest;
  std::string csv;
  int jobs = 0;
};

std::vector<phirm::PairEntry> load_pairs_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open pair list " + path.string());
  std::vector<phirm::PairEntry> pairs;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      cols.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (cols.size() < 2) {
      throw std::runtime_error("pair list " + path.string() +
                               ": expected 'original,reconstructed[,group]'");
    }
    if (first && cols[0] == "original" && cols[1] == "reconstructed") {
      first = false;
      continue;
    }
    first = false;
    phirm::PairEntry entry;
    entry.original = cols[0];
    entry.reconstructed = cols[1];
    entry.stem = entry.original.stem().string();
    if (cols.size() > 2) entry.group = cols[2];
    pairs.push_back(std::move(entry));
  }
  if (pairs.empty()) throw std::runtime_error("pair list " + path.string() + " is empty");
  return pairs;
}

int run_score_batch(const BatchArgs& args) {
  const phirm::PhirmConfig cfg = phirm::resolve_config(args.config);

  std::vector<phirm::PairEntry> pairs;
  std::vector<std::string> pairing_warnings;
  if (!args.pairs_csv.empty()) {
    pairs = load_pairs_csv(args.pairs_csv);
  } else {
    phirm::PairMatch match =
        phirm::pair_by_stem(args.dir_original, args.dir_reconstructed);
    pairs = std::move(match.pairs);
    pairing_warnings = std::move(match.warnings);
  }

  if (!args.groups.empty()) {
    const auto groups = phirm::load_group_map(args.groups);
    for (phirm::PairEntry& entry : pairs) {
      const auto it = groups.find(entry.stem);
      if (it != groups.end()) entry.group = it->second;
    }
  }

  const int jobs = args.jobs > 0
                       ? args.jobs
                       : static_cast<int>(
                             std::max(1u, std::thread::hardware_concurrency()));
  phirm::RunManifest manifest = phirm::score_pairs(pairs, cfg, jobs);
  manifest.warnings.insert(manifest.warnings.begin(), pairing_warnings.begin(),
                           pairing_warnings.end());

  const ordered_json doc = phirm::manifest_json(manifest, cfg);
  if (args.manifest.empty()) {
    std::cout << doc.dump(2) << "\n";
  } else {
    write_text_file(args.manifest, doc.dump(2) + "\n");
  }

  if (!args.csv.empty()) {
    std::string csv = phirm::csv_line(phirm::report_csv_header());
    for (const phirm::PairResult& r : manifest.results) {
      csv += phirm::csv_line(phirm::report_csv_fields(
          r.entry.original.string(), r.entry.reconstructed.string(), r.report,
          r.baselines));
    }
    write_text_file(args.csv, csv);
  }

  for (const std::string& w : manifest.warnings) {
    std::cerr << "warning: " << w << "\n";
  }
  return manifest.warnings.empty() ? kExitOk : kExitPartial;
}

// --- mask subcommands -------------------------------------------------------

struct MaskExtractArgs {
  std::string input;
  std::string output;
  double multiplier = 0.7;
  int radius = 1;
};

int run_mask_extract(const MaskExtractArgs& args) {
  const phirm::GrayImage cfp = load_as_gray8(args.input);
  const phirm::BinaryMask mask =
      phirm::extract_spa_mask(cfp, args.multiplier, args.radius);
  phirm::write_mask_png(args.output, mask);
  return kExitOk;
}

struct MaskGenArgs {
  std::string out_dir;
  int count = 1;
  int side = 256;
  std::uint64_t seed = 0;
  bool seed_set = false;
  // rect
  double fraction_lo = 0.10;
  double fraction_hi = 0.20;
  // irregular
  phirm::IrregularMaskSpec irregular;
};

double mask_fraction(const phirm::BinaryMask& mask) {
  return static_cast<double>(mask.count()) / static_cast<double>(mask.size());
}

int run_mask_rect(MaskGenArgs& args) {
  if (!args.seed_set) args.seed = auto_seed();
  fs::create_directories(args.out_dir);

  std::string csv = phirm::csv_line({"file", "seed", "area_fraction"});
  for (int i = 0; i < args.count; ++i) {
    phirm::RectMaskSpec spec;
    spec.image_side = args.side;
    spec.area_fraction_lo = args.fraction_lo;
    spec.area_fraction_hi = args.fraction_hi;
    spec.seed = args.seed + static_cast<std::uint64_t>(i);
    const phirm::BinaryMask mask = phirm::gen_rect_mask(spec);

    char name[32];
    std::snprintf(name, sizeof name, "mask_%05d.png", i);
    phirm::write_mask_png(fs::path(args.out_dir) / name, mask);
    csv += phirm::csv_line({name, std::to_string(spec.seed),
                            phirm::format_double(mask_fraction(mask))});
  }
  write_text_file(fs::path(args.out_dir) / "masks.csv", csv);
  return kExitOk;
}

int run_mask_irregular(MaskGenArgs& args) {
  if (!args.seed_set) args.seed = auto_seed();
  fs::create_directories(args.out_dir);

  std::string csv = phirm::csv_line({"file", "seed", "area_fraction"});
  for (int i = 0; i < args.count; ++i) {
    phirm::IrregularMaskSpec spec = args.irregular;
    spec.image_side = args.side;
    spec.seed = args.seed + static_cast<std::uint64_t>(i);
    const phirm::BinaryMask mask = phirm::gen_irregular_mask(spec);

    char name[32];
    std::snprintf(name, sizeof name, "mask_%05d.png", i);
    phirm::write_mask_png(fs::path(args.out_dir) / name, mask);
    csv += phirm::csv_line({name, std::to_string(spec.seed),
                            phirm::format_double(mask_fraction(mask))});
  }
  write_text_file(fs::path(args.out_dir) / "masks.csv", csv);
  return kExitOk;
}

// --- patches ---------------------------------------------------------------

struct PatchArgs {
  std::vector<std::string> inputs;
  std::string out_dir;
  int side = 256;
  int stride = 0;  // 0 = same as side
  double zoom = 1.0;
  bool drop_partial = false;
};

int run_patches(const PatchArgs& args) {
  fs::create_directories(args.out_dir);
  phirm::PatchGrid grid;
  grid.patch_side = args.side;
  grid.stride = args.stride > 0 ? args.stride : args.side;
  grid.zoom = args.zoom;
  grid.edge_policy = args.drop_partial ? phirm::EdgePolicy::DropPartial
                                       : phirm::EdgePolicy::AnchorToEdge;

  std::string csv = phirm::csv_line(
      {"source", "row", "col", "x_offset", "y_offset", "file"});
  for (const std::string& input : args.inputs) {
    const phirm::LoadedImage img = phirm::load_image(input);
    const std::string stem = fs::path(input).stem().string();
    for (const phirm::Patch& patch : phirm::gen_patches(img.samples, grid)) {
      char name[128];
      std::snprintf(name, sizeof name, "%s_r%03d_c%03d.png", stem.c_str(),
                    patch.row, patch.col);
      phirm::write_png8(fs::path(args.out_dir) / name, patch.image);
      csv += phirm::csv_line({input, std::to_string(patch.row),
                              std::to_string(patch.col),
                              std::to_string(patch.x_offset),
                              std::to_string(patch.y_offset), name});
    }
  }
  write_text_file(fs::path(args.out_dir) / "patches.csv", csv);
  return kExitOk;
}

// --- synth ladder ------------------------------------------------------------

struct LadderArgs {
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string config;
};

int run_synth_ladder(LadderArgs& args) {
  if (!args.seed_set) args.seed = auto_seed();
  const phirm::PhirmConfig cfg = phirm::resolve_config(args.config);
  fs::create_directories(args.out_dir);

  const std::vector<phirm::LadderRung> rungs = phirm::severity_ladder(args.seed);
  phirm::write_png8(fs::path(args.out_dir) / "original.png", rungs.front().original);

  std::string csv = phirm::csv_line({"rank", "label", "file", "seed", "score",
                                     "nucleus_count", "nucleus_area",
                                     "artefact_area"});
  for (const phirm::LadderRung& rung : rungs) {
    char name[32];
    std::snprintf(name, sizeof name, "rung_%d.png", rung.rank);
    phirm::write_png8(fs::path(args.out_dir) / name, rung.manipulated);

    const phirm::PhirmReport report =
        phirm::phirm_score(rung.original, rung.manipulated, cfg);
    csv += phirm::csv_line(
        {std::to_string(rung.rank), rung.label, name, std::to_string(args.seed),
         phirm::format_double(report.score),
         std::to_string(report.reconstructed.nucleus_count),
         std::to_string(report.reconstructed.nucleus_area),
         std::to_string(report.reconstructed.artefact_area)});
  }
  write_text_file(fs::path(args.out_dir) / "ladder.csv", csv);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"phenotype-preserving reconstruction scoring for fluorescence "
               "microscopy inpainting"};
  app.set_version_flag("--version", phirm::kVersion);
  app.require_subcommand(1);

  PairArgs pair_args;
  BatchArgs batch_args;
  MaskExtractArgs extract_args;
  MaskGenArgs rect_args;
  MaskGenArgs irregular_args;
  PatchArgs patch_args;
  LadderArgs ladder_args;
  int exit_code = kExitOk;

  auto* score = app.add_subcommand("score", "score reconstructions against originals");
  score->require_subcommand(1);

  auto* pair = score->add_subcommand("pair", "score one (original, reconstructed) pair");
  pair->add_option("original", pair_args.original, "original image")->required();
  pair->add_option("reconstructed", pair_args.reconstructed, "reconstructed image")
      ->required();
  pair->add_option("--config", pair_args.config,
                   "config file (default: $PHIRM_CONFIG, then built-ins)");
  pair->add_option("--csv", pair_args.csv, "append the row to this CSV file");
  pair->callback([&] { exit_code = run_score_pair(pair_args); });

  auto* batch = score->add_subcommand("batch", "score two directories paired by stem");
  batch->add_option("--originals", batch_args.dir_original, "directory of originals");
  batch->add_option("--reconstructions", batch_args.dir_reconstructed,
                    "directory of reconstructions");
  batch->add_option("--pairs", batch_args.pairs_csv,
                    "explicit pair list CSV (original,reconstructed[,group]) "
                    "instead of directory pairing");
  batch->add_option("--config", batch_args.config, "config file");
  batch->add_option("--groups", batch_args.groups,
                    "stem,group CSV; group aggregates land in the manifest");
  batch->add_option("--manifest", batch_args.manifest,
                    "write manifest JSON here (default: stdout)");
  batch->add_option("--csv", batch_args.csv, "write per-pair rows to this CSV file");
  batch->add_option("--jobs", batch_args.jobs, "parallel workers (default: all cores)");
  batch->callback([&] {
    const bool by_dir = !batch_args.dir_original.empty() ||
                        !batch_args.dir_reconstructed.empty();
    if (batch_args.pairs_csv.empty() &&
        (batch_args.dir_original.empty() || batch_args.dir_reconstructed.empty())) {
      throw CLI::ValidationError(
          "score batch", "need --originals and --reconstructions, or --pairs");
    }
    if (!batch_args.pairs_csv.empty() && by_dir) {
      throw CLI::ValidationError("score batch",
                                 "--pairs excludes --originals/--reconstructions");
    }
    exit_code = run_score_batch(batch_args);
  });

  auto* mask = app.add_subcommand("mask", "artefact masks: extracted or generated");
  mask->require_subcommand(1);

  auto* extract = mask->add_subcommand(
      "extract", "artefact mask from a CFP-channel image (scaled Otsu + open/close)");
  extract->add_option("input", extract_args.input, "CFP-channel image")->required();
  extract->add_option("-o,--out", extract_args.output, "output mask PNG")->required();
  extract->add_option("--multiplier", extract_args.multiplier,
                      "Otsu threshold multiplier, in (0, 1]")
      ->capture_default_str();
  extract->add_option("--radius", extract_args.radius,
                      "structuring-element radius for open/close")
      ->capture_default_str();
  extract->callback([&] { exit_code = run_mask_extract(extract_args); });

  const auto add_gen_common = [](CLI::App* cmd, MaskGenArgs& args) {
    cmd->add_option("-o,--out", args.out_dir, "output directory")->required();
    cmd->add_option("--count", args.count, "number of masks")->capture_default_str();
    cmd->add_option("--side", args.side, "mask side in pixels")->capture_default_str();
    cmd->add_option("--seed", args.seed,
                    "base seed; mask i uses seed + i (auto-chosen and recorded "
                    "in masks.csv when omitted)")
        ->each([&args](const std::string&) { args.seed_set = true; });
  };

  auto* rect = mask->add_subcommand("rect", "solid rectangles in an area-fraction range");
  add_gen_common(rect, rect_args);
  rect->add_option("--min-fraction", rect_args.fraction_lo, "lower area fraction")
      ->capture_default_str();
  rect->add_option("--max-fraction", rect_args.fraction_hi, "upper area fraction")
      ->capture_default_str();
  rect->callback([&] { exit_code = run_mask_rect(rect_args); });

  auto* irregular = mask->add_subcommand("irregular", "free-form thick-stroke masks");
  add_gen_common(irregular, irregular_args);
  irregular
      ->add_option("--min-brush", irregular_args.irregular.min_brush_width,
                   "minimum brush width")
      ->capture_default_str();
  irregular
      ->add_option("--max-brush", irregular_args.irregular.max_brush_width,
                   "maximum brush width")
      ->capture_default_str();
  irregular
      ->add_option("--min-strokes", irregular_args.irregular.min_strokes,
                   "minimum stroke count")
      ->capture_default_str();
  irregular
      ->add_option("--max-strokes", irregular_args.irregular.max_strokes,
                   "maximum stroke count")
      ->capture_default_str();
  irregular->callback([&] { exit_code = run_mask_irregular(irregular_args); });

  auto* patches = app.add_subcommand(
      "patches", "cut frames into per-patch normalized tiles");
  patches->add_option("inputs", patch_args.inputs, "input frames (PNG or TIFF)")
      ->required();
  patches->add_option("-o,--out", patch_args.out_dir, "output directory")->required();
  patches->add_option("--side", patch_args.side, "patch side")->capture_default_str();
  patches->add_option("--stride", patch_args.stride, "grid stride (default: side)");
  patches->add_option("--zoom", patch_args.zoom,
                      "source-crop scale; crops side*zoom, emits side")
      ->capture_default_str();
  patches->add_flag("--drop-partial", patch_args.drop_partial,
                    "drop edge windows instead of anchoring them to the edge");
  patches->callback([&] { exit_code = run_patches(patch_args); });

  auto* synth = app.add_subcommand("synth", "synthetic validation fixtures");
  synth->require_subcommand(1);
  auto* ladder = synth->add_subcommand(
      "ladder", "six-rung severity ladder over one seeded scene");
  ladder->add_option("-o,--out", ladder_args.out_dir, "output directory")->required();
  ladder
      ->add_option("--seed", ladder_args.seed,
                   "scene seed (auto-chosen and recorded in ladder.csv when omitted)")
      ->each([&](const std::string&) { ladder_args.seed_set = true; });
  ladder->add_option("--config", ladder_args.config, "config file for the score column");
  ladder->callback([&] { exit_code = run_synth_ladder(ladder_args); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInvalidInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return exit_code;
}
