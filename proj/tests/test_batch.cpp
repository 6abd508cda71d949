#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "phirm/batch.hpp"
#include "phirm/image_io.hpp"
#include "phirm/synthval.hpp"

using namespace phirm;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) {
    path = fs::temp_directory_path() / name;
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

void write_text(const fs::path& p, const std::string& body) {
  std::ofstream out(p, std::ios::binary);
  out << body;
}

GrayImage scene_image(std::uint64_t seed) {
  SceneSpec spec;
  spec.seed = seed;
  spec.nucleus_count = 3;
  spec.image_side = 96;
  spec.min_radius = 8.0;
  spec.max_radius = 12.0;
  spec.profile = NucleusProfile::FlatDisc;
  return gen_scene(spec).image;
}

}  // namespace

TEST_CASE("pair_by_stem matches stems and reports orphans") {
  TempDir orig("phirm_batch_orig");
  TempDir recon("phirm_batch_recon");
  const GrayImage img = scene_image(11);
  write_png8(orig.path / "a.png", img);
  write_png8(orig.path / "b.png", img);
  write_png8(orig.path / "c.png", img);
  write_png8(recon.path / "b.png", img);
  write_png8(recon.path / "c.png", img);
  write_png8(recon.path / "d.png", img);
  write_text(orig.path / "notes.txt", "not an image");

  PairMatch match = pair_by_stem(orig.path, recon.path);
  REQUIRE(match.pairs.size() == 2);
  CHECK(match.pairs[0].stem == "b");
  CHECK(match.pairs[1].stem == "c");
  CHECK(match.pairs[0].original == orig.path / "b.png");
  CHECK(match.pairs[0].reconstructed == recon.path / "b.png");

  REQUIRE(match.warnings.size() == 2);
  CHECK(match.warnings[0].find("no reconstruction for") != std::string::npos);
  CHECK(match.warnings[0].find("a.png") != std::string::npos);
  CHECK(match.warnings[1].find("no original for") != std::string::npos);
  CHECK(match.warnings[1].find("d.png") != std::string::npos);
}

TEST_CASE("pair_by_stem warns on duplicate stems and keeps the first file") {
  TempDir orig("phirm_batch_dup_orig");
  TempDir recon("phirm_batch_dup_recon");
  const GrayImage img = scene_image(12);
  write_png8(orig.path / "x.png", img);
  write_png8(orig.path / "x.tif", img);  // sorts after x.png, gets dropped
  write_png8(recon.path / "x.png", img);

  PairMatch match = pair_by_stem(orig.path, recon.path);
  REQUIRE(match.pairs.size() == 1);
  CHECK(match.pairs[0].original == orig.path / "x.png");
  REQUIRE(match.warnings.size() == 1);
  CHECK(match.warnings[0].find("duplicate stem 'x'") != std::string::npos);
  CHECK(match.warnings[0].find("x.tif") != std::string::npos);
}

TEST_CASE("pair_by_stem throws when nothing matches") {
  TempDir orig("phirm_batch_empty_orig");
  TempDir recon("phirm_batch_empty_recon");
  const GrayImage img = scene_image(13);
  write_png8(orig.path / "a.png", img);
  write_png8(recon.path / "b.png", img);
  CHECK_THROWS_AS(pair_by_stem(orig.path, recon.path), std::runtime_error);
  CHECK_THROWS_AS(pair_by_stem(orig.path / "missing", recon.path),
                  std::runtime_error);
}

TEST_CASE("group map csv: optional header, crlf, missing comma") {
  TempDir dir("phirm_batch_groups");
  write_text(dir.path / "groups.csv",
             "stem,group\r\nimg1,treated\r\nimg2,control\r\n");
  auto groups = load_group_map(dir.path / "groups.csv");
  REQUIRE(groups.size() == 2);
  CHECK(groups["img1"] == "treated");
  CHECK(groups["img2"] == "control");

  write_text(dir.path / "noheader.csv", "a,g1\nb,g2\n");
  auto bare = load_group_map(dir.path / "noheader.csv");
  CHECK(bare.size() == 2);
  CHECK(bare["a"] == "g1");

  write_text(dir.path / "bad.csv", "just-a-stem\n");
  CHECK_THROWS_AS(load_group_map(dir.path / "bad.csv"), std::runtime_error);
}

TEST_CASE("sha256_file matches known vectors") {
  TempDir dir("phirm_batch_sha");
  write_text(dir.path / "abc.bin", "abc");
  CHECK(sha256_file(dir.path / "abc.bin") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  write_text(dir.path / "empty.bin", "");
  CHECK(sha256_file(dir.path / "empty.bin") ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK_THROWS_AS(sha256_file(dir.path / "missing.bin"), std::runtime_error);
}

TEST_CASE("aggregate_scores: mean, median, min") {
  Aggregate odd = aggregate_scores({0.9, 0.1, 0.5});
  CHECK(odd.count == 3);
  CHECK(odd.mean_score == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(odd.median_score == 0.5);
  CHECK(odd.min_score == 0.1);

  Aggregate even = aggregate_scores({1.0, 0.2, 0.6, 0.4});
  CHECK(even.count == 4);
  CHECK(even.mean_score == doctest::Approx(0.55).epsilon(1e-12));
  CHECK(even.median_score == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(even.min_score == 0.2);

  Aggregate none = aggregate_scores({});
  CHECK(none.count == 0);
  CHECK(none.mean_score == 0.0);
}

TEST_CASE("score_pairs: parallel run matches serial run exactly") {
  TempDir orig("phirm_batch_par_orig");
  TempDir recon("phirm_batch_par_recon");

  std::vector<PairEntry> pairs;
  for (int i = 0; i < 6; ++i) {
    SceneSpec spec;
    spec.seed = 100 + static_cast<std::uint64_t>(i);
    spec.nucleus_count = 3 + i % 2;
    spec.image_side = 96;
    spec.min_radius = 8.0;
    spec.max_radius = 12.0;
    spec.profile = NucleusProfile::FlatDisc;
    Scene scene = gen_scene(spec);
    GrayImage damaged = apply_manipulation(scene.image, scene.nuclei,
                                           scene.background, RemoveNucleus{0});
    const std::string stem = "pair" + std::to_string(i);
    write_png8(orig.path / (stem + ".png"), scene.image);
    write_png8(recon.path / (stem + ".png"), damaged);
    pairs.push_back(PairEntry{stem, orig.path / (stem + ".png"),
                              recon.path / (stem + ".png"),
                              i % 2 ? "odd" : "even"});
  }

  const RunManifest serial = score_pairs(pairs, PhirmConfig{}, 1);
  const RunManifest parallel = score_pairs(pairs, PhirmConfig{}, 4);

  REQUIRE(serial.results.size() == 6);
  REQUIRE(parallel.results.size() == 6);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(parallel.results[i].entry.stem == serial.results[i].entry.stem);
    CHECK(parallel.results[i].report.score == serial.results[i].report.score);
    CHECK(parallel.results[i].original_sha256 == serial.results[i].original_sha256);
    CHECK(parallel.results[i].baselines.ssim == serial.results[i].baselines.ssim);
  }
  CHECK(parallel.overall.mean_score == serial.overall.mean_score);
  CHECK(parallel.overall.median_score == serial.overall.median_score);

  // dropping one nucleus costs the count penalty, so nothing scores 1.0
  for (const PairResult& r : serial.results) CHECK(r.report.score < 1.0);

  REQUIRE(serial.groups.size() == 2);
  CHECK(serial.groups.at("even").count == 3);
  CHECK(serial.groups.at("odd").count == 3);
}

TEST_CASE("score_pairs: a broken pair becomes a warning, not an abort") {
  TempDir dir("phirm_batch_broken");
  const GrayImage img = scene_image(14);
  write_png8(dir.path / "good_o.png", img);
  write_png8(dir.path / "good_r.png", img);
  write_text(dir.path / "bad_o.png", "this is not a png");
  write_png8(dir.path / "bad_r.png", img);

  std::vector<PairEntry> pairs{
      {"bad", dir.path / "bad_o.png", dir.path / "bad_r.png", ""},
      {"good", dir.path / "good_o.png", dir.path / "good_r.png", ""},
  };
  RunManifest manifest = score_pairs(pairs, PhirmConfig{}, 2);
  REQUIRE(manifest.results.size() == 1);
  CHECK(manifest.results[0].entry.stem == "good");
  CHECK(manifest.results[0].report.score == 1.0);
  REQUIRE(manifest.warnings.size() == 1);
  CHECK(manifest.warnings[0].find("bad:") == 0);
  CHECK(manifest.overall.count == 1);
}

TEST_CASE("manifest json: structure, aggregates, config echo") {
  TempDir dir("phirm_batch_manifest");
  const GrayImage img = scene_image(15);
  write_png8(dir.path / "s1_o.png", img);
  write_png8(dir.path / "s1_r.png", img);

  std::vector<PairEntry> pairs{
      {"s1", dir.path / "s1_o.png", dir.path / "s1_r.png", "ctl"}};
  PhirmConfig cfg;
  RunManifest manifest = score_pairs(pairs, cfg, 1);
  nlohmann::ordered_json j = manifest_json(manifest, cfg);

  CHECK(j["tool"] == "phirm");
  CHECK(j["version"].is_string());
  // ISO-8601 UTC: 2026-01-02T03:04:05Z
  const std::string ts = j["created_at"].get<std::string>();
  REQUIRE(ts.size() == 20);
  CHECK(ts[4] == '-');
  CHECK(ts[10] == 'T');
  CHECK(ts.back() == 'Z');

  CHECK(j["config"]["ncd_base"] == 1.1);
  REQUIRE(j["pairs"].size() == 1);
  CHECK(j["pairs"][0]["stem"] == "s1");
  CHECK(j["pairs"][0]["group"] == "ctl");
  CHECK(j["pairs"][0]["original_sha256"] ==
        sha256_file(dir.path / "s1_o.png"));
  CHECK(j["pairs"][0]["phirm"]["score"] == 1.0);
  CHECK(j["pairs"][0]["baselines"]["psnr_db"] == "inf");

  CHECK(j["aggregates"]["overall"]["count"] == 1);
  CHECK(j["aggregates"]["overall"]["mean_score"] == 1.0);
  CHECK(j["aggregates"]["groups"]["ctl"]["min_score"] == 1.0);
  CHECK(j["warnings"].is_array());
}
