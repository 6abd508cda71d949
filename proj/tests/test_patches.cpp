#include <doctest.h>

#include "phirm/patches.hpp"
#include "phirm/rng.hpp"

using namespace phirm;

TEST_CASE("anchor-to-edge offsets cover a 2160 axis with 9 windows") {
  const std::vector<int> offsets =
      patch_offsets(2160, 256, 256, EdgePolicy::AnchorToEdge);
  REQUIRE(offsets.size() == 9);
  for (int i = 0; i < 8; ++i) CHECK(offsets[i] == i * 256);
  CHECK(offsets.back() == 2160 - 256);  // 1904, overlapping the previous window
}

TEST_CASE("drop-partial offsets keep only full windows") {
  const std::vector<int> offsets =
      patch_offsets(2160, 256, 256, EdgePolicy::DropPartial);
  REQUIRE(offsets.size() == 8);
  CHECK(offsets.back() == 7 * 256);
}

TEST_CASE("an exact multiple needs no anchor duplicate") {
  const std::vector<int> offsets =
      patch_offsets(1024, 256, 256, EdgePolicy::AnchorToEdge);
  CHECK(offsets == std::vector<int>{0, 256, 512, 768});
}

TEST_CASE("full-frame grid yields 81 anchored or 64 dropped patches") {
  Rng rng(1);
  RawImage raw(2160, 2160);
  for (Eigen::Index i = 0; i < raw.size(); ++i) {
    raw.data()[i] = static_cast<std::uint32_t>(rng.uniform_int(0, 4095));
  }

  PatchGrid grid;
  const auto anchored = gen_patches(raw, grid);
  CHECK(anchored.size() == 81);

  grid.edge_policy = EdgePolicy::DropPartial;
  CHECK(gen_patches(raw, grid).size() == 64);

  // row-major ordering and source offsets
  CHECK(anchored[0].row == 0);
  CHECK(anchored[0].col == 0);
  CHECK(anchored[8].col == 8);
  CHECK(anchored[8].x_offset == 1904);
  CHECK(anchored[9].row == 1);
  CHECK(anchored[9].col == 0);
}

TEST_CASE("anchored windows cover every source pixel") {
  Rng rng(2);
  RawImage raw(500, 700);
  for (Eigen::Index i = 0; i < raw.size(); ++i) {
    raw.data()[i] = static_cast<std::uint32_t>(rng.uniform_int(0, 65535));
  }
  PatchGrid grid;
  grid.patch_side = 256;
  grid.stride = 256;

  Plane<bool> covered = Plane<bool>::Constant(raw.rows(), raw.cols(), false);
  for (const Patch& p : gen_patches(raw, grid)) {
    CHECK(p.image.rows() == 256);
    CHECK(p.image.cols() == 256);
    covered.block(p.y_offset, p.x_offset, 256, 256).setConstant(true);
  }
  CHECK(covered.all());
}

TEST_CASE("a patch-sized input yields exactly its normalized self") {
  Rng rng(3);
  RawImage raw(256, 256);
  for (Eigen::Index i = 0; i < raw.size(); ++i) {
    raw.data()[i] = static_cast<std::uint32_t>(rng.uniform_int(100, 900));
  }
  const auto patches = gen_patches(raw, PatchGrid{});
  REQUIRE(patches.size() == 1);
  CHECK((patches[0].image == normalize_minmax(raw)).all());
}

TEST_CASE("every emitted patch is stretched to the full 8-bit range") {
  Rng rng(4);
  RawImage raw(600, 600);
  for (Eigen::Index i = 0; i < raw.size(); ++i) {
    raw.data()[i] = static_cast<std::uint32_t>(rng.uniform_int(2000, 3000));
  }
  for (const Patch& p : gen_patches(raw, PatchGrid{})) {
    CHECK(p.image.minCoeff() == 0);
    CHECK(p.image.maxCoeff() == 255);
  }
}

TEST_CASE("zoom crops a larger window and resamples it down") {
  Rng rng(5);
  RawImage raw(1024, 1024);
  for (Eigen::Index i = 0; i < raw.size(); ++i) {
    raw.data()[i] = static_cast<std::uint32_t>(rng.uniform_int(0, 255));
  }
  PatchGrid grid;
  grid.zoom = 2.0;
  grid.stride = 512;  // step by the source window, not the emitted side
  CHECK(grid.crop_side() == 512);
  const auto patches = gen_patches(raw, grid);
  CHECK(patches.size() == 4);  // 1024 / 512 per axis
  for (const Patch& p : patches) {
    CHECK(p.image.rows() == 256);
    CHECK(p.image.cols() == 256);
  }
}

TEST_CASE("an input smaller than the crop is rejected") {
  const RawImage raw = RawImage::Constant(200, 300, 1);
  CHECK_THROWS_AS(gen_patches(raw, PatchGrid{}), std::invalid_argument);
}

TEST_CASE("grid validation") {
  PatchGrid grid;
  grid.patch_side = 0;
  CHECK_THROWS_AS(grid.validate(), std::invalid_argument);
  grid = {};
  grid.stride = 0;
  CHECK_THROWS_AS(grid.validate(), std::invalid_argument);
  grid = {};
  grid.zoom = 0.5;  // crops below the emitted size would upsample
  CHECK_THROWS_AS(grid.validate(), std::invalid_argument);
}
