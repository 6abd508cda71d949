#include <doctest.h>

#include "phirm/plane.hpp"

using namespace phirm;

TEST_CASE("normalize_minmax stretches the full range") {
  RawImage raw(1, 3);
  raw << 0, 32767, 65535;
  const GrayImage out = normalize_minmax(raw);
  CHECK(out(0, 0) == 0);
  CHECK(out(0, 1) == 127);  // 255 * 32767 / 65535 = 127.498 rounds down
  CHECK(out(0, 2) == 255);
}

TEST_CASE("normalize_minmax attains both endpoints on non-constant input") {
  RawImage raw(2, 2);
  raw << 900, 1000, 950, 980;
  const GrayImage out = normalize_minmax(raw);
  CHECK(out.minCoeff() == 0);
  CHECK(out.maxCoeff() == 255);
}

TEST_CASE("normalize_minmax maps a constant image to zeros") {
  const RawImage raw = RawImage::Constant(4, 4, 7);
  const GrayImage out = normalize_minmax(raw);
  CHECK((out == 0).all());
}

TEST_CASE("normalize_minmax rejects empty input") {
  RawImage raw(0, 0);
  CHECK_THROWS_AS(normalize_minmax(raw), std::invalid_argument);
}

TEST_CASE("binarize is strict: the threshold pixel is background") {
  GrayImage img(1, 3);
  img << 49, 50, 51;
  const BinaryMask mask = binarize(img, std::uint8_t{50});
  CHECK_FALSE(mask(0, 0));
  CHECK_FALSE(mask(0, 1));
  CHECK(mask(0, 2));
}

TEST_CASE("require_same_dims names both shapes") {
  const GrayImage a = GrayImage::Zero(4, 6);
  const GrayImage b = GrayImage::Zero(5, 6);
  try {
    require_same_dims(a, b, "test");
    FAIL("expected a throw");
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    CHECK(msg.find("6x4") != std::string::npos);
    CHECK(msg.find("6x5") != std::string::npos);
  }
}

TEST_CASE("mask round-trips through its 8-bit serialization form") {
  BinaryMask mask(2, 2);
  mask << true, false, false, true;
  const GrayImage gray = mask_to_gray(mask);
  CHECK(gray(0, 0) == 255);
  CHECK(gray(0, 1) == 0);
  CHECK((gray_to_mask(gray) == mask).all());
}
