#include "doctest.h"

#include "orchid/features.hpp"
#include "shapes.hpp"

#include <cmath>

using namespace orchid;
using namespace orchid::testing;

namespace {

constexpr Rgb kPetal{210, 60, 150};

RegionFeatures features_of(const BinaryMask& m) {
  return extract_region_features(paint(m, kPetal), m);
}

double rel(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

void check_same(const RegionFeatures& a, const RegionFeatures& b) {
  CHECK(a.sf1 == b.sf1);
  CHECK(a.sf2 == b.sf2);
  CHECK(a.roundness == b.roundness);
  CHECK(a.aspect_ratio == b.aspect_ratio);
  CHECK(a.hu.raw == b.hu.raw);
  CHECK(a.hu.log_scaled == b.hu.log_scaled);
  CHECK(a.ccd.values == b.ccd.values);
  CHECK(a.color.dx2 == b.color.dx2);
  CHECK(a.color.dy2 == b.color.dy2);
  CHECK(a.color.p2 == b.color.p2);
  CHECK(a.color.dx3 == b.color.dx3);
  CHECK(a.color.p3 == b.color.p3);
  for (int i = 0; i < 4; ++i) CHECK(a.fractal.levels[i].boxes == b.fractal.levels[i].boxes);
  CHECK(a.fractal.mean_dimension == b.fractal.mean_dimension);
}

}  // namespace

TEST_CASE("translation leaves every descriptor bit-identical") {
  const BinaryMask base = irregular_star(420, 200, 0);
  const RegionFeatures a = features_of(base);
  for (auto [dx, dy] : {std::pair{1, 0}, std::pair{0, 1}, std::pair{17, 5}, std::pair{63, 91}}) {
    INFO("shift " << dx << "," << dy);
    check_same(a, features_of(translate(base, dx, dy, 520, 520)));
  }
}

TEST_CASE("rotation keeps ccd within 0.05 and log-Hu within 0.1") {
  const RegionFeatures a = features_of(irregular_star(420, 200, 0));
  for (double deg : {10.0, 37.0, 90.0}) {
    const RegionFeatures b = features_of(irregular_star(420, 200, deg));
    for (int k = 0; k < 36; ++k) {
      INFO(deg << " deg, ccd " << k << ": " << a.ccd.values[k] << " vs " << b.ccd.values[k]);
      CHECK(std::abs(a.ccd.values[k] - b.ccd.values[k]) <= 0.05);
    }
    for (int i = 0; i < 7; ++i) {
      INFO(deg << " deg, hu " << i << ": " << a.hu.log_scaled[i] << " vs " << b.hu.log_scaled[i]);
      CHECK(std::abs(a.hu.log_scaled[i] - b.hu.log_scaled[i]) <= 0.1);
    }
  }
}

TEST_CASE("raster rotation by 90 degrees is exact for Hu up to the reflection sign of phi7") {
  const BinaryMask m = irregular_star(420, 200, 0);
  const HuMoments a = hu_moments(m);
  const HuMoments b = hu_moments(rotate90(m));
  for (int i = 0; i < 6; ++i) CHECK(b.raw[i] == doctest::Approx(a.raw[i]).epsilon(1e-9));
  CHECK(std::abs(b.raw[6]) == doctest::Approx(std::abs(a.raw[6])).epsilon(1e-9));
}

TEST_CASE("scale by 0.5 and 2 keeps shape descriptors within 5 percent") {
  const RegionFeatures a = features_of(irregular_star(420, 200, 0));
  for (double s : {0.5, 2.0}) {
    const int size = static_cast<int>(420 * s);
    const RegionFeatures b = features_of(irregular_star(size, 200 * s, 0));
    INFO("scale " << s);
    CHECK(rel(a.sf1, b.sf1) < 0.05);
    CHECK(rel(a.sf2, b.sf2) < 0.05);
    CHECK(rel(a.roundness, b.roundness) < 0.05);
    CHECK(rel(a.aspect_ratio, b.aspect_ratio) < 0.05);
    for (int k = 0; k < 36; ++k) {
      INFO("ccd " << k << ": " << a.ccd.values[k] << " vs " << b.ccd.values[k]);
      CHECK(std::abs(a.ccd.values[k] - b.ccd.values[k]) < 0.05);
    }
    for (int i = 0; i < 7; ++i) {
      INFO("hu " << i << ": " << a.hu.log_scaled[i] << " vs " << b.hu.log_scaled[i]);
      CHECK(rel(a.hu.log_scaled[i], b.hu.log_scaled[i]) < 0.05);
    }
  }
}

TEST_CASE("analytic shapes at radii 50, 100, 200 agree within 5 percent") {
  for (double r : {50.0, 100.0}) {
    const RegionFeatures small = features_of(ellipse(static_cast<int>(2.4 * r), static_cast<int>(2.4 * r), 1.2 * r, 1.2 * r, r, 0.6 * r, 25));
    const RegionFeatures big = features_of(ellipse(480, 480, 240, 240, 200, 120, 25));
    INFO("radius " << r);
    CHECK(rel(small.sf1, big.sf1) < 0.05);
    CHECK(rel(small.roundness, big.roundness) < 0.05);
    CHECK(rel(small.aspect_ratio, big.aspect_ratio) < 0.05);
    CHECK(rel(small.hu.raw[0], big.hu.raw[0]) < 0.05);
    CHECK(rel(small.hu.raw[1], big.hu.raw[1]) < 0.05);
  }
}
