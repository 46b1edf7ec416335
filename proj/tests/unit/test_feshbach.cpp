#include <cmath>

#include "doctest.h"
#include "mottlab/feshbach.hpp"
#include "support.hpp"

using namespace mottlab;

namespace {

FeshbachConfig single(double a_bg, double B0, double Delta, double lo, double hi) {
  FeshbachConfig c;
  c.a_bg = a_bg;
  c.resonances = {{B0, Delta}};
  c.B_min = lo;
  c.B_max = hi;
  return c;
}

FeshbachConfig fixture() {
  return load_feshbach(std::string(MOTTLAB_SOURCE_DIR) + "/configs/feshbach_cs.json");
}

}  // namespace

TEST_SUITE("feshbach") {

TEST_CASE("flat background") {
  FeshbachConfig c;
  c.a_bg = 350;
  c.B_min = 0;
  c.B_max = 100;
  for (double B = 0; B <= 100; B += 7.5) CHECK(a_s_of_B(c, B).a_s == 350);
}

TEST_CASE("zero crossing one width above the pole") {
  const auto c = single(-1500, 40, 12, 0, 100);
  CHECK(a_s_of_B(c, 52).a_s == doctest::Approx(0.0));
}

TEST_CASE("cesium fixture spans the interaction window") {
  const auto c = fixture();
  CHECK(std::abs(a_s_of_B(c, 21).a_s - 200) / 200 < 0.15);
  CHECK(std::abs(a_s_of_B(c, 40).a_s - 900) / 900 < 0.15);
}

TEST_CASE("inverse lookup") {
  const auto c = fixture();
  for (double B = 18; B <= 48; B += 2.5) {
    const double a = a_s_of_B(c, B).a_s;
    const double back = B_of_a_s(c, a, {17.5, 49.0});
    CHECK(std::abs(back - B) < 1e-3);
    CHECK(std::abs(a_s_of_B(c, back).a_s - a) < 0.5);
  }
}

TEST_CASE("inverse matches the closed form for one resonance") {
  // a = a_bg (1 - D/(B - B0))  =>  B = B0 + D / (1 - a/a_bg)
  const double a_bg = 1000, B0 = 10, D = 5;
  const auto c = single(a_bg, B0, D, 12, 200);
  for (double target : {250.0, 500.0, 800.0}) {
    const double exact = B0 + D / (1 - target / a_bg);
    CHECK(B_of_a_s(c, target, {12, 200}) == doctest::Approx(exact).epsilon(1e-9));
  }
}

TEST_CASE("error paths") {
  const auto c = single(1000, 30, 5, 0, 60);
  CHECK_ERROR_KIND(B_of_a_s(c, 500, {20, 40}), ErrorKind::InvalidBracket);
  CHECK_ERROR_KIND(a_s_of_B(c, 30.01), ErrorKind::PoleProximity);
  CHECK_ERROR_KIND(a_s_of_B(c, 61), ErrorKind::Range);
  CHECK_ERROR_KIND(a_s_of_B(c, -1), ErrorKind::Range);
  CHECK_ERROR_KIND(B_of_a_s(c, 1e6, {35, 60}), ErrorKind::InvalidBracket);
  // (B - 1)(B - 5)/B has a minimum inside [1, 10]
  FeshbachConfig bowl = single(0, 0, 5, 1, 10);
  bowl.slope = 1;
  CHECK_ERROR_KIND(B_of_a_s(bowl, 0, {1, 10}), ErrorKind::InvalidBracket);
  CHECK_ERROR_KIND(feshbach_from_json(nlohmann::json{{"a_bg", 1}}), ErrorKind::InvalidParameter);
  CHECK_ERROR_KIND(feshbach_from_json(nlohmann::json::parse(
                       R"({"a_bg":1,"valid_range":[5,1]})")),
                   ErrorKind::InvalidParameter);
  CHECK_ERROR_KIND(feshbach_from_json(nlohmann::json::parse(
                       R"({"a_bg":1,"valid_range":[0,9],"resonances":[{"B0":3,"Delta":1},{"B0":3,"Delta":2}]})")),
                   ErrorKind::InvalidParameter);
}

TEST_CASE("monotonic segments match sampled differences") {
  FeshbachConfig c = single(800, 20, 6, 0, 60);
  c.resonances.push_back({45, -3});
  c.slope = 2;
  const auto segs = monotonic_segments(c);
  REQUIRE(segs.size() >= 3);
  for (const auto& s : segs) {
    CHECK(s.B_hi > s.B_lo);
    const int n = 200;
    for (int i = 0; i < n; ++i) {
      const double b0 = s.B_lo + (s.B_hi - s.B_lo) * i / n;
      const double b1 = s.B_lo + (s.B_hi - s.B_lo) * (i + 1) / n;
      const double d = a_s_of_B(c, b1).a_s - a_s_of_B(c, b0).a_s;
      // sample-resolution slack next to a turning point
      if (std::abs(d) > 1e-6 && i > 2 && i < n - 3) CHECK((d > 0) == s.increasing);
    }
  }
  for (std::size_t i = 0; i + 1 < segs.size(); ++i) CHECK(segs[i].B_hi <= segs[i + 1].B_lo);
}

TEST_CASE("continuity away from poles") {
  const auto c = fixture();
  for (double B : {5.0, 17.1, 33.3}) {
    const double a = a_s_of_B(c, B).a_s;
    double prev = 1e300;
    for (double h : {1e-2, 1e-4, 1e-6, 1e-8}) {
      const double d = std::abs(a_s_of_B(c, B + h).a_s - a);
      CHECK(d < prev);
      prev = d;
    }
    CHECK(prev < 1e-4);
  }
}

TEST_CASE("json round trip") {
  const auto c = fixture();
  const auto d = feshbach_from_json(feshbach_to_json(c));
  CHECK(d.a_bg == c.a_bg);
  CHECK(d.slope == c.slope);
  CHECK(d.resonances.size() == 1);
  CHECK(d.B_max == c.B_max);
  CHECK(d.pole_exclusion == c.pole_exclusion);
}

}
