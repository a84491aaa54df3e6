#include "doctest.h"

#include "medimax/verify.hpp"

#include <cstdio>

using namespace medimax;

namespace {

Universe uni(int dim, const Rational& origin, const Rational& cell, long side) {
  Universe u;
  u.dim = dim;
  u.origin.assign(static_cast<std::size_t>(dim), origin);
  u.cell = cell;
  u.extent.assign(static_cast<std::size_t>(dim), side);
  u.validate();
  return u;
}

}  // namespace

TEST_CASE("rational parsing and formatting") {
  CHECK(parse_rational("3/4") == Rational(3, 4));
  CHECK(parse_rational("-3/4") == Rational(-3, 4));
  CHECK(parse_rational("5") == Rational(5));
  CHECK(parse_rational("6/4") == Rational(3, 2));
  CHECK(format_rational(Rational(3, 2)) == "3/2");
  CHECK(format_rational(Rational(-10)) == "-10/1");
  CHECK(format_rational(parse_rational("0")) == "0/1");
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
}

TEST_CASE("rational helpers") {
  CHECK(rational_pow(Rational(2, 3), 3) == Rational(8, 27));
  CHECK(rational_pow(Rational(2), -2) == Rational(1, 4));
  CHECK(rational_from_double(0.25) == Rational(1, 4));
  CHECK(to_double(Rational(1, 2)) == 0.5);
  CHECK(floor_rational(Rational(-7, 2)) == -4);
  CHECK(ceil_rational(Rational(-7, 2)) == -3);
  CHECK(floor_div(Int(-7), Int(2)) == -4);
}

TEST_CASE("universe JSON round trip is byte-identical") {
  Universe u = uni(2, Rational(-5, 3), Rational(1, 10), 6);
  Json j = universe_to_json(u);
  CHECK(j["dims"] == 2);
  CHECK(j["cell"] == "1/10");
  CHECK(j["origin"][0] == "-5/3");
  Universe back = universe_from_json(j);
  CHECK(back.same_as(u));
  CHECK(universe_to_json(back).dump() == j.dump());
}

TEST_CASE("step function JSON round trip") {
  Universe u = uni(1, 0, Rational(1, 8), 8);
  Rng rng(24);
  StepFunction f = random_stepfn(u, rng);
  Json j = stepfn_to_json(f);
  CHECK(j["values"].size() == 8);
  StepFunction back = stepfn_from_json(j);
  CHECK(back.universe.same_as(u));
  CHECK(back.values == f.values);
  CHECK(stepfn_to_json(back).dump() == j.dump());
}

TEST_CASE("weight JSON round trip preserves non-negativity check") {
  Universe u = uni(1, 0, Rational(1, 4), 4);
  Rng rng(25);
  Weight w = random_weight(u, rng);
  Weight back = weight_from_json(weight_to_json(w));
  CHECK(back.base.values == w.base.values);

  Json bad = weight_to_json(w);
  bad["values"][0] = "-1/2";
  CHECK_THROWS_AS(weight_from_json(bad), std::invalid_argument);
}

TEST_CASE("family JSON round trip") {
  Universe u = uni(1, 0, Rational(1, 12), 12);
  CubeFamily all = CubeFamily::all_grid_aligned(u, 5);
  Json j = family_to_json(all);
  CubeFamily back = family_from_json(j);
  CHECK(back.kind == CubeFamily::Kind::all_grid_aligned);
  CHECK(back.max_side == 5);
  CHECK(family_to_json(back).dump() == j.dump());

  DyadicGridSpec spec{{Rational(1, 3)}, -1, 2};
  CubeFamily dy = CubeFamily::dyadic(u, spec);
  CubeFamily dback = family_from_json(family_to_json(dy));
  CHECK(dback.kind == CubeFamily::Kind::dyadic);
  CHECK(dback.spec.shift == spec.shift);
  CHECK(dback.spec.k_min == -1);
  CHECK(dback.spec.k_max == 2);
}

TEST_CASE("grid cube JSON round trip") {
  GridCube q{{3, 4}, 2};
  GridCube back = grid_cube_from_json(grid_cube_to_json(q));
  CHECK(back.corner == q.corner);
  CHECK(back.side == 2);
}

TEST_CASE("characteristic JSON") {
  Universe u = uni(1, 0, 1, 4);
  CubeFamily family = CubeFamily::all_grid_aligned(u);

  Characteristic finite;
  finite.exact = true;
  finite.value = Rational(7, 2);
  finite.approx = 3.5;
  finite.witness = GridCube{{1}, 2};
  Json j = characteristic_to_json(finite, "A1", family);
  CHECK(j["value"] == "7/2");
  CHECK(j["characteristic"] == "A1");
  CHECK(j["witness"]["side"] == 2);

  Characteristic inf;
  inf.infinite = true;
  CHECK(characteristic_to_json(inf, "A1", family)["value"] == "inf");

  Characteristic approx;
  approx.exact = false;
  approx.approx = 1.25;
  CHECK(characteristic_to_json(approx, "Ainf_exp", family)["value"] == Json(1.25));
}

TEST_CASE("CSV export") {
  Universe u = uni(1, 0, Rational(1, 2), 2);
  StepFunction f = StepFunction::zero(u);
  f.values = {Rational(1, 3), Rational(-2)};
  std::string csv = stepfn_to_csv(f);
  CHECK(csv.find("index,coord0,value") == 0);
  CHECK(csv.find("0,0/1,1/3") != std::string::npos);
  CHECK(csv.find("1,1/2,-2/1") != std::string::npos);
}

TEST_CASE("text file round trip") {
  std::string path = "io_test_tmp.json";
  write_text_file(path, "{\"x\": 1}\n");
  CHECK(read_text_file(path) == "{\"x\": 1}\n");
  std::remove(path.c_str());
  CHECK_THROWS(read_text_file("does_not_exist_anywhere.json"));
}
