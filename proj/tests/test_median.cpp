#include "doctest.h"

#include "medimax/verify.hpp"

#include <algorithm>

using namespace medimax;

namespace {

Universe uni1d(long cells) {
  Universe u;
  u.dim = 1;
  u.origin = {Rational(0)};
  u.cell = Rational(1, cells);
  u.extent = {cells};
  u.validate();
  return u;
}

StepFunction fn_of(const std::vector<Rational>& values) {
  StepFunction f = StepFunction::zero(uni1d(static_cast<long>(values.size())));
  f.values = values;
  return f;
}

GridCube whole(const StepFunction& f) { return GridCube{{0}, f.universe.extent[0]}; }

// |Q ∩ {f < a}| <= |Q|/2 and |Q ∩ {f > a}| <= |Q|/2, from first principles.
bool is_median(const StepFunction& f, const GridCube& q, const Rational& alpha) {
  const Universe& u = f.universe;
  Rational below = 0, above = 0, total = 0;
  for (long c = q.corner[0]; c < q.corner[0] + q.side; ++c) {
    const Rational& v = f.values[static_cast<std::size_t>(c)];
    if (v < alpha) below += u.cell;
    if (v > alpha) above += u.cell;
    total += u.cell;
  }
  return below <= total / 2 && above <= total / 2;
}

}  // namespace

TEST_CASE("median interval examples") {
  // chi_E with |E| = |Q|/2.
  StepFunction f = fn_of({1, 1, 0, 0});
  MedianInterval mi = median_interval(f, whole(f));
  CHECK(mi.lo == 0);
  CHECK(mi.hi == 1);

  StepFunction c = fn_of({Rational(-5, 3), Rational(-5, 3)});
  mi = median_interval(c, whole(c));
  CHECK(mi.lo == Rational(-5, 3));
  CHECK(mi.hi == Rational(-5, 3));

  StepFunction g = fn_of({1, 2, 3, 4});
  mi = median_interval(g, whole(g));
  CHECK(mi.lo == 2);
  CHECK(mi.hi == 3);
}

TEST_CASE("median interval defining inequalities, randomized") {
  Universe u = uni1d(12);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    StepFunction f = random_stepfn(u, rng);
    for (long corner = 0; corner < 12; corner += 3) {
      for (long side : {1L, 4L, 12L - corner}) {
        if (corner + side > 12) continue;
        GridCube q{{corner}, side};
        MedianInterval mi = median_interval(f, q);
        CHECK(mi.lo <= mi.hi);
        Rational eps(1, 1000);
        CHECK(is_median(f, q, mi.lo));
        CHECK(is_median(f, q, mi.hi));
        CHECK(is_median(f, q, (mi.lo + mi.hi) / 2));
        CHECK_FALSE(is_median(f, q, mi.lo - eps));
        CHECK_FALSE(is_median(f, q, mi.hi + eps));
      }
    }
  }
}

TEST_CASE("median_max_abs examples and tie rule") {
  StepFunction f = fn_of({1, 1, 0, 0});
  CHECK(median_max_abs(f, whole(f)) == 1);

  f = fn_of({-3, -3, 1, 1});
  CHECK(median_max_abs(f, whole(f)) == -3);

  // Interval [-2, 2]: tie goes to the upper endpoint.
  f = fn_of({-2, -2, 2, 2});
  CHECK(median_max_abs(f, whole(f)) == 2);

  // |m_f| is insensitive to the sign convention.
  StepFunction neg = f;
  for (auto& v : neg.values) v = -v;
  CHECK(abs(median_max_abs(neg, whole(neg))) == abs(median_max_abs(f, whole(f))));
}

TEST_CASE("tau_median examples") {
  StepFunction c = fn_of({Rational(-3, 4), Rational(-3, 4), Rational(-3, 4)});
  for (const Rational& tau : {Rational(1, 4), Rational(1, 2), Rational(9, 10)}) {
    CHECK(tau_median(c, whole(c), tau) == Rational(3, 4));
  }

  // Indicator at tau = 1/2: 1 iff |E| >= |Q|/2.
  StepFunction big = fn_of({1, 1, 0, 0});
  StepFunction small = fn_of({1, 0, 0, 0});
  CHECK(tau_median(big, whole(big), Rational(1, 2)) == 1);
  CHECK(tau_median(small, whole(small), Rational(1, 2)) == 0);

  StepFunction g = fn_of({1, 2, 3, 4});
  CHECK(tau_median(g, whole(g), Rational(3, 4)) == 2);
}

TEST_CASE("tau_median parameter domain") {
  StepFunction f = fn_of({1, 2});
  CHECK_THROWS_AS(tau_median(f, whole(f), Rational(0)), std::domain_error);
  CHECK_THROWS_AS(tau_median(f, whole(f), Rational(1)), std::domain_error);
  CHECK_THROWS_AS(tau_median(f, whole(f), Rational(3, 2)), std::domain_error);
}

TEST_CASE("empty summary has no median") {
  ValueSummary empty;
  empty.total = 0;
  CHECK_THROWS_AS(median_interval(empty), std::domain_error);
}

TEST_CASE("tau monotonicity, homogeneity, attainment, permutation invariance") {
  Universe u = uni1d(10);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    StepFunction f = random_stepfn(u, rng);
    GridCube q = whole(f);
    Rational m14 = tau_median(f, q, Rational(1, 4));
    Rational m12 = tau_median(f, q, Rational(1, 2));
    Rational m34 = tau_median(f, q, Rational(3, 4));
    CHECK(m14 >= m12);
    CHECK(m12 >= m34);

    Rational c(-5, 2);
    StepFunction cf = f;
    for (auto& v : cf.values) v *= c;
    CHECK(tau_median(cf, q, Rational(1, 2)) == abs(c) * m12);

    // Attainment: |Q ∩ {|f| >= m^tau}| >= tau |Q|.
    CHECK(measure_above(f, q, m12, false, true) >= Rational(1, 2) * cube_measure(u, q));

    StepFunction shuffled = f;
    std::shuffle(shuffled.values.begin(), shuffled.values.end(), rng);
    CHECK(tau_median(shuffled, q, Rational(1, 2)) == m12);
    MedianInterval a = median_interval(f, q);
    MedianInterval b = median_interval(shuffled, q);
    CHECK(a.lo == b.lo);
    CHECK(a.hi == b.hi);
  }
}

TEST_CASE("summary merge and zero padding") {
  Universe u = uni1d(8);
  Rng rng(2);
  StepFunction f = random_stepfn(u, rng);
  ValueSummary left = summarize(f, view_of(u, GridCube{{0}, 4}));
  ValueSummary right = summarize(f, view_of(u, GridCube{{4}, 4}));
  ValueSummary both = merge_summaries(left, right);
  ValueSummary direct = summarize(f, view_of(u, GridCube{{0}, 8}));
  CHECK(both.items == direct.items);
  CHECK(both.total == direct.total);

  ValueSummary padded = left;
  pad_with_zero(padded, left.total + Rational(3, 7));
  CHECK(padded.total == left.total + Rational(3, 7));
  Rational zero_mass = 0;
  for (const auto& [v, m] : padded.items) {
    if (v == 0) zero_mass += m;
  }
  Rational zero_before = 0;
  for (const auto& [v, m] : left.items) {
    if (v == 0) zero_before += m;
  }
  CHECK(zero_mass == zero_before + Rational(3, 7));
}

TEST_CASE("abs_average") {
  StepFunction f = fn_of({-1, 2, -3, 4});
  ValueSummary s = summarize(f, view_of(f.universe, whole(f)));
  CHECK(abs_average(s) == Rational(10, 4));
}
