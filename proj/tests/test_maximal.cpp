#include "doctest.h"

#include "medimax/verify.hpp"

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

// Independent oracle for the 1D median maximal function: for each cell, take
// the max over all intervals of a from-scratch median computation.
Rational oracle_median_max(const StepFunction& f, long cell) {
  const Universe& u = f.universe;
  Rational best = 0;
  bool any = false;
  for (long corner = 0; corner <= cell; ++corner) {
    for (long side = cell - corner + 1; corner + side <= u.extent[0]; ++side) {
      std::vector<Rational> vals(f.values.begin() + corner, f.values.begin() + corner + side);
      std::sort(vals.begin(), vals.end());
      // With `side` equal cells, medians run from vals[ceil(s/2)-1] to
      // vals[floor(s/2)] (0-based).
      Rational lo = vals[static_cast<std::size_t>((side + 1) / 2 - 1)];
      Rational hi = vals[static_cast<std::size_t>(side / 2)];
      Rational m = abs(hi) >= abs(lo) ? abs(hi) : abs(lo);
      if (!any || m > best) best = m;
      any = true;
    }
  }
  return best;
}

}  // namespace

TEST_CASE("brute_maximal on constants") {
  Universe u = uni(1, 0, Rational(1, 6), 6);
  StepFunction f = StepFunction::constant(u, Rational(-5, 4));
  for (auto kind : {MaximalKind::median(), MaximalKind::tau(Rational(1, 3))}) {
    StepFunction mf = brute_maximal(f, CubeFamily::all_grid_aligned(u), kind).fn;
    for (const auto& v : mf.values) CHECK(v == Rational(5, 4));
  }
}

TEST_CASE("brute_maximal median kind matches an independent oracle") {
  Universe u = uni(1, 0, Rational(1, 8), 8);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    StepFunction f = random_stepfn(u, rng);
    StepFunction mf = brute_maximal(f, CubeFamily::all_grid_aligned(u), MaximalKind::median()).fn;
    for (long c = 0; c < 8; ++c) {
      CHECK(mf.values[static_cast<std::size_t>(c)] == oracle_median_max(f, c));
    }
  }
}

TEST_CASE("tau-maximal of the indicator is the tripled indicator") {
  Universe u = uni(1, -10, Rational(1, 10), 200);
  StepFunction f = indicator_interval(u, {-1}, {1});
  MaximalKind kind = MaximalKind::tau(Rational(1, 2));
  long cap = truncation_side_cells(f, kind);
  CHECK(cap == 40);
  StepFunction mf = brute_maximal(f, CubeFamily::all_grid_aligned(u, cap), kind).fn;
  CHECK(mf.values == indicator_interval(u, {-3}, {3}).values);
}

TEST_CASE("empty family flags and zero output") {
  Universe u = uni(1, 0, 1, 3);
  StepFunction f = StepFunction::constant(u, 2);
  MaximalResult res = brute_maximal(f, CubeFamily::explicit_list(u, {}), MaximalKind::median());
  CHECK(res.empty_family);
  for (const auto& v : res.fn.values) CHECK(v == 0);
}

TEST_CASE("dyadic_maximal equals brute on the dyadic family") {
  struct Config {
    Universe u;
    DyadicGridSpec spec;
  };
  std::vector<Config> configs{
      {uni(1, 0, Rational(1, 16), 24), DyadicGridSpec{{Rational(0)}, 0, 4}},
      {uni(1, 0, Rational(1, 24), 24), DyadicGridSpec{{Rational(1, 3)}, 0, 3}},
      {uni(2, 0, Rational(1, 8), 8), DyadicGridSpec{{Rational(0), Rational(0)}, 0, 3}},
  };
  for (const auto& [u, spec] : configs) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      Rng rng(seed);
      StepFunction f = random_stepfn(u, rng);
      for (auto kind :
           {MaximalKind::median(), MaximalKind::tau(Rational(1, 2)), MaximalKind::hl_average()}) {
        StepFunction fast = dyadic_maximal(f, spec, kind);
        StepFunction slow = brute_maximal(f, CubeFamily::dyadic(u, spec), kind).fn;
        CHECK(fast.values == slow.values);
      }
    }
  }
}

TEST_CASE("dyadic_maximal rejects a misaligned grid") {
  Universe u = uni(1, 0, Rational(1, 10), 10);
  DyadicGridSpec spec{{Rational(1, 3)}, 0, 2};
  StepFunction f = StepFunction::constant(u, 1);
  CHECK_THROWS_AS(dyadic_maximal(f, spec, MaximalKind::median()), std::domain_error);
}

TEST_CASE("dyadic tau-maximal of a single-cell indicator follows ancestor densities") {
  Universe u = uni(1, 0, Rational(1, 16), 16);
  DyadicGridSpec spec{{Rational(0)}, 0, 4};
  StepFunction f = StepFunction::zero(u);
  f.values[0] = 1;
  // Ancestors of cell 0 have densities 1, 1/2, 1/4, ...; tau = 1/2 keeps
  // the two finest, so the output is the indicator of [0, 1/8).
  StepFunction mf = dyadic_maximal(f, spec, MaximalKind::tau(Rational(1, 2)));
  CHECK(mf.values == indicator_interval(u, {0}, {Rational(1, 8)}).values);
}

TEST_CASE("domination bound") {
  // Constant input: equality.
  Universe uc = uni(1, 0, Rational(1, 12), 12);
  StepFunction c = StepFunction::constant(uc, Rational(2, 3));
  StepFunction dom = domination_bound(c, Rational(1, 2));
  for (const auto& v : dom.values) CHECK(v == Rational(2, 3));

  // chi_{[-1,1]}: the bound is at least the tripled indicator.
  Universe u = uni(1, -4, Rational(1, 12), 96);
  StepFunction f = indicator_interval(u, {-1}, {1});
  StepFunction d = domination_bound(f, Rational(1, 2));
  StepFunction tripled = indicator_interval(u, {-3}, {3});
  for (std::size_t i = 0; i < d.values.size(); ++i) CHECK(d.values[i] >= tripled.values[i]);

  // Cell size incompatible with the 1/3-shifted grids is a domain error.
  Universe bad = uni(1, 0, Rational(1, 10), 10);
  CHECK_THROWS_AS(domination_bound(StepFunction::constant(bad, 1), Rational(1, 2)),
                  std::domain_error);
}

TEST_CASE("set_maximal basics") {
  Universe u = uni(1, -4, Rational(1, 4), 32);
  CubeFamily family = CubeFamily::all_grid_aligned(u);

  IndicatorSet empty = IndicatorSet::empty(u);
  CHECK(set_maximal(empty, Rational(1, 2), family).count_cells() == 0);

  IndicatorSet full = IndicatorSet::empty(u);
  for (auto& m : full.mask) m = 1;
  CHECK(set_maximal(full, Rational(1, 2), family).count_cells() == u.total_cells());

  IndicatorSet e = indicator_set_interval(u, {-1}, {1});
  IndicatorSet tripled = indicator_set_interval(u, {-3}, {3});
  CHECK(set_maximal(e, Rational(1, 2), family).mask == tripled.mask);
}

TEST_CASE("set_maximal agrees with the thresholded tau-maximal") {
  Universe u = uni(1, 0, Rational(1, 10), 10);
  CubeFamily family = CubeFamily::all_grid_aligned(u);
  Rational eta(1, 3);
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    Rng rng(seed);
    IndicatorSet e = IndicatorSet::empty(u);
    StepFunction chi = StepFunction::zero(u);
    std::uniform_int_distribution<int> coin(0, 1);
    for (std::size_t i = 0; i < e.mask.size(); ++i) {
      e.mask[i] = static_cast<char>(coin(rng));
      chi.values[i] = e.mask[i];
    }
    IndicatorSet m = set_maximal(e, eta, family);
    StepFunction mt = brute_maximal(chi, family, MaximalKind::tau(eta)).fn;
    for (std::size_t i = 0; i < m.mask.size(); ++i) {
      CHECK((m.mask[i] != 0) == (mt.values[i] == 1));
    }
  }
}

TEST_CASE("iterate_set_maximal: k = 1, monotonicity, fixed point") {
  Universe u = uni(1, 0, Rational(1, 12), 12);
  CubeFamily family = CubeFamily::all_grid_aligned(u);
  Rational eta(1, 2);
  Rng rng(4);
  IndicatorSet e = IndicatorSet::empty(u);
  e.mask[3] = e.mask[7] = 1;
  IndicatorSet once = set_maximal(e, eta, family);
  CHECK(iterate_set_maximal(e, eta, family, 1).mask == once.mask);
  IndicatorSet prev = e;
  for (unsigned k = 1; k <= 5; ++k) {
    IndicatorSet cur = iterate_set_maximal(e, eta, family, k);
    for (std::size_t i = 0; i < cur.mask.size(); ++i) CHECK(cur.mask[i] >= prev.mask[i]);
    prev = cur;
  }
  IndicatorSet full = IndicatorSet::empty(u);
  for (auto& m : full.mask) m = 1;
  IndicatorSet fixed = set_maximal(full, eta, family);
  CHECK(fixed.mask == full.mask);
  CHECK(iterate_set_maximal(full, eta, family, 4).mask == full.mask);
}

TEST_CASE("iteration growth bound on refined lattices") {
  // E lives on unit cells; the operator family is the 3x refined lattice.
  const long cells = 12;
  Universe fine = uni(1, 0, Rational(1, 3), 3 * cells);
  CubeFamily family = CubeFamily::all_grid_aligned(fine);
  Rational alpha(1, 2);
  Rational q_measure = fine.total_measure();
  double factor = 1.0 + (2.0 - 1.0) / 2.0;  // 1 + (alpha^{-1} - 1)/2^n
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Rng rng(seed);
    std::uniform_int_distribution<long> pick(0, cells - 1);
    IndicatorSet e = IndicatorSet::empty(fine);
    long coarse = pick(rng) / 3 + 1;  // 1..4 coarse cells => |E| < alpha |Q|
    for (long i = 0; i < coarse; ++i) {
      long base = 3 * pick(rng);
      e.mask[static_cast<std::size_t>(base)] = 1;
      e.mask[static_cast<std::size_t>(base + 1)] = 1;
      e.mask[static_cast<std::size_t>(base + 2)] = 1;
    }
    Rational e_measure = e.measure();
    long bound = static_cast<long>(
        std::ceil(std::log(to_double(alpha * q_measure / e_measure)) / std::log(factor)));
    IndicatorSet cur = e;
    long k = 0;
    while (cur.measure() < alpha * q_measure) {
      cur = set_maximal(cur, alpha, family);
      ++k;
      REQUIRE(k <= bound + 1);  // +1: the loop counts the final confirming step
    }
    CHECK(k <= bound);
  }
}

TEST_CASE("expansion_check values and preconditions") {
  Universe u = uni(1, 0, Rational(1, 12), 12);
  GridCube q{{0}, 12};

  IndicatorSet e = IndicatorSet::empty(u);
  e.mask[5] = 1;
  ExpansionResult res = expansion_check(e, q, Rational(1, 2));
  CHECK(res.rhs == Rational(3, 2) * e.measure());

  // |E| = eta |Q| exactly: the whole cube is marked, lhs = |Q| >= rhs.
  IndicatorSet half = IndicatorSet::empty(u);
  for (long i = 0; i < 6; ++i) half.mask[static_cast<std::size_t>(i)] = 1;
  res = expansion_check(half, q, Rational(1, 2));
  CHECK(res.lhs == u.total_measure());
  CHECK(res.pass);

  // |E| > eta |Q| is outside the lemma.
  IndicatorSet big = IndicatorSet::empty(u);
  for (long i = 0; i < 8; ++i) big.mask[static_cast<std::size_t>(i)] = 1;
  CHECK_THROWS_AS(expansion_check(big, q, Rational(1, 2)), std::invalid_argument);

  // E must sit inside Q.
  IndicatorSet outside = IndicatorSet::empty(u);
  outside.mask[11] = 1;
  CHECK_THROWS_AS(expansion_check(outside, GridCube{{0}, 6}, Rational(1, 2)),
                  std::invalid_argument);
}

TEST_CASE("stopping cubes") {
  Universe u = uni(1, 0, Rational(1, 16), 16);
  DyadicGridSpec spec{{Rational(0)}, 0, 4};

  // Level above the max: empty decomposition.
  Rng rng(1);
  StepFunction f = random_stepfn(u, rng);
  StoppingDecomposition sd = stopping_cubes(f, spec, Rational(1, 2), Rational(100));
  CHECK(sd.cubes.empty());

  // Dyadic indicator: stopping cubes at lambda = 1/2 are the maximal dyadic
  // cubes with density >= 1/2.
  StepFunction chi = StepFunction::zero(u);
  chi.values[0] = chi.values[1] = chi.values[2] = chi.values[3] = 1;  // E = [0, 1/4)
  sd = stopping_cubes(chi, spec, Rational(1, 2), Rational(1, 2));
  REQUIRE(sd.cubes.size() == 1);
  CHECK(sd.cubes[0].k == 1);  // [0, 1/2): density exactly 1/2
  CHECK(sd.cubes[0].m == std::vector<long long>{0});

  CHECK_THROWS_AS(stopping_cubes(f, spec, Rational(1, 2), Rational(-1)), std::domain_error);
}

TEST_CASE("truncation radius") {
  Universe u = uni(1, -10, Rational(1, 10), 200);
  StepFunction f = indicator_interval(u, {-1}, {1});
  CHECK(truncation_radius(f, MaximalKind::tau(Rational(1, 2))) == Rational(4));
  CHECK(truncation_side_cells(f, MaximalKind::tau(Rational(1, 2))) == 40);
  CHECK(truncation_radius(f, MaximalKind::median()) == Rational(4));

  StepFunction z = StepFunction::zero(u);
  CHECK(truncation_side_cells(z, MaximalKind::median()) == 1);
}

TEST_CASE("median_mollify") {
  Universe u = uni(1, 0, Rational(1, 32), 32);
  Rng rng(8);
  StepFunction f = random_stepfn(u, rng);

  // r = h/2: the snapped window is the single cell, so output = f.
  StepFunction same = median_mollify(f, Rational(1, 64));
  CHECK(same.values == f.values);

  // Monotone input: mollified values stay within the window's range, hence
  // within f's global range.
  StepFunction mono = StepFunction::zero(u);
  for (long i = 0; i < 32; ++i) mono.values[static_cast<std::size_t>(i)] = Rational(i, 32);
  StepFunction g = median_mollify(mono, Rational(1, 8));
  for (const auto& v : g.values) {
    CHECK(v >= 0);
    CHECK(v <= Rational(31, 32));
  }

  CHECK_THROWS_AS(median_mollify(f, Rational(1, 100)), std::domain_error);
}

TEST_CASE("cellwise_max") {
  Universe u = uni(1, 0, 1, 3);
  StepFunction a = StepFunction::zero(u);
  StepFunction b = StepFunction::zero(u);
  a.values = {1, -2, 5};
  b.values = {0, 3, 4};
  StepFunction m = cellwise_max(a, b);
  CHECK(m.values == std::vector<Rational>{1, 3, 5});
}
