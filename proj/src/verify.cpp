#include "medimax/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <thread>

#include "medimax/maximal.hpp"
#include "medimax/weights.hpp"

namespace medimax {

namespace {

int thread_budget() {
  if (const char* e = std::getenv("MEDIMAX_THREADS")) {
    int v = std::atoi(e);
    if (v > 0) return v;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc ? static_cast<int>(hc) : 1;
}

struct Outcome {
  bool pass = true;
  std::optional<Rational> ratio;
  Json witness = nullptr;
  std::vector<std::string> notes;
};

/// Runs `count` independent instances, each with its own RNG derived from
/// the master seed, across MEDIMAX_THREADS workers. Results land in index
/// order, so the aggregate is deterministic regardless of thread count.
std::vector<Outcome> run_parallel(long count, std::uint64_t seed,
                                  const std::function<Outcome(Rng&, long)>& body) {
  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(count));
  Rng master(seed);
  for (auto& s : seeds) s = master();

  std::vector<Outcome> out(static_cast<std::size_t>(count));
  auto work = [&](long i) {
    Rng rng(seeds[static_cast<std::size_t>(i)]);
    try {
      out[static_cast<std::size_t>(i)] = body(rng, i);
    } catch (const std::exception& ex) {
      Outcome o;
      o.pass = false;
      o.witness = Json{{"instance", i}, {"exception", ex.what()}};
      out[static_cast<std::size_t>(i)] = std::move(o);
    }
  };

  int threads = static_cast<int>(std::min<long>(thread_budget(), count));
  if (threads <= 1) {
    for (long i = 0; i < count; ++i) work(i);
    return out;
  }
  std::atomic<long> next{0};
  auto worker = [&]() {
    for (long i = next.fetch_add(1); i < count; i = next.fetch_add(1)) work(i);
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return out;
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

VerificationReport aggregate(const std::string& claim, std::uint64_t seed, const Timer& timer,
                             const std::vector<Outcome>& outcomes) {
  VerificationReport r;
  r.claim = claim;
  r.seed = seed;
  r.instances = static_cast<long>(outcomes.size());
  std::optional<Rational> worst;
  for (const auto& o : outcomes) {
    if (!o.pass && r.pass) {
      r.pass = false;
      r.witness = o.witness;
    }
    if (o.ratio && (!worst || *o.ratio > *worst)) worst = *o.ratio;
    for (const auto& n : o.notes) r.notes.push_back(n);
  }
  if (worst) r.worst_ratio = format_rational(*worst);
  r.runtime_seconds = timer.seconds();
  return r;
}

Universe make_universe(int dim, const Rational& origin, const Rational& cell, long side_cells) {
  Universe u;
  u.dim = dim;
  u.origin.assign(static_cast<std::size_t>(dim), origin);
  u.cell = cell;
  u.extent.assign(static_cast<std::size_t>(dim), side_cells);
  u.validate();
  return u;
}

DyadicGridSpec zero_shift_spec(int dim, int k_min, int k_max) {
  DyadicGridSpec spec;
  spec.shift.assign(static_cast<std::size_t>(dim), Rational(0));
  spec.k_min = k_min;
  spec.k_max = k_max;
  return spec;
}

/// The default random-instance universes, alternating dimension per index.
Universe alternating_universe(long index) {
  return index % 2 == 0 ? make_universe(1, 0, Rational(1, 16), 16)
                        : make_universe(2, 0, Rational(1, 4), 4);
}

Rational w_measure_above(const StepFunction& g, const Weight& w, const Rational& lambda) {
  Rational total = 0;
  Rational cm = g.universe.cell_measure();
  for (std::size_t i = 0; i < g.values.size(); ++i) {
    if (abs(g.values[i]) > lambda) total += w.base.values[i] * cm;
  }
  return total;
}

Json instance_witness(long index, const StepFunction& f) {
  return Json{{"instance", index}, {"f", stepfn_to_json(f)}};
}

}  // namespace

Json report_to_json(const VerificationReport& r) {
  return Json{{"claim", r.claim},
              {"pass", r.pass},
              {"instances", r.instances},
              {"worst_ratio", r.worst_ratio},
              {"witness", r.witness},
              {"runtime_seconds", r.runtime_seconds},
              {"seed", r.seed},
              {"notes", r.notes}};
}

StepFunction random_stepfn(const Universe& u, Rng& rng) {
  StepFunction f = StepFunction::zero(u);
  std::uniform_int_distribution<int> pick_q(0, 1);
  for (auto& v : f.values) {
    long q = pick_q(rng) == 0 ? 8 : 64;
    std::uniform_int_distribution<long> pick_k(-q, q);
    v = Rational(pick_k(rng), q);
  }
  return f;
}

Weight random_weight(const Universe& u, Rng& rng) {
  Weight w{StepFunction::zero(u)};
  std::uniform_int_distribution<int> pick_j(-3, 3);
  for (auto& v : w.base.values) v = rational_pow(Rational(2), pick_j(rng));
  return w;
}

StepFunction indicator_interval(const Universe& u, const std::vector<Rational>& from,
                                const std::vector<Rational>& to) {
  StepFunction f = StepFunction::zero(u);
  CellBox all;
  all.lo.assign(static_cast<std::size_t>(u.dim), 0);
  all.hi.assign(u.extent.begin(), u.extent.end());
  Rational half = u.cell / 2;
  for_each_cell(all, [&](const std::vector<long>& cidx) {
    bool inside = true;
    for (int a = 0; a < u.dim && inside; ++a) {
      Rational mid = u.coordinate(a, cidx[static_cast<std::size_t>(a)]) + half;
      inside = from[static_cast<std::size_t>(a)] <= mid && mid < to[static_cast<std::size_t>(a)];
    }
    if (inside) f.values[static_cast<std::size_t>(u.flat_index(cidx))] = 1;
  });
  return f;
}

IndicatorSet indicator_set_interval(const Universe& u, const std::vector<Rational>& from,
                                    const std::vector<Rational>& to) {
  StepFunction f = indicator_interval(u, from, to);
  IndicatorSet e = IndicatorSet::empty(u);
  for (std::size_t i = 0; i < f.values.size(); ++i) e.mask[i] = f.values[i] != 0 ? 1 : 0;
  return e;
}

Weight wt_weight(const Universe& u, const Rational& t, const std::vector<Rational>& from,
                 const std::vector<Rational>& to) {
  StepFunction ind = indicator_interval(u, from, to);
  Weight w{StepFunction::constant(u, 1)};
  for (std::size_t i = 0; i < ind.values.size(); ++i) {
    if (ind.values[i] != 0) w.base.values[i] = t;
  }
  w.validate();
  return w;
}

VerificationReport check_comparison(long count, std::uint64_t seed) {
  Timer timer;
  Rational half(1, 2);
  auto outcomes = run_parallel(count, seed, [&](Rng& rng, long index) {
    Outcome o;
    Universe u = alternating_universe(index);
    StepFunction f = random_stepfn(u, rng);
    StepFunction g = f;
    for (auto& v : g.values) v = abs(v);
    for (const GridCube& q : enumerate_grid_cubes(u)) {
      ValueSummary s = summarize(f, view_of(u, q));
      Rational m = abs(median_max_abs(s));
      Rational t = tau_median(s, half);
      if (m > t) {
        o.pass = false;
        o.witness = instance_witness(index, f);
        o.witness["cube"] = grid_cube_to_json(q);
        o.witness["claim_part"] = "median_vs_half_tau";
        return o;
      }
      if (t > 0 && (!o.ratio || m / t > *o.ratio)) o.ratio = m / t;
      ValueSummary sg = summarize(g, view_of(u, q));
      if (abs(median_max_abs(sg)) != tau_median(sg, half)) {
        o.pass = false;
        o.witness = instance_witness(index, f);
        o.witness["cube"] = grid_cube_to_json(q);
        o.witness["claim_part"] = "nonnegative_equality";
        return o;
      }
    }
    return o;
  });
  return aggregate("comparison", seed, timer, outcomes);
}

namespace {

/// Universe + grid matching the dyadic weighted-bound suites: the universe
/// is exactly [0,1)^n, so every dyadic cube in range lies inside it.
struct DyadicSetup {
  Universe u;
  DyadicGridSpec spec;
};

DyadicSetup dyadic_setup(long index) {
  if (index % 2 == 0) {
    return {make_universe(1, 0, Rational(1, 16), 16), zero_shift_spec(1, 0, 4)};
  }
  return {make_universe(2, 0, Rational(1, 8), 8), zero_shift_spec(2, 0, 3)};
}

}  // namespace

VerificationReport check_a1_bound(long count_per_dim, const Rational& tau, std::uint64_t seed) {
  Timer timer;
  auto outcomes = run_parallel(2 * count_per_dim, seed, [&](Rng& rng, long index) {
    Outcome o;
    auto [u, spec] = dyadic_setup(index);
    StepFunction f = random_stepfn(u, rng);
    Weight w = random_weight(u, rng);
    Characteristic a1 = a1_characteristic(w, CubeFamily::dyadic(u, spec));
    if (a1.infinite || !a1.exact) {
      o.pass = false;
      o.witness = Json{{"instance", index}, {"error", "characteristic not exact finite"}};
      return o;
    }
    StepFunction mf = dyadic_maximal(f, spec, MaximalKind::tau(tau));
    Rational nf = l1_norm(f, w);
    Rational nmf = l1_norm(mf, w);
    if (nf == 0) {
      o.pass = nmf == 0;
      if (!o.pass) o.witness = instance_witness(index, f);
      return o;
    }
    Rational bound = a1.value / tau * nf;
    o.ratio = nmf / bound;
    o.pass = *o.ratio <= 4;
    if (!o.pass) {
      o.witness = instance_witness(index, f);
      o.witness["w"] = weight_to_json(w);
      o.witness["ratio"] = format_rational(*o.ratio);
    }
    return o;
  });
  return aggregate("a1_bound", seed, timer, outcomes);
}

VerificationReport check_weak_type(long count_per_dim, const Rational& tau, std::uint64_t seed) {
  Timer timer;
  auto outcomes = run_parallel(2 * count_per_dim, seed, [&](Rng& rng, long index) {
    Outcome o;
    auto [u, spec] = dyadic_setup(index);
    StepFunction f = random_stepfn(u, rng);
    Weight w = random_weight(u, rng);
    Characteristic a1 = a1_characteristic(w, CubeFamily::dyadic(u, spec));
    StepFunction mf = dyadic_maximal(f, spec, MaximalKind::tau(tau));
    std::set<Rational> lambdas{Rational(0)};
    for (const auto& v : mf.values) lambdas.insert(abs(v));
    for (const auto& v : f.values) lambdas.insert(abs(v));
    for (const Rational& lambda : lambdas) {
      Rational lhs = w_measure_above(mf, w, lambda);
      Rational rhs = a1.value / tau * w_measure_above(f, w, lambda);
      if (lhs > rhs) {
        o.pass = false;
        o.witness = instance_witness(index, f);
        o.witness["w"] = weight_to_json(w);
        o.witness["lambda"] = format_rational(lambda);
        return o;
      }
      if (rhs > 0 && (!o.ratio || lhs / rhs > *o.ratio)) o.ratio = lhs / rhs;
    }
    return o;
  });
  return aggregate("weak_type", seed, timer, outcomes);
}

namespace {

/// The sharpness configuration: chi_{[-1,1]} on [-10,10) with h = 1/10.
struct SharpnessSetup {
  Universe u;
  StepFunction f;
  StepFunction mf;
  StepFunction expected;
};

SharpnessSetup sharpness_setup() {
  SharpnessSetup s{make_universe(1, -10, Rational(1, 10), 200), {}, {}, {}};
  s.f = indicator_interval(s.u, {-1}, {1});
  MaximalKind kind = MaximalKind::tau(Rational(1, 2));
  long cap = truncation_side_cells(s.f, kind);
  s.mf = brute_maximal(s.f, CubeFamily::all_grid_aligned(s.u, cap), kind).fn;
  s.expected = indicator_interval(s.u, {-3}, {3});
  return s;
}

}  // namespace

VerificationReport check_sharpness(const std::vector<Rational>& ts) {
  Timer timer;
  VerificationReport r;
  r.claim = "sharpness";
  r.instances = static_cast<long>(ts.size());
  SharpnessSetup s = sharpness_setup();
  if (s.mf.values != s.expected.values) {
    r.pass = false;
    r.witness = Json{{"error", "tau-maximal of the indicator is not the tripled indicator"},
                     {"got", stepfn_to_json(s.mf)}};
    r.runtime_seconds = timer.seconds();
    return r;
  }
  r.notes.push_back("maximal function equals the tripled indicator exactly");
  std::optional<Rational> worst;
  for (const Rational& t : ts) {
    Weight w = wt_weight(s.u, t, {-1}, {1});
    Rational ratio = l1_norm(s.mf, w) / l1_norm(s.f, w);
    Rational expected = Rational(2) / t + 1;
    if (ratio != expected) {
      r.pass = false;
      r.witness = Json{{"t", format_rational(t)},
                       {"ratio", format_rational(ratio)},
                       {"expected", format_rational(expected)}};
      break;
    }
    Characteristic a1 = a1_characteristic(w, CubeFamily::all_grid_aligned(s.u));
    if (a1.infinite || !a1.exact || a1.value > Rational(1) / t) {
      r.pass = false;
      r.witness = Json{{"t", format_rational(t)}, {"error", "finite-family A1 exceeds 1/t"}};
      break;
    }
    r.notes.push_back("t=" + format_rational(t) + " ratio=" + format_rational(ratio) +
                      " finite_a1=" + format_rational(a1.value) + " limit_a1=" +
                      format_rational(Rational(1) / t));
    if (!worst || ratio > *worst) worst = ratio;
  }
  if (worst) r.worst_ratio = format_rational(*worst);
  r.runtime_seconds = timer.seconds();
  return r;
}

VerificationReport check_lp_lower(const std::vector<Rational>& ts,
                                  const std::vector<unsigned>& ps) {
  Timer timer;
  VerificationReport r;
  r.claim = "lp_lower";
  r.instances = static_cast<long>(ts.size() * ps.size());
  SharpnessSetup s = sharpness_setup();
  double worst = 0.0;
  for (const Rational& t : ts) {
    Weight w = wt_weight(s.u, t, {-1}, {1});
    for (unsigned p : ps) {
      Rational mass_ratio = lp_mass(s.mf, w, p) / lp_mass(s.f, w, p);
      double got = std::pow(to_double(mass_ratio), 1.0 / p);
      double expected = std::pow(to_double(Rational(2) / t + 1), 1.0 / p);
      double err = std::abs(got - expected);
      worst = std::max(worst, err / expected);
      if (err > 1e-9 * expected) {
        r.pass = false;
        r.witness = Json{{"t", format_rational(t)}, {"p", p}, {"got", got},
                         {"expected", expected}};
        r.runtime_seconds = timer.seconds();
        return r;
      }
    }
  }
  r.worst_ratio = std::to_string(worst);
  r.notes.push_back("worst relative error " + std::to_string(worst));
  r.runtime_seconds = timer.seconds();
  return r;
}

namespace {

/// Builds an indicator set on the 3x-refined lattice from a coarse-cell
/// mask, universe [0, cells)^n with unit coarse cells (fine cell = 1/3).
IndicatorSet refined_set(const Universe& fine, long coarse_cells,
                         const std::vector<char>& coarse_mask) {
  IndicatorSet e = IndicatorSet::empty(fine);
  CellBox all;
  all.lo.assign(static_cast<std::size_t>(fine.dim), 0);
  all.hi.assign(fine.extent.begin(), fine.extent.end());
  for_each_cell(all, [&](const std::vector<long>& cidx) {
    long flat_coarse = 0;
    for (int a = 0; a < fine.dim; ++a) {
      flat_coarse = flat_coarse * coarse_cells + cidx[static_cast<std::size_t>(a)] / 3;
    }
    if (coarse_mask[static_cast<std::size_t>(flat_coarse)]) {
      e.mask[static_cast<std::size_t>(fine.flat_index(cidx))] = 1;
    }
  });
  return e;
}

}  // namespace

VerificationReport check_expansion(int dim, long cells_per_axis, const std::vector<Rational>& etas,
                                   long samples, std::uint64_t seed) {
  Timer timer;
  Universe fine = make_universe(dim, 0, Rational(1, 3), 3 * cells_per_axis);
  GridCube whole;
  whole.corner.assign(static_cast<std::size_t>(dim), 0);
  whole.side = 3 * cells_per_axis;
  Rational q_measure = cube_measure(fine, whole);

  long coarse_total = 1;
  for (int a = 0; a < dim; ++a) coarse_total *= cells_per_axis;

  std::vector<std::vector<char>> masks;
  if (samples == 0) {
    if (coarse_total > 24) throw std::invalid_argument("exhaustive expansion: too many cells");
    for (long bits = 1; bits < (1L << coarse_total); ++bits) {
      std::vector<char> m(static_cast<std::size_t>(coarse_total), 0);
      for (long i = 0; i < coarse_total; ++i) m[static_cast<std::size_t>(i)] = (bits >> i) & 1;
      masks.push_back(std::move(m));
    }
  } else {
    Rng rng(seed);
    Rational max_eta = *std::max_element(etas.begin(), etas.end());
    long max_cells =
        static_cast<long>(floor_rational(max_eta * coarse_total));
    std::uniform_int_distribution<long> pick_count(1, std::max<long>(1, max_cells));
    std::vector<long> order(static_cast<std::size_t>(coarse_total));
    std::iota(order.begin(), order.end(), 0);
    for (long sidx = 0; sidx < samples; ++sidx) {
      std::shuffle(order.begin(), order.end(), rng);
      long n = pick_count(rng);
      std::vector<char> m(static_cast<std::size_t>(coarse_total), 0);
      for (long i = 0; i < n; ++i) m[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = 1;
      masks.push_back(std::move(m));
    }
  }

  long count = static_cast<long>(masks.size());
  auto outcomes = run_parallel(count, seed, [&](Rng&, long index) {
    Outcome o;
    const auto& mask = masks[static_cast<std::size_t>(index)];
    IndicatorSet e = refined_set(fine, cells_per_axis, mask);
    Rational e_measure = e.measure();
    for (const Rational& eta : etas) {
      if (e_measure > eta * q_measure) continue;
      ExpansionResult res = expansion_check(e, whole, eta);
      if (!res.pass) {
        o.pass = false;
        o.witness = Json{{"instance", index}, {"eta", format_rational(eta)},
                         {"lhs", format_rational(res.lhs)}, {"rhs", format_rational(res.rhs)}};
        return o;
      }
      if (res.lhs > 0) {
        Rational rr = res.rhs / res.lhs;
        if (!o.ratio || rr > *o.ratio) o.ratio = rr;
      }
    }
    return o;
  });
  VerificationReport agg = aggregate("expansion", seed, timer, outcomes);
  agg.notes.push_back(samples == 0 ? "exhaustive over all nonempty coarse-cell subsets"
                                   : "sampled coarse-cell subsets");
  agg.notes.push_back("set operator over all cubes of the 3x refined lattice");
  return agg;
}

VerificationReport check_mollification() {
  Timer timer;
  VerificationReport r;
  r.claim = "mollification";
  Universe u = make_universe(1, 0, Rational(1, 32), 32);
  StepFunction f = StepFunction::zero(u);
  for (long i = 0; i < 32; ++i) f.values[static_cast<std::size_t>(i)] = Rational(2 * i + 1, 64);
  std::vector<Weight> weights{Weight{StepFunction::constant(u, 1)},
                              wt_weight(u, Rational(1, 4), {Rational(3, 8)}, {Rational(5, 8)})};
  std::vector<Rational> radii{Rational(1, 8), Rational(1, 16), Rational(1, 32), Rational(1, 64)};
  for (const Weight& w : weights) {
    std::optional<Rational> prev;
    Rational last;
    for (const Rational& rad : radii) {
      StepFunction g = median_mollify(f, rad);
      StepFunction diff = f;
      for (std::size_t i = 0; i < diff.values.size(); ++i) diff.values[i] -= g.values[i];
      Rational err = l1_norm(diff, w);
      r.notes.push_back("radius=" + format_rational(rad) + " error=" + format_rational(err));
      if (prev && err > *prev) {
        r.pass = false;
        r.witness = Json{{"radius", format_rational(rad)}, {"error", "error increased"}};
        r.runtime_seconds = timer.seconds();
        return r;
      }
      prev = err;
      last = err;
    }
    if (last != 0) {
      r.pass = false;
      r.witness = Json{{"error", "half-cell radius error nonzero"},
                       {"value", format_rational(last)}};
      break;
    }
    ++r.instances;
  }
  r.runtime_seconds = timer.seconds();
  return r;
}

VerificationReport check_covering_and_domination(long count, const Rational& tau,
                                                 std::uint64_t seed) {
  Timer timer;
  VerificationReport r;
  r.claim = "covering_and_domination";
  r.seed = seed;

  // Part 1: every grid-aligned interval of [-2,2) with h = 1/48 has a
  // shifted-dyadic cover with measure ratio <= 6.
  Universe cu = make_universe(1, -2, Rational(1, 48), 192);
  std::vector<DyadicGridSpec> grids = shifted_grids(1, -4, 4);
  std::optional<Rational> worst;
  for (const GridCube& q : enumerate_grid_cubes(cu)) {
    CoveringResult res = covering_cube(cu, q, grids);
    std::vector<Rational> corner = dyadic_corner(grids[res.grid_index], res.cube);
    Rational side = dyadic_side(res.cube.k);
    Rational q_lo = cu.coordinate(0, q.corner[0]);
    Rational q_hi = q_lo + q.side * cu.cell;
    bool contains = corner[0] <= q_lo && corner[0] + side >= q_hi;
    if (!contains || res.ratio > 6) {
      r.pass = false;
      r.witness = Json{{"part", "covering"}, {"cube", grid_cube_to_json(q)},
                       {"ratio", format_rational(res.ratio)}};
      r.runtime_seconds = timer.seconds();
      return r;
    }
    if (!worst || res.ratio > *worst) worst = res.ratio;
    ++r.instances;
  }
  r.notes.push_back("worst covering ratio " + format_rational(*worst));

  // Part 2: shifted-dyadic domination bound >= brute tau-maximal, cellwise,
  // on random inputs (cell size 1/12 keeps the 1/3-shifted grids aligned).
  MaximalKind kind = MaximalKind::tau(tau);
  auto outcomes = run_parallel(count, seed, [&](Rng& rng, long index) {
    Outcome o;
    Universe u = index % 4 == 3 ? make_universe(2, 0, Rational(1, 12), 6)
                                : make_universe(1, 0, Rational(1, 12), 12);
    StepFunction f = random_stepfn(u, rng);
    StepFunction dom = domination_bound(f, tau);
    long cap = truncation_side_cells(f, kind);
    StepFunction brute = brute_maximal(f, CubeFamily::all_grid_aligned(u, cap), kind).fn;
    for (std::size_t i = 0; i < f.values.size(); ++i) {
      if (dom.values[i] < brute.values[i]) {
        o.pass = false;
        o.witness = instance_witness(index, f);
        o.witness["cell"] = static_cast<long>(i);
        return o;
      }
      if (brute.values[i] > 0) {
        Rational rr = dom.values[i] / brute.values[i];
        if (!o.ratio || rr > *o.ratio) o.ratio = rr;
      }
    }
    return o;
  });
  VerificationReport dom = aggregate("covering_and_domination", seed, timer, outcomes);
  dom.instances += r.instances;
  dom.notes.insert(dom.notes.begin(), r.notes.begin(), r.notes.end());
  dom.pass = dom.pass && r.pass;
  if (dom.worst_ratio.empty() && worst) dom.worst_ratio = format_rational(*worst);
  return dom;
}

VerificationReport check_dyadic_oracle(long count, std::uint64_t seed) {
  Timer timer;
  auto outcomes = run_parallel(count, seed, [&](Rng& rng, long index) {
    Outcome o;
    Universe u;
    DyadicGridSpec spec;
    switch (index % 3) {
      case 0:
        // Cubes at coarse scales poke outside [0, 1.5); exercises padding.
        u = make_universe(1, 0, Rational(1, 16), 24);
        spec = zero_shift_spec(1, 0, 4);
        break;
      case 1:
        // 1/3-shifted grid, cell 1/24 keeps corners on the lattice.
        u = make_universe(1, 0, Rational(1, 24), 24);
        spec = zero_shift_spec(1, 0, 3);
        spec.shift[0] = Rational(1, 3);
        break;
      default:
        u = make_universe(2, 0, Rational(1, 8), 8);
        spec = zero_shift_spec(2, 0, 3);
        break;
    }
    StepFunction f = random_stepfn(u, rng);
    std::vector<MaximalKind> kinds{MaximalKind::median(), MaximalKind::tau(Rational(1, 2)),
                                   MaximalKind::hl_average()};
    for (const MaximalKind& kind : kinds) {
      StepFunction fast = dyadic_maximal(f, spec, kind);
      StepFunction brute = brute_maximal(f, CubeFamily::dyadic(u, spec), kind).fn;
      if (fast.values != brute.values) {
        o.pass = false;
        o.witness = instance_witness(index, f);
        o.witness["kind"] = static_cast<int>(kind.type);
        return o;
      }
    }
    return o;
  });
  return aggregate("dyadic_oracle", seed, timer, outcomes);
}

VerificationReport check_stopping(long count, const Rational& tau, std::uint64_t seed) {
  Timer timer;
  auto outcomes = run_parallel(count, seed, [&](Rng& rng, long index) {
    Outcome o;
    auto [u, spec] = dyadic_setup(index);
    StepFunction f = random_stepfn(u, rng);
    StepFunction mf = dyadic_maximal(f, spec, MaximalKind::tau(tau));
    std::set<Rational> lambdas{Rational(0)};
    for (const auto& v : mf.values) lambdas.insert(v);
    for (const Rational& lambda : lambdas) {
      StoppingDecomposition sd = stopping_cubes(f, spec, tau, lambda);
      std::vector<char> marked(f.values.size(), 0);
      for (std::size_t qi = 0; qi < sd.cubes.size(); ++qi) {
        bool overlap = false;
        for_each_cell(sd.boxes[qi], [&](const std::vector<long>& cidx) {
          char& m = marked[static_cast<std::size_t>(u.flat_index(cidx))];
          if (m) overlap = true;
          m = 1;
        });
        auto view = dyadic_view(u, spec, sd.cubes[qi]);
        if (overlap || !view ||
            measure_above(f, *view, lambda, /*strict=*/true, /*absolute=*/true) <
                tau * view->total_measure ||
            cube_statistic(summarize(f, *view), MaximalKind::tau(tau)) <= lambda) {
          o.pass = false;
          o.witness = instance_witness(index, f);
          o.witness["lambda"] = format_rational(lambda);
          return o;
        }
      }
      for (std::size_t i = 0; i < f.values.size(); ++i) {
        if ((mf.values[i] > lambda) != (marked[i] != 0)) {
          o.pass = false;
          o.witness = instance_witness(index, f);
          o.witness["lambda"] = format_rational(lambda);
          o.witness["error"] = "level set mismatch";
          return o;
        }
      }
    }
    return o;
  });
  return aggregate("stopping", seed, timer, outcomes);
}

namespace {

StepFunction embed_with_margin(const StepFunction& f, long margin) {
  const Universe& u = f.universe;
  Universe big = u;
  for (int a = 0; a < u.dim; ++a) {
    big.origin[static_cast<std::size_t>(a)] -= margin * u.cell;
    big.extent[static_cast<std::size_t>(a)] += 2 * margin;
  }
  StepFunction g = StepFunction::zero(big);
  CellBox all;
  all.lo.assign(static_cast<std::size_t>(u.dim), 0);
  all.hi.assign(u.extent.begin(), u.extent.end());
  for_each_cell(all, [&](const std::vector<long>& cidx) {
    std::vector<long> shifted = cidx;
    for (auto& c : shifted) c += margin;
    g.values[static_cast<std::size_t>(big.flat_index(shifted))] =
        f.values[static_cast<std::size_t>(u.flat_index(cidx))];
  });
  return g;
}

}  // namespace

VerificationReport check_truncation(long count, std::uint64_t seed) {
  Timer timer;
  auto outcomes = run_parallel(count, seed, [&](Rng& rng, long index) {
    Outcome o;
    Universe u = make_universe(1, 0, Rational(1, 12), 8);
    StepFunction f = random_stepfn(u, rng);
    std::vector<MaximalKind> kinds{MaximalKind::median(), MaximalKind::tau(Rational(1, 2)),
                                   MaximalKind::tau(Rational(3, 4))};
    for (const MaximalKind& kind : kinds) {
      long cap = truncation_side_cells(f, kind);
      StepFunction f1 = embed_with_margin(f, cap);
      StepFunction f2 = embed_with_margin(f, 2 * cap);
      StepFunction out1 = brute_maximal(f1, CubeFamily::all_grid_aligned(f1.universe), kind).fn;
      StepFunction out2 = brute_maximal(f2, CubeFamily::all_grid_aligned(f2.universe), kind).fn;
      StepFunction capped =
          brute_maximal(f2, CubeFamily::all_grid_aligned(f2.universe, cap), kind).fn;
      // Margin stability on the original window, plus the cap lemma on the
      // whole large universe.
      for (long i = 0; i < u.extent[0]; ++i) {
        if (out1.values[static_cast<std::size_t>(i + cap)] !=
            out2.values[static_cast<std::size_t>(i + 2 * cap)]) {
          o.pass = false;
          o.witness = instance_witness(index, f);
          o.witness["error"] = "margin growth changed a cell";
          return o;
        }
      }
      if (capped.values != out2.values) {
        o.pass = false;
        o.witness = instance_witness(index, f);
        o.witness["error"] = "side cap changed a cell";
        return o;
      }
    }
    return o;
  });
  return aggregate("truncation", seed, timer, outcomes);
}

}  // namespace medimax
