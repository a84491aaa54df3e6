#include "medimax/maximal.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace medimax {

Rational cube_statistic(const ValueSummary& s, const MaximalKind& kind) {
  switch (kind.type) {
    case MaximalKind::Type::median:
      return Rational(abs(median_max_abs(s)));
    case MaximalKind::Type::tau:
      return tau_median(s, kind.tau_value);
    case MaximalKind::Type::hl_average:
      return abs_average(s);
  }
  throw std::logic_error("cube_statistic: unknown kind");
}

MaximalResult brute_maximal(const StepFunction& f, const CubeFamily& family,
                            const MaximalKind& kind) {
  if (!f.universe.same_as(family.universe)) {
    throw std::domain_error("brute_maximal: family over a different universe");
  }
  MaximalResult result{StepFunction::zero(f.universe), false};
  const auto cubes = enumerate_cubes(family);
  if (cubes.empty()) {
    result.empty_family = true;
    return result;
  }
  for (const auto& fc : cubes) {
    const Rational stat = cube_statistic(summarize(f, fc.view), kind);
    for_each_cell(fc.view.box, [&](const std::vector<long>& c) {
      Rational& out = result.fn.at(c);
      if (stat > out) {
        out = stat;
      }
    });
  }
  return result;
}

namespace {

struct DyadicNode {
  DyadicCube cube;
  CellBox box;  // cube ∩ universe
  ValueSummary summary;
  Rational statistic;
};

struct DyadicTree {
  // nodes per scale, k_min first; within a scale, keyed by lattice index
  std::vector<std::map<std::vector<long long>, DyadicNode>> scales;
  int k_min = 0;
};

DyadicTree build_dyadic_tree(const StepFunction& f, const DyadicGridSpec& spec,
                             const MaximalKind& kind) {
  const Universe& u = f.universe;
  if (!cell_aligned(spec, u)) {
    throw std::domain_error("dyadic grid does not align with the cell lattice at its finest scale");
  }
  DyadicTree tree;
  tree.k_min = spec.k_min;
  const int n_scales = spec.k_max - spec.k_min + 1;
  tree.scales.resize(static_cast<std::size_t>(n_scales));

  // Finest scale: summaries straight from the cells.
  {
    DyadicGridSpec finest = spec;
    finest.k_min = spec.k_max;
    for (const auto& q : enumerate_dyadic_cubes(u, finest)) {
      auto view = dyadic_view(u, spec, q);
      if (!view) {
        continue;
      }
      DyadicNode node{q, view->box, summarize(f, *view), Rational(0)};
      node.statistic = cube_statistic(node.summary, kind);
      tree.scales.back().emplace(q.m, std::move(node));
    }
  }

  // Coarser scales: merge children. Children tile their parent, so the
  // part of the parent not covered by any in-universe child is zero mass.
  for (int k = spec.k_max - 1; k >= spec.k_min; --k) {
    auto& level = tree.scales[static_cast<std::size_t>(k - spec.k_min)];
    const auto& finer = tree.scales[static_cast<std::size_t>(k + 1 - spec.k_min)];
    for (const auto& [m, child] : finer) {
      const DyadicCube parent_cube = dyadic_parent(spec, child.cube);
      auto it = level.find(parent_cube.m);
      if (it == level.end()) {
        auto view = dyadic_view(u, spec, parent_cube);
        DyadicNode node{parent_cube, view->box, ValueSummary{{}, Rational(0)}, Rational(0)};
        it = level.emplace(parent_cube.m, std::move(node)).first;
      }
      it->second.summary = merge_summaries(it->second.summary, child.summary);
    }
    for (auto& [m, node] : level) {
      pad_with_zero(node.summary, dyadic_measure(u.dim, node.cube.k));
      node.statistic = cube_statistic(node.summary, kind);
    }
  }
  return tree;
}

}  // namespace

StepFunction dyadic_maximal(const StepFunction& f, const DyadicGridSpec& spec,
                            const MaximalKind& kind) {
  const DyadicTree tree = build_dyadic_tree(f, spec, kind);
  // Top-down pass: running max over ancestors.
  std::vector<std::map<std::vector<long long>, Rational>> running(tree.scales.size());
  for (std::size_t level = 0; level < tree.scales.size(); ++level) {
    for (const auto& [m, node] : tree.scales[level]) {
      Rational value = node.statistic;
      if (level > 0) {
        const DyadicCube parent_cube = dyadic_parent(spec, node.cube);
        const auto it = running[level - 1].find(parent_cube.m);
        if (it != running[level - 1].end() && it->second > value) {
          value = it->second;
        }
      }
      running[level].emplace(m, std::move(value));
    }
  }
  StepFunction out = StepFunction::zero(f.universe);
  const auto& finest = tree.scales.back();
  for (const auto& [m, node] : finest) {
    const Rational& value = running.back().at(m);
    for_each_cell(node.box, [&](const std::vector<long>& c) { out.at(c) = value; });
  }
  return out;
}

StepFunction domination_bound(const StepFunction& f, const Rational& tau) {
  if (tau <= 0 || tau >= 1) {
    throw std::domain_error("domination_bound: tau must lie in (0,1)");
  }
  const Universe& u = f.universe;
  const int n = u.dim;
  const Rational tau_dyadic = tau / rational_pow(Rational(6), n);

  // Coarsest scale: the covering scale of the largest useful cube side.
  Rational ell_max = truncation_radius(f, MaximalKind::tau(tau));
  if (ell_max < u.cell) {
    ell_max = u.cell;
  }
  int k_min = 0;
  while (dyadic_side(k_min) < 3 * ell_max) {
    --k_min;
  }
  while (dyadic_side(k_min + 1) >= 3 * ell_max) {
    ++k_min;
  }

  StepFunction out = StepFunction::zero(u);
  for (auto& spec : shifted_grids(n, k_min, k_min)) {
    // Finest aligned scale for this shift pattern.
    int k_max = k_min;
    int k_try = k_min;
    while (dyadic_side(k_try + 1) >= u.cell) {
      ++k_try;
    }
    bool aligned = false;
    for (int k = k_try; k >= k_min; --k) {
      DyadicGridSpec probe = spec;
      probe.k_max = k;
      if (cell_aligned(probe, u)) {
        k_max = k;
        aligned = true;
        break;
      }
    }
    if (!aligned) {
      throw std::domain_error(
          "domination_bound: shifted grid cannot align with the cell lattice "
          "(cell side must be 1/(3*2^m) for 1/3-shifted grids)");
    }
    spec.k_max = k_max;
    out = cellwise_max(out, dyadic_maximal(f, spec, MaximalKind::tau(tau_dyadic)));
  }
  return out;
}

namespace {

// Row-major inclusion-exclusion counter over an indicator mask.
struct PrefixCounts {
  const Universe* u = nullptr;
  std::vector<long> sums;  // size prod(extent+1)

  explicit PrefixCounts(const IndicatorSet& e) : u(&e.universe) {
    std::vector<long> ext1(u->extent.begin(), u->extent.end());
    for (auto& x : ext1) {
      ++x;
    }
    long total = 1;
    for (long x : ext1) {
      total *= x;
    }
    sums.assign(static_cast<std::size_t>(total), 0);
    CellBox all{std::vector<long>(static_cast<std::size_t>(u->dim), 0), u->extent};
    for_each_cell(all, [&](const std::vector<long>& c) {
      long idx = 0;
      for (int a = 0; a < u->dim; ++a) {
        idx = idx * ext1[static_cast<std::size_t>(a)] + c[static_cast<std::size_t>(a)] + 1;
      }
      sums[static_cast<std::size_t>(idx)] =
          e.mask[static_cast<std::size_t>(u->flat_index(c))] ? 1 : 0;
    });
    // Accumulate along each axis in turn.
    for (int axis = 0; axis < u->dim; ++axis) {
      accumulate_axis(axis, ext1);
    }
  }

  void accumulate_axis(int axis, const std::vector<long>& ext1) {
    const int n = u->dim;
    std::vector<long> c(static_cast<std::size_t>(n), 0);
    while (true) {
      if (c[static_cast<std::size_t>(axis)] > 0) {
        std::vector<long> prev = c;
        --prev[static_cast<std::size_t>(axis)];
        at(c, ext1) += at(prev, ext1);
      }
      int a = n - 1;
      while (a >= 0) {
        const std::size_t sa = static_cast<std::size_t>(a);
        if (++c[sa] < ext1[sa]) {
          break;
        }
        c[sa] = 0;
        --a;
      }
      if (a < 0) {
        break;
      }
    }
  }

  long& at(const std::vector<long>& c, const std::vector<long>& ext1) {
    long idx = 0;
    for (int a = 0; a < u->dim; ++a) {
      idx = idx * ext1[static_cast<std::size_t>(a)] + c[static_cast<std::size_t>(a)];
    }
    return sums[static_cast<std::size_t>(idx)];
  }

  long box_count(const CellBox& box) const {
    std::vector<long> ext1(u->extent.begin(), u->extent.end());
    for (auto& x : ext1) {
      ++x;
    }
    const int n = u->dim;
    long total = 0;
    for (unsigned corner = 0; corner < (1U << n); ++corner) {
      long idx = 0;
      int parity = 0;
      for (int a = 0; a < n; ++a) {
        const std::size_t sa = static_cast<std::size_t>(a);
        long coord;
        if ((corner >> a) & 1U) {
          coord = box.lo[sa];
          ++parity;
        } else {
          coord = box.hi[sa];
        }
        idx = idx * ext1[sa] + coord;
      }
      total += (parity % 2 == 0 ? 1 : -1) * sums[static_cast<std::size_t>(idx)];
    }
    return total;
  }
};

}  // namespace

IndicatorSet set_maximal(const IndicatorSet& e, const Rational& eta, const CubeFamily& family) {
  if (eta <= 0 || eta >= 1) {
    throw std::domain_error("set_maximal: eta must lie in (0,1)");
  }
  if (!e.universe.same_as(family.universe)) {
    throw std::domain_error("set_maximal: family over a different universe");
  }
  const Universe& u = e.universe;
  const Rational cell = u.cell_measure();
  const PrefixCounts counts(e);
  IndicatorSet out = IndicatorSet::empty(u);
  // Mark qualifying cubes through a difference array; one prefix pass at the
  // end recovers the union.
  std::vector<long> ext1(u.extent.begin(), u.extent.end());
  for (auto& x : ext1) {
    ++x;
  }
  long diff_total = 1;
  for (long x : ext1) {
    diff_total *= x;
  }
  std::vector<long> diff(static_cast<std::size_t>(diff_total), 0);
  auto diff_index = [&](const std::vector<long>& c) {
    long idx = 0;
    for (int a = 0; a < u.dim; ++a) {
      idx = idx * ext1[static_cast<std::size_t>(a)] + c[static_cast<std::size_t>(a)];
    }
    return static_cast<std::size_t>(idx);
  };
  for (const auto& fc : enumerate_cubes(family)) {
    const long inside = counts.box_count(fc.view.box);
    if (Rational(inside) * cell >= eta * fc.view.total_measure) {
      // +1 at box.lo, alternating signs at the other corners
      const int n = u.dim;
      for (unsigned corner = 0; corner < (1U << n); ++corner) {
        std::vector<long> c(static_cast<std::size_t>(n));
        int parity = 0;
        for (int a = 0; a < n; ++a) {
          const std::size_t sa = static_cast<std::size_t>(a);
          if ((corner >> a) & 1U) {
            c[sa] = fc.view.box.hi[sa];
            ++parity;
          } else {
            c[sa] = fc.view.box.lo[sa];
          }
        }
        diff[diff_index(c)] += (parity % 2 == 0 ? 1 : -1);
      }
    }
  }
  // Prefix-accumulate the difference array, then read cell flags.
  for (int axis = 0; axis < u.dim; ++axis) {
    std::vector<long> c(static_cast<std::size_t>(u.dim), 0);
    while (true) {
      if (c[static_cast<std::size_t>(axis)] > 0) {
        std::vector<long> prev = c;
        --prev[static_cast<std::size_t>(axis)];
        diff[diff_index(c)] += diff[diff_index(prev)];
      }
      int a = u.dim - 1;
      while (a >= 0) {
        const std::size_t sa = static_cast<std::size_t>(a);
        if (++c[sa] < ext1[sa]) {
          break;
        }
        c[sa] = 0;
        --a;
      }
      if (a < 0) {
        break;
      }
    }
  }
  CellBox all{std::vector<long>(static_cast<std::size_t>(u.dim), 0), u.extent};
  for_each_cell(all, [&](const std::vector<long>& c) {
    if (diff[diff_index(c)] > 0) {
      out.mask[static_cast<std::size_t>(u.flat_index(c))] = 1;
    }
  });
  return out;
}

IndicatorSet iterate_set_maximal(const IndicatorSet& e, const Rational& eta,
                                 const CubeFamily& family, unsigned iterations) {
  if (iterations == 0) {
    throw std::domain_error("iterate_set_maximal: iteration count must be positive");
  }
  IndicatorSet current = e;
  for (unsigned i = 0; i < iterations; ++i) {
    current = set_maximal(current, eta, family);
  }
  return current;
}

ExpansionResult expansion_check(const IndicatorSet& e, const GridCube& q, const Rational& eta) {
  if (eta <= 0 || eta >= 1) {
    throw std::domain_error("expansion_check: eta must lie in (0,1)");
  }
  if (!cube_inside(e.universe, q)) {
    throw std::domain_error("expansion_check: cube outside universe");
  }
  const Universe& u = e.universe;
  const CubeView qview = view_of(u, q);
  // E ⊆ Q and |E| <= eta |Q| are the lemma's hypotheses.
  const PrefixCounts counts(e);
  const long e_cells = e.count_cells();
  if (counts.box_count(qview.box) != e_cells) {
    throw std::invalid_argument("expansion_check: E is not a subset of Q");
  }
  const Rational e_measure = e.measure();
  if (e_measure > eta * qview.total_measure) {
    throw std::invalid_argument("expansion_check: |E| > eta |Q|, lemma does not apply");
  }
  const IndicatorSet grown = set_maximal(e, eta, CubeFamily::all_grid_aligned(u));
  const PrefixCounts grown_counts(grown);
  ExpansionResult result;
  result.lhs = Rational(grown_counts.box_count(qview.box)) * u.cell_measure();
  result.rhs = (1 + (Rational(1) / eta - 1) / rational_pow(Rational(2), u.dim)) * e_measure;
  result.pass = result.lhs >= result.rhs;
  return result;
}

StoppingDecomposition stopping_cubes(const StepFunction& f, const DyadicGridSpec& spec,
                                     const Rational& tau, const Rational& lambda) {
  if (lambda < 0) {
    throw std::domain_error("stopping_cubes: level must be non-negative");
  }
  const DyadicTree tree = [&] {
    // Reuse the maximal-operator tree; statistics are the tau-medians.
    return build_dyadic_tree(f, spec, MaximalKind::tau(tau));
  }();
  StoppingDecomposition out;
  out.level = lambda;
  out.grid = spec;
  // A node is a stopping cube when its statistic exceeds lambda and no
  // ancestor's does; scan coarse to fine carrying the "already stopped" flag.
  std::vector<std::map<std::vector<long long>, bool>> stopped(tree.scales.size());
  for (std::size_t level = 0; level < tree.scales.size(); ++level) {
    for (const auto& [m, node] : tree.scales[level]) {
      bool ancestor_stopped = false;
      if (level > 0) {
        const DyadicCube parent_cube = dyadic_parent(spec, node.cube);
        const auto it = stopped[level - 1].find(parent_cube.m);
        ancestor_stopped = it != stopped[level - 1].end() && it->second;
      }
      const bool here = !ancestor_stopped && node.statistic > lambda;
      if (here) {
        out.cubes.push_back(node.cube);
        out.boxes.push_back(node.box);
      }
      stopped[level].emplace(m, ancestor_stopped || here);
    }
  }
  return out;
}

Rational truncation_radius(const StepFunction& f, const MaximalKind& kind) {
  return Rational(truncation_side_cells(f, kind)) * f.universe.cell;
}

long truncation_side_cells(const StepFunction& f, const MaximalKind& kind) {
  Rational support(0);
  const Rational cell = f.universe.cell_measure();
  for (const auto& v : f.values) {
    if (v != 0) {
      support += cell;
    }
  }
  if (support == 0) {
    return 1;
  }
  Rational cap;  // cubes with measure above this have zero statistic
  switch (kind.type) {
    case MaximalKind::Type::tau:
      cap = support / kind.tau_value;
      break;
    case MaximalKind::Type::median:
      cap = 2 * support;
      break;
    case MaximalKind::Type::hl_average:
      throw std::domain_error("truncation_radius: no truncation rule for averages");
  }
  long side = 1;
  while (rational_pow(Rational(side + 1) * f.universe.cell, f.universe.dim) <= cap) {
    ++side;
  }
  return side;
}

StepFunction median_mollify(const StepFunction& f, const Rational& r) {
  const Universe& u = f.universe;
  if (2 * r < u.cell) {
    throw std::domain_error("median_mollify: radius below half a cell");
  }
  StepFunction out = StepFunction::zero(u);
  CellBox all{std::vector<long>(static_cast<std::size_t>(u.dim), 0), u.extent};
  const Rational r_cells = r / u.cell;
  for_each_cell(all, [&](const std::vector<long>& c) {
    CellBox box;
    box.lo.resize(c.size());
    box.hi.resize(c.size());
    for (std::size_t a = 0; a < c.size(); ++a) {
      const Rational center = Rational(c[a]) + Rational(1, 2);
      box.lo[a] = std::max(0L, floor_rational(center - r_cells).convert_to<long>());
      box.hi[a] = std::min(u.extent[a], ceil_rational(center + r_cells).convert_to<long>());
    }
    CubeView view{box, Rational(box.volume_cells()) * u.cell_measure()};
    out.at(c) = median_max_abs(summarize(f, view));
  });
  return out;
}

StepFunction cellwise_max(const StepFunction& a, const StepFunction& b) {
  if (!a.universe.same_as(b.universe)) {
    throw std::domain_error("cellwise_max: universe mismatch");
  }
  StepFunction out = a;
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    if (b.values[i] > out.values[i]) {
      out.values[i] = b.values[i];
    }
  }
  return out;
}

}  // namespace medimax
