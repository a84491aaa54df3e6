#include "medimax/stepfn.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace medimax {

StepFunction StepFunction::constant(Universe u, const Rational& c) {
  u.validate();
  const std::size_t n = static_cast<std::size_t>(u.total_cells());
  return StepFunction{std::move(u), std::vector<Rational>(n, c)};
}

StepFunction StepFunction::zero(Universe u) { return constant(std::move(u), Rational(0)); }

const Rational& StepFunction::at(const std::vector<long>& cell_index) const {
  return values[static_cast<std::size_t>(universe.flat_index(cell_index))];
}

Rational& StepFunction::at(const std::vector<long>& cell_index) {
  return values[static_cast<std::size_t>(universe.flat_index(cell_index))];
}

void StepFunction::validate() const {
  universe.validate();
  if (values.size() != static_cast<std::size_t>(universe.total_cells())) {
    throw std::invalid_argument("step function: values shape mismatch");
  }
}

void Weight::validate() const {
  base.validate();
  for (const auto& v : base.values) {
    if (v < 0) {
      throw std::invalid_argument("weight: negative cell value");
    }
  }
}

IndicatorSet IndicatorSet::empty(Universe u) {
  u.validate();
  const std::size_t n = static_cast<std::size_t>(u.total_cells());
  return IndicatorSet{std::move(u), std::vector<char>(n, 0)};
}

long IndicatorSet::count_cells() const {
  return static_cast<long>(std::count(mask.begin(), mask.end(), char(1)));
}

Rational IndicatorSet::measure() const { return Rational(count_cells()) * universe.cell_measure(); }

void for_each_cell(const CellBox& box, const std::function<void(const std::vector<long>&)>& fn) {
  if (box.empty()) {
    return;
  }
  std::vector<long> c = box.lo;
  while (true) {
    fn(c);
    int a = static_cast<int>(c.size()) - 1;
    while (a >= 0) {
      const std::size_t sa = static_cast<std::size_t>(a);
      if (++c[sa] < box.hi[sa]) {
        break;
      }
      c[sa] = box.lo[sa];
      --a;
    }
    if (a < 0) {
      break;
    }
  }
}

namespace {

bool above(const Rational& v, const Rational& lambda, bool strict) {
  return strict ? v > lambda : v >= lambda;
}

}  // namespace

Rational measure_above(const StepFunction& f, const CubeView& view, const Rational& lambda,
                       bool strict, bool absolute) {
  const Rational cell = f.universe.cell_measure();
  Rational total(0);
  Rational inside(0);
  for_each_cell(view.box, [&](const std::vector<long>& c) {
    inside += cell;
    const Rational& v = f.at(c);
    if (above(absolute ? Rational(abs(v)) : v, lambda, strict)) {
      total += cell;
    }
  });
  const Rational outside = view.total_measure - inside;
  if (outside > 0 && above(Rational(0), lambda, strict)) {
    total += outside;
  }
  return total;
}

Rational measure_above(const StepFunction& f, const GridCube& q, const Rational& lambda,
                       bool strict, bool absolute) {
  if (!cube_inside(f.universe, q)) {
    throw std::domain_error("measure_above: cube outside universe");
  }
  return measure_above(f, view_of(f.universe, q), lambda, strict, absolute);
}

Rational weighted_measure(const Weight& w, const IndicatorSet& e) {
  if (!w.base.universe.same_as(e.universe)) {
    throw std::domain_error("weighted_measure: universe mismatch");
  }
  const Rational cell = w.base.universe.cell_measure();
  Rational total(0);
  for (std::size_t i = 0; i < e.mask.size(); ++i) {
    if (e.mask[i]) {
      total += w.base.values[i] * cell;
    }
  }
  return total;
}

Rational weighted_measure(const Weight& w, const CellBox& box) {
  const Rational cell = w.base.universe.cell_measure();
  Rational total(0);
  for_each_cell(box, [&](const std::vector<long>& c) { total += w.base.at(c) * cell; });
  return total;
}

Rational l1_norm(const StepFunction& f, const Weight& w) {
  if (!f.universe.same_as(w.base.universe)) {
    throw std::domain_error("l1_norm: universe mismatch");
  }
  const Rational cell = f.universe.cell_measure();
  Rational total(0);
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    total += abs(f.values[i]) * w.base.values[i] * cell;
  }
  return total;
}

Rational l1_distribution_form(const StepFunction& f, const Weight& w) {
  if (!f.universe.same_as(w.base.universe)) {
    throw std::domain_error("l1_distribution_form: universe mismatch");
  }
  // Sum over the distinct positive values v_1 < ... < v_k of |f| of
  // (v_i - v_{i-1}) * w({|f| >= v_i}); equals int_0^inf w({|f| > t}) dt.
  const Rational cell = f.universe.cell_measure();
  std::map<Rational, Rational> tail;  // |f| value -> w-mass of cells at that value
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    const Rational v = abs(f.values[i]);
    if (v > 0) {
      tail[v] += w.base.values[i] * cell;
    }
  }
  std::vector<std::pair<Rational, Rational>> levels(tail.begin(), tail.end());
  std::vector<Rational> suffix(levels.size());  // w({|f| >= v_i})
  Rational acc(0);
  for (std::size_t i = levels.size(); i-- > 0;) {
    acc += levels[i].second;
    suffix[i] = acc;
  }
  Rational total(0);
  Rational prev(0);
  for (std::size_t i = 0; i < levels.size(); ++i) {
    total += (levels[i].first - prev) * suffix[i];
    prev = levels[i].first;
  }
  return total;
}

Rational lp_mass(const StepFunction& f, const Weight& w, unsigned p) {
  if (!f.universe.same_as(w.base.universe)) {
    throw std::domain_error("lp_mass: universe mismatch");
  }
  if (p == 0) {
    throw std::domain_error("lp_mass: p must be positive");
  }
  const Rational cell = f.universe.cell_measure();
  Rational total(0);
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    total += rational_pow(Rational(abs(f.values[i])), static_cast<long>(p)) *
             w.base.values[i] * cell;
  }
  return total;
}

double lp_norm(const StepFunction& f, const Weight& w, double p) {
  if (!f.universe.same_as(w.base.universe)) {
    throw std::domain_error("lp_norm: universe mismatch");
  }
  if (p <= 0) {
    throw std::domain_error("lp_norm: p must be positive");
  }
  const double cell = to_double(f.universe.cell_measure());
  double total = 0;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    total += std::pow(std::abs(to_double(f.values[i])), p) * to_double(w.base.values[i]) * cell;
  }
  return std::pow(total, 1.0 / p);
}

}  // namespace medimax
