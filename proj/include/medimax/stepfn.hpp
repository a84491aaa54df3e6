#pragma once

#include <functional>
#include <vector>

#include "medimax/grid.hpp"

namespace medimax {

/// Real-valued function constant on each cell of a universe, with exact
/// rational values. The a.e. representative: set measures are decided per
/// whole cell, so everything below is an exact rational.
struct StepFunction {
  Universe universe;
  std::vector<Rational> values;  // row-major, one per cell

  static StepFunction constant(Universe u, const Rational& c);
  static StepFunction zero(Universe u);

  const Rational& at(const std::vector<long>& cell_index) const;
  Rational& at(const std::vector<long>& cell_index);

  void validate() const;
};

/// Non-negative step function, with its weighted measure w(Q) = int_Q w.
struct Weight {
  StepFunction base;

  void validate() const;
};

struct IndicatorSet {
  Universe universe;
  std::vector<char> mask;  // row-major, one per cell

  static IndicatorSet empty(Universe u);
  long count_cells() const;
  Rational measure() const;
};

/// Visits every cell index of the box in row-major order.
void for_each_cell(const CellBox& box, const std::function<void(const std::vector<long>&)>& fn);

/// |Q ∩ {g ⋈ lambda}| where g = f or |f| per `absolute` and ⋈ is > or >=
/// per `strict`. Cube measure outside the universe counts as value 0.
Rational measure_above(const StepFunction& f, const CubeView& view, const Rational& lambda,
                       bool strict, bool absolute);
Rational measure_above(const StepFunction& f, const GridCube& q, const Rational& lambda,
                       bool strict, bool absolute);

Rational weighted_measure(const Weight& w, const IndicatorSet& e);
Rational weighted_measure(const Weight& w, const CellBox& box);

/// Exact L^1(w) norm: sum over cells of |f| w h^n.
Rational l1_norm(const StepFunction& f, const Weight& w);

/// Layer-cake form of the L^1(w) norm, summed over the distinct values of
/// |f|; must agree with l1_norm exactly.
Rational l1_distribution_form(const StepFunction& f, const Weight& w);

/// Exact sum of |f|^p w h^n for integer p >= 1 (the p-th power of the norm).
Rational lp_mass(const StepFunction& f, const Weight& w, unsigned p);

/// Floating L^p(w) norm for arbitrary p > 0 (exact path is l1_norm).
double lp_norm(const StepFunction& f, const Weight& w, double p);

}  // namespace medimax
