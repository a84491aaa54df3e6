#pragma once

#include <utility>
#include <vector>

#include "medimax/stepfn.hpp"

namespace medimax {

/// Distribution of a step function restricted to a cube: distinct values in
/// ascending order with the measure each carries. `total` is the full cube
/// measure; any part of the cube outside the universe appears as value 0.
struct ValueSummary {
  std::vector<std::pair<Rational, Rational>> items;  // (value, measure), ascending
  Rational total;
};

ValueSummary summarize(const StepFunction& f, const CubeView& view);

/// Merges disjoint pieces; totals add.
ValueSummary merge_summaries(const ValueSummary& a, const ValueSummary& b);

/// Pads the summary with a zero-valued chunk so its total reaches
/// `new_total` (used for cube parts not covered by any child).
void pad_with_zero(ValueSummary& s, const Rational& new_total);

/// The compact interval [a, b] of medians of f on the cube.
struct MedianInterval {
  Rational lo;
  Rational hi;
};

MedianInterval median_interval(const ValueSummary& s);
MedianInterval median_interval(const StepFunction& f, const GridCube& q);

/// The median with the largest absolute value; ties between -c and c go to
/// the upper endpoint (every consumer takes the absolute value).
Rational median_max_abs(const ValueSummary& s);
Rational median_max_abs(const StepFunction& f, const GridCube& q);

/// Largest v >= 0 with |Q ∩ {|f| >= v}| >= tau |Q|; the sup is attained over
/// {0} ∪ {|values|} because the restriction takes finitely many values.
Rational tau_median(const ValueSummary& s, const Rational& tau);
Rational tau_median(const StepFunction& f, const GridCube& q, const Rational& tau);

/// Average of |f| over the cube (the Hardy-Littlewood statistic).
Rational abs_average(const ValueSummary& s);

}  // namespace medimax
