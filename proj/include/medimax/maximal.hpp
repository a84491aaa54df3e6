#pragma once

#include "medimax/median.hpp"

namespace medimax {

/// Which statistic a maximal operator takes on each cube: |m_f(Q)|, the
/// tau-median m^tau_f(Q), or the average of |f| (Hardy-Littlewood).
struct MaximalKind {
  enum class Type { median, tau, hl_average };

  Type type = Type::median;
  Rational tau_value;

  static MaximalKind median() { return MaximalKind{Type::median, Rational(0)}; }
  static MaximalKind tau(const Rational& t) { return MaximalKind{Type::tau, t}; }
  static MaximalKind hl_average() { return MaximalKind{Type::hl_average, Rational(0)}; }
};

Rational cube_statistic(const ValueSummary& s, const MaximalKind& kind);

struct MaximalResult {
  StepFunction fn;
  bool empty_family = false;
};

/// Cellwise sup of the cube statistic over all family cubes containing the
/// cell. Direct double loop; the oracle the fast dyadic path is tested
/// against.
MaximalResult brute_maximal(const StepFunction& f, const CubeFamily& family,
                            const MaximalKind& kind);

/// Same output as brute_maximal over the dyadic family, via one bottom-up
/// pass merging children's value-measure summaries and one top-down pass
/// propagating the running max. Requires the finest scale to align with the
/// cell lattice.
StepFunction dyadic_maximal(const StepFunction& f, const DyadicGridSpec& spec,
                            const MaximalKind& kind);

/// Cellwise max over the 2^n shifted grids of the dyadic tau-maximal with
/// parameter 6^{-n} tau; dominates the tau-maximal over all grid cubes.
StepFunction domination_bound(const StepFunction& f, const Rational& tau);

/// Cells covered by some family cube with |E ∩ Q| >= eta |Q|.
IndicatorSet set_maximal(const IndicatorSet& e, const Rational& eta, const CubeFamily& family);

IndicatorSet iterate_set_maximal(const IndicatorSet& e, const Rational& eta,
                                 const CubeFamily& family, unsigned iterations);

struct ExpansionResult {
  Rational lhs;  // |M^eta(E) ∩ Q|
  Rational rhs;  // (1 + (eta^{-1} - 1)/2^n) |E|
  bool pass = false;
};

/// Checks the expansion inequality for E ⊆ Q with |E| <= eta |Q|, with the
/// set operator ranging over all grid-aligned cubes of E's universe.
ExpansionResult expansion_check(const IndicatorSet& e, const GridCube& q, const Rational& eta);

/// Maximal dyadic cubes with m^tau_f(Q) > lambda; disjoint, their union is
/// the super-level set of the dyadic tau-maximal, and each satisfies
/// |Q ∩ {|f| > lambda}| >= tau |Q|.
struct StoppingDecomposition {
  Rational level;
  DyadicGridSpec grid;
  std::vector<DyadicCube> cubes;
  std::vector<CellBox> boxes;  // cube ∩ universe, per cube
};

StoppingDecomposition stopping_cubes(const StepFunction& f, const DyadicGridSpec& spec,
                                     const Rational& tau, const Rational& lambda);

/// Largest useful cube side for a compactly supported f: cubes with measure
/// above S/tau (tau kind) or 2S (median kind), S = |{f != 0}|, carry a zero
/// statistic, so the truncated family reproduces the sup over all of R^n.
Rational truncation_radius(const StepFunction& f, const MaximalKind& kind);
long truncation_side_cells(const StepFunction& f, const MaximalKind& kind);

/// Cellwise m_f on the cube of side 2r around each cell center, snapped
/// outward to whole cells and clipped to the universe.
StepFunction median_mollify(const StepFunction& f, const Rational& r);

/// Cellwise maximum of two step functions on the same universe.
StepFunction cellwise_max(const StepFunction& a, const StepFunction& b);

}  // namespace medimax
