#pragma once

#include "medimax/maximal.hpp"

namespace medimax {

/// A Muckenhoupt characteristic over a declared cube family. Exact paths
/// carry the rational; floating paths carry only the double. `approx` is
/// always populated for finite values.
struct Characteristic {
  bool infinite = false;
  bool exact = true;
  Rational value;
  double approx = 0.0;
  std::optional<GridCube> witness;
  int skipped_cubes = 0;
};

/// [w]_{A_1} = sup_Q avg(w,Q) * ||w^{-1}||_{L^inf(Q)}, exact. Infinite when
/// w vanishes on a cell of some family cube with w(Q) > 0.
Characteristic a1_characteristic(const Weight& w, const CubeFamily& family);

/// [w]_{A_p} = sup_Q avg(w,Q) * avg(sigma,Q)^{p-1}, sigma = w^{-1/(p-1)}.
/// Exact for p = 2, floating otherwise.
Characteristic ap_characteristic(const Weight& w, const Rational& p, const CubeFamily& family);

/// [w]_{A_inf} = sup_Q avg(w,Q) * exp(avg of log w^{-1} on Q); floating.
Characteristic ainf_exp_characteristic(const Weight& w, const CubeFamily& family);

/// [w]'_{A_inf} = sup_Q (1/w(Q)) * int_Q M(w chi_Q), with the
/// Hardy-Littlewood M taken over inner_family; exact.
Characteristic ainf_fujii_characteristic(const Weight& w, const CubeFamily& family,
                                         const CubeFamily& inner_family);

/// sigma = w^{-1/(p-1)} cellwise; exact when 1/(p-1) is an integer.
Weight dual_weight(const Weight& w, const Rational& p);

/// beta* = min over family cubes Q of min{w(E)/w(Q) : E ⊆ Q, |E| >= alpha|Q|};
/// the inner minimum takes the lightest whole cells (cells are congruent,
/// so the greedy choice is exact).
Rational alpha_beta_profile(const Weight& w, const CubeFamily& family, const Rational& alpha);

/// sup of w(5Q ∩ universe)/w(Q) over family cubes with w(Q) > 0.
Rational doubling_ratio(const Weight& w, const CubeFamily& family);

}  // namespace medimax
