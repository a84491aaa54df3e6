#pragma once

#include <cstdint>
#include <random>

#include "medimax/io.hpp"

namespace medimax {

/// Machine-readable outcome of one claim's suite. A failing report carries a
/// witness payload that replays the failure deterministically.
struct VerificationReport {
  std::string claim;
  bool pass = true;
  long instances = 0;
  std::string worst_ratio;
  Json witness = nullptr;
  double runtime_seconds = 0.0;
  std::uint64_t seed = 0;
  std::vector<std::string> notes;
};

Json report_to_json(const VerificationReport& r);

using Rng = std::mt19937_64;

/// Random instance generators used by every suite: values k/q with
/// k in [-q, q], q in {8, 64}; weights 2^j with j in [-3, 3].
StepFunction random_stepfn(const Universe& u, Rng& rng);
Weight random_weight(const Universe& u, Rng& rng);

/// chi_{[from,to)} decided per cell midpoint; exact on aligned endpoints.
StepFunction indicator_interval(const Universe& u, const std::vector<Rational>& from,
                                const std::vector<Rational>& to);
IndicatorSet indicator_set_interval(const Universe& u, const std::vector<Rational>& from,
                                    const std::vector<Rational>& to);

/// w_t = t chi_{[-1,1]} + chi elsewhere, generalized to any box.
Weight wt_weight(const Universe& u, const Rational& t, const std::vector<Rational>& from,
                 const std::vector<Rational>& to);

// --- suites, one per paper claim ---

/// |m_f(Q)| <= m^{1/2}_f(Q) per cube and cellwise, with equality for f >= 0.
VerificationReport check_comparison(long count, std::uint64_t seed);

/// ||M^tau_D f||_{L1(w)} <= 4 tau^{-1} [w]_{A1} ||f||_{L1(w)} on random
/// (f, w) pairs in dimensions 1 and 2.
VerificationReport check_a1_bound(long count_per_dim, const Rational& tau, std::uint64_t seed);

/// w({M^tau_D f > lambda}) <= tau^{-1} [w]_{A1} w({|f| > lambda}) for every
/// lambda among the distinct output values.
VerificationReport check_weak_type(long count_per_dim, const Rational& tau, std::uint64_t seed);

/// Exact sharpness identity: M^{1/2} chi_{[-1,1]} = chi_{[-3,3]} and the
/// norm ratio (4+2t)/(2t) on the w_t family.
VerificationReport check_sharpness(const std::vector<Rational>& ts);

/// Norm ratio on the sharpness family equals (2/t+1)^{1/p} within 1e-9.
VerificationReport check_lp_lower(const std::vector<Rational>& ts, const std::vector<unsigned>& ps);

/// Expansion inequality |M^eta(E) ∩ Q| >= (1+(eta^{-1}-1)/2^n)|E|,
/// exhaustive in 1D (samples = 0) or sampled. The set operator ranges over
/// all grid-aligned cubes of a 3x refined lattice, standing in for the
/// continuum family of cubes.
VerificationReport check_expansion(int dim, long cells_per_axis, const std::vector<Rational>& etas,
                                   long samples, std::uint64_t seed);

/// Mollification error is non-increasing along the radii and zero at h/2.
VerificationReport check_mollification();

/// Every interval in the window has a shifted-dyadic cover with ratio <= 6,
/// and domination_bound >= brute tau-maximal cellwise on random inputs.
VerificationReport check_covering_and_domination(long count, const Rational& tau,
                                                 std::uint64_t seed);

/// Dyadic fast path equals the brute-force oracle on the same family for
/// all three statistic kinds.
VerificationReport check_dyadic_oracle(long count, std::uint64_t seed);

/// Stopping cubes: disjointness, level-set identity, and the tau-density
/// property, exact on every instance.
VerificationReport check_stopping(long count, const Rational& tau, std::uint64_t seed);

/// Enlarging the universe margin beyond truncation_radius changes no cell.
VerificationReport check_truncation(long count, std::uint64_t seed);

}  // namespace medimax
