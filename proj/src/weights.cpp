#include "medimax/weights.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace medimax {

namespace {

bool has_zero_cell(const Weight& w) {
  return std::any_of(w.base.values.begin(), w.base.values.end(),
                     [](const Rational& v) { return v == 0; });
}

std::optional<GridCube> as_grid_cube(const CubeView& view, const Universe& u) {
  long side = view.box.hi[0] - view.box.lo[0];
  for (std::size_t a = 0; a < view.box.lo.size(); ++a) {
    if (view.box.hi[a] - view.box.lo[a] != side) {
      return std::nullopt;
    }
  }
  if (view.total_measure != rational_pow(Rational(side) * u.cell, u.dim)) {
    return std::nullopt;
  }
  return GridCube{view.box.lo, side};
}

// Visits every grid-aligned cube, growing the side at a fixed corner so a
// characteristic can update its accumulators from the newly added shell of
// cells. `on_corner` resets state, `on_shell` feeds one new cell, `on_cube`
// closes a cube of the given side.
void scan_grid_cubes(const Universe& u, long max_side,
                     const std::function<void(const std::vector<long>&)>& on_corner,
                     const std::function<void(const std::vector<long>&)>& on_shell,
                     const std::function<void(const std::vector<long>&, long)>& on_cube) {
  long cap = *std::min_element(u.extent.begin(), u.extent.end());
  if (max_side > 0) {
    cap = std::min(cap, max_side);
  }
  CellBox corners{std::vector<long>(static_cast<std::size_t>(u.dim), 0), u.extent};
  for_each_cell(corners, [&](const std::vector<long>& corner) {
    long fit = cap;
    for (int a = 0; a < u.dim; ++a) {
      fit = std::min(fit, u.extent[static_cast<std::size_t>(a)] -
                              corner[static_cast<std::size_t>(a)]);
    }
    if (fit < 1) {
      return;
    }
    on_corner(corner);
    for (long side = 1; side <= fit; ++side) {
      // Shell = box(corner, side) minus box(corner, side-1), tiled per axis.
      const long s = side - 1;
      for (int axis = 0; axis < u.dim; ++axis) {
        CellBox shell;
        shell.lo.resize(static_cast<std::size_t>(u.dim));
        shell.hi.resize(static_cast<std::size_t>(u.dim));
        for (int a = 0; a < u.dim; ++a) {
          const std::size_t sa = static_cast<std::size_t>(a);
          if (a < axis) {
            shell.lo[sa] = corner[sa];
            shell.hi[sa] = corner[sa] + side;
          } else if (a == axis) {
            shell.lo[sa] = corner[sa] + s;
            shell.hi[sa] = corner[sa] + side;
          } else {
            shell.lo[sa] = corner[sa];
            shell.hi[sa] = corner[sa] + s;
          }
        }
        for_each_cell(shell, on_shell);
      }
      on_cube(corner, side);
    }
  });
}

}  // namespace

Characteristic a1_characteristic(const Weight& w, const CubeFamily& family) {
  const Universe& u = w.base.universe;
  if (!u.same_as(family.universe)) {
    throw std::domain_error("a1_characteristic: family over a different universe");
  }
  Characteristic best;
  best.exact = true;
  best.value = 0;
  bool seen = false;
  auto consider = [&](const Rational& w_sum, const std::optional<Rational>& min_w,
                      const Rational& total_measure, GridCube cube) {
    if (w_sum == 0) {
      return;  // w(Q) = 0: the cube carries no information
    }
    if (!min_w || *min_w == 0) {
      if (!best.infinite) {
        best.infinite = true;
        best.witness = std::move(cube);
      }
      return;
    }
    const Rational value = w_sum / (total_measure * *min_w);
    if (!best.infinite && (!seen || value > best.value)) {
      seen = true;
      best.value = value;
      best.witness = std::move(cube);
    }
  };

  if (family.kind == CubeFamily::Kind::all_grid_aligned) {
    const Rational cell = u.cell_measure();
    Rational sum;
    std::optional<Rational> min_w;
    scan_grid_cubes(
        u, family.max_side,
        [&](const std::vector<long>&) {
          sum = 0;
          min_w.reset();
        },
        [&](const std::vector<long>& c) {
          const Rational& v = w.base.at(c);
          sum += v * cell;
          if (!min_w || v < *min_w) {
            min_w = v;
          }
        },
        [&](const std::vector<long>& corner, long side) {
          consider(sum, min_w, rational_pow(Rational(side) * u.cell, u.dim),
                   GridCube{corner, side});
        });
  } else {
    for (const auto& fc : enumerate_cubes(family)) {
      const Rational cell = u.cell_measure();
      Rational sum(0);
      Rational inside(0);
      std::optional<Rational> min_w;
      for_each_cell(fc.view.box, [&](const std::vector<long>& c) {
        const Rational& v = w.base.at(c);
        sum += v * cell;
        inside += cell;
        if (!min_w || v < *min_w) {
          min_w = v;
        }
      });
      if (fc.view.total_measure > inside) {
        min_w = Rational(0);  // the cube pokes outside where w is zero
      }
      auto cube = as_grid_cube(fc.view, u);
      consider(sum, min_w, fc.view.total_measure,
               cube ? *cube : GridCube{fc.view.box.lo, fc.view.box.hi[0] - fc.view.box.lo[0]});
    }
  }
  if (!best.infinite) {
    best.approx = to_double(best.value);
  }
  return best;
}

Weight dual_weight(const Weight& w, const Rational& p) {
  if (p <= 1) {
    throw std::domain_error("dual_weight: p must exceed 1");
  }
  if (has_zero_cell(w)) {
    throw std::domain_error("dual_weight: weight vanishes on a cell");
  }
  const Rational exponent = Rational(-1) / (p - 1);
  Weight sigma{StepFunction{w.base.universe, w.base.values}};
  if (denominator(exponent) == 1) {
    const long e = numerator(exponent).convert_to<long>();
    for (auto& v : sigma.base.values) {
      v = rational_pow(v, e);
    }
  } else {
    const double e = to_double(exponent);
    for (auto& v : sigma.base.values) {
      v = rational_from_double(std::pow(to_double(v), e));
    }
  }
  return sigma;
}

Characteristic ap_characteristic(const Weight& w, const Rational& p, const CubeFamily& family) {
  if (p <= 1) {
    throw std::domain_error("ap_characteristic: p must exceed 1");
  }
  const Universe& u = w.base.universe;
  if (!u.same_as(family.universe)) {
    throw std::domain_error("ap_characteristic: family over a different universe");
  }
  Characteristic best;
  if (has_zero_cell(w)) {
    best.infinite = true;
    return best;
  }
  const Weight sigma = dual_weight(w, p);
  const bool exact = (p == 2);
  best.exact = exact;
  best.value = 0;
  best.approx = 0;
  bool seen = false;
  const double pd = to_double(p);
  auto consider = [&](const Rational& w_sum, const Rational& sigma_sum,
                      const Rational& total_measure, GridCube cube) {
    if (exact) {
      const Rational value = (w_sum / total_measure) * (sigma_sum / total_measure);
      if (!seen || value > best.value) {
        seen = true;
        best.value = value;
        best.approx = to_double(value);
        best.witness = std::move(cube);
      }
    } else {
      const double value = to_double(w_sum / total_measure) *
                           std::pow(to_double(sigma_sum / total_measure), pd - 1.0);
      if (!seen || value > best.approx) {
        seen = true;
        best.approx = value;
        best.witness = std::move(cube);
      }
    }
  };

  if (family.kind == CubeFamily::Kind::all_grid_aligned) {
    const Rational cell = u.cell_measure();
    Rational w_sum;
    Rational sigma_sum;
    scan_grid_cubes(
        u, family.max_side,
        [&](const std::vector<long>&) {
          w_sum = 0;
          sigma_sum = 0;
        },
        [&](const std::vector<long>& c) {
          w_sum += w.base.at(c) * cell;
          sigma_sum += sigma.base.at(c) * cell;
        },
        [&](const std::vector<long>& corner, long side) {
          consider(w_sum, sigma_sum, rational_pow(Rational(side) * u.cell, u.dim),
                   GridCube{corner, side});
        });
  } else {
    const Rational cell = u.cell_measure();
    for (const auto& fc : enumerate_cubes(family)) {
      auto cube = as_grid_cube(fc.view, u);
      if (!cube) {
        ++best.skipped_cubes;  // partial cube: w undefined outside
        continue;
      }
      Rational w_sum(0);
      Rational sigma_sum(0);
      for_each_cell(fc.view.box, [&](const std::vector<long>& c) {
        w_sum += w.base.at(c) * cell;
        sigma_sum += sigma.base.at(c) * cell;
      });
      consider(w_sum, sigma_sum, fc.view.total_measure, *cube);
    }
  }
  return best;
}

Characteristic ainf_exp_characteristic(const Weight& w, const CubeFamily& family) {
  const Universe& u = w.base.universe;
  if (!u.same_as(family.universe)) {
    throw std::domain_error("ainf_exp_characteristic: family over a different universe");
  }
  Characteristic best;
  best.exact = false;
  if (has_zero_cell(w)) {
    best.infinite = true;
    return best;
  }
  bool seen = false;
  auto consider = [&](double w_avg, double log_avg, GridCube cube) {
    const double value = w_avg * std::exp(-log_avg);
    if (!seen || value > best.approx) {
      seen = true;
      best.approx = value;
      best.witness = std::move(cube);
    }
  };
  const double cell = to_double(u.cell_measure());
  if (family.kind == CubeFamily::Kind::all_grid_aligned) {
    double w_sum = 0;
    double log_sum = 0;
    long cells = 0;
    scan_grid_cubes(
        u, family.max_side,
        [&](const std::vector<long>&) {
          w_sum = 0;
          log_sum = 0;
          cells = 0;
        },
        [&](const std::vector<long>& c) {
          const double v = to_double(w.base.at(c));
          w_sum += v;
          log_sum += std::log(v);
          ++cells;
        },
        [&](const std::vector<long>& corner, long side) {
          consider(w_sum / static_cast<double>(cells), log_sum / static_cast<double>(cells),
                   GridCube{corner, side});
        });
    (void)cell;
  } else {
    for (const auto& fc : enumerate_cubes(family)) {
      auto cube = as_grid_cube(fc.view, u);
      if (!cube) {
        ++best.skipped_cubes;
        continue;
      }
      double w_sum = 0;
      double log_sum = 0;
      long cells = 0;
      for_each_cell(fc.view.box, [&](const std::vector<long>& c) {
        const double v = to_double(w.base.at(c));
        w_sum += v;
        log_sum += std::log(v);
        ++cells;
      });
      consider(w_sum / static_cast<double>(cells), log_sum / static_cast<double>(cells), *cube);
    }
  }
  return best;
}

Characteristic ainf_fujii_characteristic(const Weight& w, const CubeFamily& family,
                                         const CubeFamily& inner_family) {
  const Universe& u = w.base.universe;
  if (!u.same_as(family.universe) || !u.same_as(inner_family.universe)) {
    throw std::domain_error("ainf_fujii_characteristic: universe mismatch");
  }
  const Rational cell = u.cell_measure();
  Characteristic best;
  best.exact = true;
  best.value = 0;
  bool seen = false;
  for (const auto& fc : enumerate_cubes(family)) {
    Rational w_q(0);
    StepFunction masked = StepFunction::zero(u);
    for_each_cell(fc.view.box, [&](const std::vector<long>& c) {
      masked.at(c) = w.base.at(c);
      w_q += w.base.at(c) * cell;
    });
    if (w_q == 0) {
      ++best.skipped_cubes;
      continue;
    }
    const StepFunction m_fn = brute_maximal(masked, inner_family, MaximalKind::hl_average()).fn;
    Rational integral(0);
    for_each_cell(fc.view.box, [&](const std::vector<long>& c) { integral += m_fn.at(c) * cell; });
    const Rational value = integral / w_q;
    auto cube = as_grid_cube(fc.view, u);
    if (!seen || value > best.value) {
      seen = true;
      best.value = value;
      best.witness = cube ? *cube
                          : GridCube{fc.view.box.lo, fc.view.box.hi[0] - fc.view.box.lo[0]};
    }
  }
  best.approx = to_double(best.value);
  return best;
}

Rational alpha_beta_profile(const Weight& w, const CubeFamily& family, const Rational& alpha) {
  if (alpha <= 0 || alpha >= 1) {
    throw std::domain_error("alpha_beta_profile: alpha must lie in (0,1)");
  }
  const Universe& u = w.base.universe;
  if (!u.same_as(family.universe)) {
    throw std::domain_error("alpha_beta_profile: family over a different universe");
  }
  std::optional<Rational> best;
  for (const auto& fc : enumerate_cubes(family)) {
    if (!as_grid_cube(fc.view, u)) {
      continue;  // partial cube: subsets of it are not subsets of a cube of w's domain
    }
    std::vector<Rational> values;
    for_each_cell(fc.view.box, [&](const std::vector<long>& c) { values.push_back(w.base.at(c)); });
    Rational w_q(0);
    for (const auto& v : values) {
      w_q += v;
    }
    if (w_q == 0) {
      continue;
    }
    const long vol = static_cast<long>(values.size());
    // smallest cell count whose measure reaches alpha |Q|
    const long k = ceil_rational(alpha * vol).convert_to<long>();
    std::sort(values.begin(), values.end());
    Rational light(0);
    for (long i = 0; i < k; ++i) {
      light += values[static_cast<std::size_t>(i)];
    }
    const Rational beta = light / w_q;
    if (!best || beta < *best) {
      best = beta;
    }
  }
  if (!best) {
    throw std::domain_error("alpha_beta_profile: no admissible cube in family");
  }
  return *best;
}

Rational doubling_ratio(const Weight& w, const CubeFamily& family) {
  const Universe& u = w.base.universe;
  if (!u.same_as(family.universe)) {
    throw std::domain_error("doubling_ratio: family over a different universe");
  }
  std::optional<Rational> best;
  for (const auto& fc : enumerate_cubes(family)) {
    auto cube = as_grid_cube(fc.view, u);
    if (!cube) {
      continue;
    }
    const Rational w_q = weighted_measure(w, fc.view.box);
    if (w_q == 0) {
      continue;
    }
    CellBox big;
    big.lo.resize(fc.view.box.lo.size());
    big.hi.resize(fc.view.box.hi.size());
    for (std::size_t a = 0; a < big.lo.size(); ++a) {
      big.lo[a] = std::max(0L, fc.view.box.lo[a] - 2 * cube->side);
      big.hi[a] = std::min(u.extent[a], fc.view.box.hi[a] + 2 * cube->side);
    }
    const Rational ratio = weighted_measure(w, big) / w_q;
    if (!best || ratio > *best) {
      best = ratio;
    }
  }
  if (!best) {
    throw std::domain_error("doubling_ratio: no admissible cube in family");
  }
  return *best;
}

}  // namespace medimax
