#include "medimax/grid.hpp"

#include <algorithm>
#include <stdexcept>

namespace medimax {

long Universe::total_cells() const {
  long n = 1;
  for (long e : extent) {
    n *= e;
  }
  return n;
}

Rational Universe::cell_measure() const { return rational_pow(cell, dim); }

Rational Universe::total_measure() const {
  Rational m = cell_measure();
  for (long e : extent) {
    m *= e;
  }
  return m;
}

Rational Universe::coordinate(int axis, long c) const {
  return origin[static_cast<std::size_t>(axis)] + Rational(c) * cell;
}

long Universe::flat_index(const std::vector<long>& cell_index) const {
  long idx = 0;
  for (int a = 0; a < dim; ++a) {
    idx = idx * extent[static_cast<std::size_t>(a)] + cell_index[static_cast<std::size_t>(a)];
  }
  return idx;
}

bool Universe::same_as(const Universe& other) const {
  return dim == other.dim && origin == other.origin && cell == other.cell &&
         extent == other.extent;
}

void Universe::validate() const {
  if (dim < 1 || origin.size() != static_cast<std::size_t>(dim) ||
      extent.size() != static_cast<std::size_t>(dim)) {
    throw std::invalid_argument("universe: inconsistent dimension");
  }
  if (cell <= 0) {
    throw std::invalid_argument("universe: cell side must be positive");
  }
  for (long e : extent) {
    if (e < 1) {
      throw std::invalid_argument("universe: extent must be positive");
    }
  }
}

bool CellBox::empty() const {
  for (std::size_t a = 0; a < lo.size(); ++a) {
    if (hi[a] <= lo[a]) {
      return true;
    }
  }
  return false;
}

long CellBox::volume_cells() const {
  long v = 1;
  for (std::size_t a = 0; a < lo.size(); ++a) {
    if (hi[a] <= lo[a]) {
      return 0;
    }
    v *= hi[a] - lo[a];
  }
  return v;
}

Rational cube_measure(const Universe& u, const GridCube& q) {
  return rational_pow(Rational(q.side) * u.cell, u.dim);
}

CubeView view_of(const Universe& u, const GridCube& q) {
  CellBox box;
  box.lo = q.corner;
  box.hi.resize(q.corner.size());
  for (std::size_t a = 0; a < q.corner.size(); ++a) {
    box.hi[a] = q.corner[a] + q.side;
  }
  return CubeView{std::move(box), cube_measure(u, q)};
}

bool cube_inside(const Universe& u, const GridCube& q) {
  if (q.side < 1 || q.corner.size() != static_cast<std::size_t>(u.dim)) {
    return false;
  }
  for (int a = 0; a < u.dim; ++a) {
    const long c = q.corner[static_cast<std::size_t>(a)];
    if (c < 0 || c + q.side > u.extent[static_cast<std::size_t>(a)]) {
      return false;
    }
  }
  return true;
}

Rational dyadic_side(int k) {
  return k >= 0 ? Rational(1, Int(1) << k) : Rational(Int(1) << (-k));
}

Rational dyadic_measure(int dim, int k) { return rational_pow(dyadic_side(k), dim); }

std::vector<Rational> dyadic_corner(const DyadicGridSpec& spec, const DyadicCube& q) {
  const Rational side = dyadic_side(q.k);
  const int sign = (q.k % 2 == 0) ? 1 : -1;
  std::vector<Rational> corner(spec.shift.size());
  for (std::size_t a = 0; a < spec.shift.size(); ++a) {
    corner[a] = (Rational(q.m[a]) + Rational(sign) * spec.shift[a]) * side;
  }
  return corner;
}

DyadicCube dyadic_parent(const DyadicGridSpec& spec, const DyadicCube& q) {
  // Nesting at child scale k with sign s = (-1)^k requires
  // 2 m' in [m - 1 + 3 s alpha, m + 3 s alpha]; for shift 1/3 that gives
  // m' = floor((m + s)/2), for shift 0 simply floor(m/2).
  const int sign = (q.k % 2 == 0) ? 1 : -1;
  DyadicCube parent;
  parent.k = q.k - 1;
  parent.m.resize(q.m.size());
  for (std::size_t a = 0; a < q.m.size(); ++a) {
    long long t = q.m[a];
    if (spec.shift[a] != 0) {
      t += sign;
    }
    parent.m[a] = (t >= 0) ? t / 2 : -((-t + 1) / 2);
  }
  return parent;
}

bool cell_aligned(const DyadicGridSpec& spec, const Universe& u) {
  const Rational side = dyadic_side(spec.k_max);
  const Rational cells_per_cube = side / u.cell;
  if (denominator(cells_per_cube) != 1 || cells_per_cube < 1) {
    return false;
  }
  const int sign = (spec.k_max % 2 == 0) ? 1 : -1;
  for (int a = 0; a < u.dim; ++a) {
    const Rational offset = Rational(sign) * spec.shift[static_cast<std::size_t>(a)] * side -
                            u.origin[static_cast<std::size_t>(a)];
    if (denominator(Rational(offset / u.cell)) != 1) {
      return false;
    }
  }
  return true;
}

std::optional<CubeView> dyadic_view(const Universe& u, const DyadicGridSpec& spec,
                                    const DyadicCube& q) {
  const auto corner = dyadic_corner(spec, q);
  const Rational side = dyadic_side(q.k);
  CellBox box;
  box.lo.resize(static_cast<std::size_t>(u.dim));
  box.hi.resize(static_cast<std::size_t>(u.dim));
  for (int a = 0; a < u.dim; ++a) {
    const std::size_t sa = static_cast<std::size_t>(a);
    const Rational lo_cells = (corner[sa] - u.origin[sa]) / u.cell;
    const Rational hi_cells = (corner[sa] + side - u.origin[sa]) / u.cell;
    if (denominator(lo_cells) != 1 || denominator(hi_cells) != 1) {
      throw std::domain_error("dyadic cube is not aligned with the cell lattice");
    }
    const long lo = numerator(lo_cells).convert_to<long>();
    const long hi = numerator(hi_cells).convert_to<long>();
    box.lo[sa] = std::max(0L, lo);
    box.hi[sa] = std::min(u.extent[sa], hi);
    if (box.hi[sa] <= box.lo[sa]) {
      return std::nullopt;
    }
  }
  return CubeView{std::move(box), dyadic_measure(u.dim, q.k)};
}

std::vector<DyadicCube> enumerate_dyadic_cubes(const Universe& u, const DyadicGridSpec& spec) {
  if (spec.k_min > spec.k_max) {
    throw std::invalid_argument("dyadic grid: empty scale range");
  }
  std::vector<DyadicCube> out;
  for (int k = spec.k_min; k <= spec.k_max; ++k) {
    const Rational side = dyadic_side(k);
    const int sign = (k % 2 == 0) ? 1 : -1;
    // Per-axis index range of cubes meeting the universe interior.
    std::vector<long long> lo(static_cast<std::size_t>(u.dim));
    std::vector<long long> hi(static_cast<std::size_t>(u.dim));
    for (int a = 0; a < u.dim; ++a) {
      const std::size_t sa = static_cast<std::size_t>(a);
      const Rational offset = Rational(sign) * spec.shift[sa] * side;
      const Rational u_lo = u.origin[sa];
      const Rational u_hi = u.origin[sa] + Rational(u.extent[sa]) * u.cell;
      // cube [offset + m side, offset + (m+1) side) meets [u_lo, u_hi)
      lo[sa] = (floor_rational((u_lo - offset) / side - 1) + 1).convert_to<long long>();
      hi[sa] = (ceil_rational((u_hi - offset) / side) - 1).convert_to<long long>();
    }
    std::vector<long long> m = lo;
    while (true) {
      out.push_back(DyadicCube{k, m});
      int a = u.dim - 1;
      while (a >= 0) {
        const std::size_t sa = static_cast<std::size_t>(a);
        if (++m[sa] <= hi[sa]) {
          break;
        }
        m[sa] = lo[sa];
        --a;
      }
      if (a < 0) {
        break;
      }
    }
  }
  return out;
}

std::vector<DyadicGridSpec> shifted_grids(int dim, int k_min, int k_max) {
  if (dim < 1) {
    throw std::invalid_argument("shifted_grids: dimension must be positive");
  }
  std::vector<DyadicGridSpec> grids;
  const std::size_t count = std::size_t{1} << dim;
  grids.reserve(count);
  for (std::size_t bits = 0; bits < count; ++bits) {
    DyadicGridSpec spec;
    spec.k_min = k_min;
    spec.k_max = k_max;
    spec.shift.resize(static_cast<std::size_t>(dim));
    for (int a = 0; a < dim; ++a) {
      const bool on = (bits >> (dim - 1 - a)) & 1U;
      spec.shift[static_cast<std::size_t>(a)] = on ? Rational(1, 3) : Rational(0);
    }
    grids.push_back(std::move(spec));
  }
  return grids;
}

namespace {

// True when the open interval (a, a+len) contains a point of the lattice
// offset + side*Z.
bool lattice_hits_open_interval(const Rational& a, const Rational& len, const Rational& offset,
                                const Rational& side) {
  const Int m = floor_rational((a - offset) / side) + 1;
  const Rational point = offset + Rational(m) * side;
  return point < a + len;
}

}  // namespace

CoveringResult covering_cube(const Universe& u, const GridCube& q,
                             const std::vector<DyadicGridSpec>& grids) {
  if (!cube_inside(u, q)) {
    throw std::domain_error("covering_cube: cube outside universe");
  }
  if (grids.size() != (std::size_t{1} << u.dim)) {
    throw std::invalid_argument("covering_cube: expected 2^n shifted grids");
  }
  const Rational len = Rational(q.side) * u.cell;
  // The unique scale with 3*len <= 2^{-k} < 6*len; then |R| <= 6^n |Q|.
  int k = grids.front().k_min;
  bool scale_found = false;
  for (; k <= grids.front().k_max; ++k) {
    const Rational side = dyadic_side(k);
    if (side >= 3 * len && side < 6 * len) {
      scale_found = true;
      break;
    }
  }
  if (!scale_found) {
    throw std::runtime_error("scale range exhausted: no covering scale for cube of side " +
                             format_rational(len));
  }
  const Rational side = dyadic_side(k);
  const int sign = (k % 2 == 0) ? 1 : -1;
  std::size_t bits = 0;
  DyadicCube cube;
  cube.k = k;
  cube.m.resize(static_cast<std::size_t>(u.dim));
  for (int a = 0; a < u.dim; ++a) {
    const std::size_t sa = static_cast<std::size_t>(a);
    const Rational lo = u.coordinate(a, q.corner[sa]);
    bool found = false;
    for (int choice = 0; choice < 2 && !found; ++choice) {
      const Rational shift = choice == 0 ? Rational(0) : Rational(1, 3);
      const Rational offset = Rational(sign) * shift * side;
      if (!lattice_hits_open_interval(lo, len, offset, side)) {
        found = true;
        if (choice == 1) {
          bits |= std::size_t{1} << (u.dim - 1 - a);
        }
        cube.m[sa] = floor_rational((lo - offset) / side).convert_to<long long>();
      }
    }
    if (!found) {
      // Cannot happen at 2^{-k} >= 3*len: the two lattices interleave at
      // spacing 2^{-k}/3 >= len.
      throw std::logic_error("covering_cube: both lattices cut the cube");
    }
  }
  const Rational ratio = dyadic_measure(u.dim, k) / cube_measure(u, q);
  return CoveringResult{bits, std::move(cube), ratio};
}

CubeFamily CubeFamily::all_grid_aligned(Universe u, long max_side) {
  CubeFamily f;
  f.kind = Kind::all_grid_aligned;
  f.universe = std::move(u);
  f.max_side = max_side;
  return f;
}

CubeFamily CubeFamily::dyadic(Universe u, DyadicGridSpec spec) {
  CubeFamily f;
  f.kind = Kind::dyadic;
  f.universe = std::move(u);
  f.spec = std::move(spec);
  return f;
}

CubeFamily CubeFamily::explicit_list(Universe u, std::vector<GridCube> cubes) {
  CubeFamily f;
  f.kind = Kind::explicit_list;
  f.universe = std::move(u);
  f.cubes = std::move(cubes);
  return f;
}

std::vector<GridCube> enumerate_grid_cubes(const Universe& u, long max_side) {
  long cap = *std::min_element(u.extent.begin(), u.extent.end());
  if (max_side > 0) {
    cap = std::min(cap, max_side);
  }
  std::vector<GridCube> out;
  for (long side = 1; side <= cap; ++side) {
    std::vector<long> corner(static_cast<std::size_t>(u.dim), 0);
    while (true) {
      out.push_back(GridCube{corner, side});
      int a = u.dim - 1;
      while (a >= 0) {
        const std::size_t sa = static_cast<std::size_t>(a);
        if (++corner[sa] + side <= u.extent[sa]) {
          break;
        }
        corner[sa] = 0;
        --a;
      }
      if (a < 0) {
        break;
      }
    }
  }
  return out;
}

std::vector<FamilyCube> enumerate_cubes(const CubeFamily& family) {
  std::vector<FamilyCube> out;
  switch (family.kind) {
    case CubeFamily::Kind::all_grid_aligned:
      for (auto& q : enumerate_grid_cubes(family.universe, family.max_side)) {
        out.push_back(FamilyCube{view_of(family.universe, q), q, std::nullopt});
      }
      break;
    case CubeFamily::Kind::dyadic:
      for (auto& q : enumerate_dyadic_cubes(family.universe, family.spec)) {
        auto view = dyadic_view(family.universe, family.spec, q);
        if (view) {
          out.push_back(FamilyCube{std::move(*view), std::nullopt, q});
        }
      }
      break;
    case CubeFamily::Kind::explicit_list:
      for (auto& q : family.cubes) {
        if (!cube_inside(family.universe, q)) {
          throw std::domain_error("explicit family: cube outside universe");
        }
        out.push_back(FamilyCube{view_of(family.universe, q), q, std::nullopt});
      }
      break;
  }
  return out;
}

}  // namespace medimax
