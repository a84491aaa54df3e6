#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "medimax/rational.hpp"

namespace medimax {

/// Finite axis-aligned window of R^n, split into congruent half-open cells
/// of side `cell`. Everything downstream ranges over cubes of this lattice.
struct Universe {
  int dim = 1;
  std::vector<Rational> origin;
  Rational cell = 1;
  std::vector<long> extent;

  long total_cells() const;
  Rational cell_measure() const;   // cell^dim
  Rational total_measure() const;  // cell^dim * prod(extent)

  /// Lower coordinate of cell index c along axis `axis`.
  Rational coordinate(int axis, long c) const;

  /// Row-major flat index (axis 0 slowest).
  long flat_index(const std::vector<long>& cell_index) const;

  bool same_as(const Universe& other) const;
  void validate() const;
};

/// Half-open box of cells [lo, hi) per axis; possibly empty.
struct CellBox {
  std::vector<long> lo;
  std::vector<long> hi;

  bool empty() const;
  long volume_cells() const;
};

/// Axis-aligned cube with corners on grid nodes, inside the universe.
struct GridCube {
  std::vector<long> corner;  // lower corner, in cell indices
  long side = 1;             // side length in cells
};

/// A cube seen through the universe: the cells it covers plus its full
/// measure, which may exceed the covered part when the cube pokes outside
/// (the step function is zero there).
struct CubeView {
  CellBox box;
  Rational total_measure;
};

Rational cube_measure(const Universe& u, const GridCube& q);
CubeView view_of(const Universe& u, const GridCube& q);
bool cube_inside(const Universe& u, const GridCube& q);

/// One dyadic grid: cubes 2^{-k}([0,1)^n + m + (-1)^k shift) for k in
/// [k_min, k_max]. Shift components are 0 or 1/3; the alternating sign keeps
/// consecutive scales nested.
struct DyadicGridSpec {
  std::vector<Rational> shift;
  int k_min = 0;
  int k_max = 0;
};

/// A member cube of a DyadicGridSpec, identified by scale and lattice index.
struct DyadicCube {
  int k = 0;
  std::vector<long long> m;
};

Rational dyadic_side(int k);  // 2^{-k}
Rational dyadic_measure(int dim, int k);
std::vector<Rational> dyadic_corner(const DyadicGridSpec& spec, const DyadicCube& q);

/// Parent cube at scale k-1 (requires q.k > spec.k_min to stay in range,
/// but the arithmetic itself is unrestricted).
DyadicCube dyadic_parent(const DyadicGridSpec& spec, const DyadicCube& q);

/// True when every cube of the grid has corners on the universe's cell
/// lattice (checked at the finest scale; nesting carries it upward).
bool cell_aligned(const DyadicGridSpec& spec, const Universe& u);

/// Clipped view of a dyadic cube; requires cell alignment. Returns nullopt
/// when the cube misses the universe entirely.
std::optional<CubeView> dyadic_view(const Universe& u, const DyadicGridSpec& spec,
                                    const DyadicCube& q);

/// All cubes of the grid, scales k_min..k_max, that intersect the universe,
/// coarsest scale first, lexicographic in m within a scale.
std::vector<DyadicCube> enumerate_dyadic_cubes(const Universe& u, const DyadicGridSpec& spec);

/// The 2^n shifted grids D_alpha, alpha in {0,1/3}^n, enumerated with alpha
/// as a binary counter (axis 0 is the highest bit).
std::vector<DyadicGridSpec> shifted_grids(int dim, int k_min, int k_max);

struct CoveringResult {
  std::size_t grid_index = 0;
  DyadicCube cube;
  Rational ratio;  // measure(R) / measure(Q), always <= 6^n
};

/// Finds R in one of the shifted grids with Q subset of R and
/// |R| <= 6^n |Q|. Throws std::runtime_error("scale range exhausted...")
/// when the grids' scale range cannot hold the covering scale.
CoveringResult covering_cube(const Universe& u, const GridCube& q,
                             const std::vector<DyadicGridSpec>& grids);

/// Declared finite cube family over which suprema are taken.
struct CubeFamily {
  enum class Kind { all_grid_aligned, dyadic, explicit_list };

  Kind kind = Kind::all_grid_aligned;
  Universe universe;
  long max_side = 0;  // all_grid_aligned; 0 means no cap
  DyadicGridSpec spec;
  std::vector<GridCube> cubes;

  static CubeFamily all_grid_aligned(Universe u, long max_side = 0);
  static CubeFamily dyadic(Universe u, DyadicGridSpec spec);
  static CubeFamily explicit_list(Universe u, std::vector<GridCube> cubes);
};

/// One enumerated member of a family. Grid-aligned and explicit members
/// carry a GridCube; dyadic members carry the DyadicCube key.
struct FamilyCube {
  CubeView view;
  std::optional<GridCube> grid;
  std::optional<DyadicCube> dyadic;
};

std::vector<GridCube> enumerate_grid_cubes(const Universe& u, long max_side = 0);

/// Deterministic, duplicate-free enumeration of the family.
std::vector<FamilyCube> enumerate_cubes(const CubeFamily& family);

}  // namespace medimax
