/*
 * geometry.hpp
 *
 * Axis-aligned boxes, depth-indexed coverings and the box set
 * operations used by the invariant set computation: subdivision,
 * point location, inflation and exact box-cover tests.
 */

#ifndef RCIS_GEOMETRY_HPP_
#define RCIS_GEOMETRY_HPP_

#include <cstdint>
#include <compare>
#include <optional>
#include <span>
#include <vector>

namespace rcis {

/* Axis-aligned interval vector [lo,hi]. The universal geometric
 * primitive: cells, constraint sets and cell images are all boxes. */
class Box {
public:
  Box() = default;
  /* throws std::invalid_argument on lo[i] > hi[i], mismatched sizes,
   * non-finite entries or dimension 0 (dimension-0 boxes are allowed
   * only through Box::empty_dim(), used for absent inputs). */
  Box(std::vector<double> lo, std::vector<double> hi);

  /* box of dimension 0; models an absent input or disturbance space */
  static Box empty_dim();
  /* degenerate box {p} */
  static Box point(std::vector<double> p);

  int dim() const { return static_cast<int>(lo_.size()); }
  double lo(int i) const { return lo_[static_cast<std::size_t>(i)]; }
  double hi(int i) const { return hi_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& lo() const { return lo_; }
  const std::vector<double>& hi() const { return hi_; }

  double width(int i) const { return hi(i) - lo(i); }
  /* infinity-norm diameter */
  double max_width() const;
  double volume() const;
  std::vector<double> center() const;

  /* closed containment tests */
  bool contains(std::span<const double> x) const;
  bool contains_box(const Box& b) const;
  bool intersects(const Box& b) const;

  /* Minkowski sum with eps * unit infinity-norm ball; eps >= 0 */
  Box inflate(double eps) const;

  /* the 2^n corner points, lexicographic in (lo,hi) choices per dim */
  std::vector<std::vector<double>> corners() const;

  bool operator==(const Box& b) const = default;

private:
  std::vector<double> lo_, hi_;
};

/* Integer coordinates of one cell within a covering. coords[i] ranges
 * over [0, 2^splits[i]). Cell geometry is always derived from these
 * integers, never stored as floating bounds. */
struct CellId {
  std::vector<std::int64_t> coords;
  auto operator<=>(const CellId&) const = default;
};

/* A depth-stamped set of disjoint cells partitioning a subset of the
 * root box. Cells are half-open [lo,hi) with the root's upper face
 * closed, so every point of the root lies in exactly one cell of the
 * full grid. depth = sum(splits); subdivision bisects dimension
 * (depth mod n) and replaces every cell by its two children. */
class Covering {
public:
  /* a default-constructed covering is a placeholder with no root;
   * build real ones through root_covering / empty_grid */
  Covering() = default;

  /* depth-0 covering: the single cell (0,...,0) spanning X */
  static Covering root_covering(const Box& X);

  /* covering with no retained cells at the grid implied by splits;
   * splits must be reachable by cycling subdivision (deserialization) */
  static Covering empty_grid(const Box& root, const std::vector<int>& splits);

  const Box& root() const { return root_; }
  int depth() const { return depth_; }
  const std::vector<int>& splits() const { return splits_; }
  int dim() const { return root_.dim(); }
  /* cells in lexicographic coordinate order */
  const std::vector<CellId>& cells() const { return cells_; }
  std::size_t size() const { return cells_.size(); }
  bool empty() const { return cells_.empty(); }

  /* number of grid positions along dimension i, = 2^splits[i] */
  std::int64_t cells_per_dim(int i) const;

  /* covering diameter: max_i root_width_i / 2^splits_i */
  double diameter() const;

  /* one more bisection along dimension (depth mod n); every cell is
   * replaced by exactly two children, the union is unchanged */
  Covering subdivided() const;

  /* same grid, different retained cell set (sorted + deduplicated;
   * throws on out-of-range coords) */
  Covering with_cells(std::vector<CellId> cells) const;

  /* float bounds of a cell, derived on demand from the integer id */
  Box cell_bounds(const CellId& id) const;

  /* the unique grid cell whose half-open box contains x (root's upper
   * face closed); nullopt if x is outside the root. The result need
   * not be a retained cell - callers check membership. */
  std::optional<CellId> locate_point(std::span<const double> x) const;

  /* membership / position in the sorted retained set */
  bool contains_cell(const CellId& id) const;
  std::optional<std::size_t> index_of(const CellId& id) const;

  /* grid index along dimension i of coordinate t, clamped to the top
   * cell when t equals the root's upper bound; t must lie in the root */
  std::int64_t grid_index(int i, double t) const;

  /* project a cell of this covering to its ancestor at a coarser
   * covering of the same root (shallower or equal splits) */
  CellId ancestor_in(const Covering& coarser, const CellId& id) const;

  /* true iff the closed box b lies inside the union of retained cells;
   * exact for grid-aligned reasoning: b must be inside the root and
   * every grid cell touching b must be retained */
  bool box_inside_retained(const Box& b) const;

private:
  Box root_;
  int depth_ = 0;
  std::vector<int> splits_;
  std::vector<CellId> cells_;
};

/* snapshot of the retained cell set after one algorithm iteration */
struct CellSetSnapshot {
  Covering covering;
  int iteration = 0;
  double diameter = 0.0;
};

/* True iff box b is contained in the union of cover, decided by
 * recursive splitting: a sub-box inside a single member is covered, a
 * sub-box disjoint from all members is not, anything else is bisected
 * along its widest edge. Sub-boxes narrower than tol are declared
 * covered, so the test is conservative only below tol. */
bool box_covered_by_union(const Box& b, std::span<const Box> cover, double tol);

/* Point-set equality of two coverings of the same root, b at least as
 * deep as a. Computed combinatorially: project b's cells to depth-a
 * ancestors; every ancestor must be retained in a and fully populated
 * by its descendants, and all of a's cells must appear. */
bool coverings_equal_as_sets(const Covering& a, const Covering& b);

/* True iff union(later) is contained in union(earlier); later must be
 * at least as deep. Exact combinatorial check. */
bool union_subset_of(const Covering& later, const Covering& earlier);

}  // namespace rcis

#endif  // RCIS_GEOMETRY_HPP_
