#include "rcis/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace rcis {

Box::Box(std::vector<double> lo, std::vector<double> hi)
    : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (lo_.size() != hi_.size())
    throw std::invalid_argument("Box: lo/hi dimension mismatch");
  if (lo_.empty())
    throw std::invalid_argument("Box: dimension must be >= 1");
  for (std::size_t i = 0; i < lo_.size(); ++i) {
    if (!std::isfinite(lo_[i]) || !std::isfinite(hi_[i]))
      throw std::invalid_argument("Box: non-finite bound at dimension " +
                                  std::to_string(i));
    if (lo_[i] > hi_[i])
      throw std::invalid_argument("Box: lo > hi at dimension " +
                                  std::to_string(i));
  }
}

Box Box::empty_dim() {
  Box b;
  return b;
}

Box Box::point(std::vector<double> p) {
  if (p.empty()) return empty_dim();
  return Box(p, p);
}

double Box::max_width() const {
  double w = 0.0;
  for (int i = 0; i < dim(); ++i) w = std::max(w, width(i));
  return w;
}

double Box::volume() const {
  double v = 1.0;
  for (int i = 0; i < dim(); ++i) v *= width(i);
  return v;
}

std::vector<double> Box::center() const {
  std::vector<double> c(lo_.size());
  for (int i = 0; i < dim(); ++i)
    c[static_cast<std::size_t>(i)] = lo(i) + 0.5 * width(i);
  return c;
}

bool Box::contains(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim())
    throw std::invalid_argument("Box::contains: dimension mismatch");
  for (int i = 0; i < dim(); ++i)
    if (x[static_cast<std::size_t>(i)] < lo(i) ||
        x[static_cast<std::size_t>(i)] > hi(i))
      return false;
  return true;
}

bool Box::contains_box(const Box& b) const {
  if (b.dim() != dim())
    throw std::invalid_argument("Box::contains_box: dimension mismatch");
  for (int i = 0; i < dim(); ++i)
    if (b.lo(i) < lo(i) || b.hi(i) > hi(i)) return false;
  return true;
}

bool Box::intersects(const Box& b) const {
  if (b.dim() != dim())
    throw std::invalid_argument("Box::intersects: dimension mismatch");
  for (int i = 0; i < dim(); ++i)
    if (b.hi(i) < lo(i) || b.lo(i) > hi(i)) return false;
  return true;
}

Box Box::inflate(double eps) const {
  if (eps < 0.0) throw std::invalid_argument("Box::inflate: eps must be >= 0");
  std::vector<double> l(lo_), h(hi_);
  for (auto& v : l) v -= eps;
  for (auto& v : h) v += eps;
  return Box(std::move(l), std::move(h));
}

std::vector<std::vector<double>> Box::corners() const {
  const int n = dim();
  std::vector<std::vector<double>> out;
  out.reserve(static_cast<std::size_t>(1) << n);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<double> p(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
      p[static_cast<std::size_t>(i)] = (mask >> i) & 1 ? hi(i) : lo(i);
    out.push_back(std::move(p));
  }
  return out;
}

Covering Covering::root_covering(const Box& X) {
  Covering c;
  c.root_ = X;
  c.depth_ = 0;
  c.splits_.assign(static_cast<std::size_t>(X.dim()), 0);
  c.cells_.push_back(
      CellId{std::vector<std::int64_t>(static_cast<std::size_t>(X.dim()), 0)});
  return c;
}

Covering Covering::empty_grid(const Box& root, const std::vector<int>& splits) {
  if (static_cast<int>(splits.size()) != root.dim())
    throw std::invalid_argument("Covering::empty_grid: splits dimension mismatch");
  int depth = 0;
  for (int s : splits) {
    if (s < 0) throw std::invalid_argument("Covering::empty_grid: negative split");
    depth += s;
  }
  const int n = root.dim();
  for (int i = 0; i < n; ++i) {
    const int expected = depth / n + (i < depth % n ? 1 : 0);
    if (splits[static_cast<std::size_t>(i)] != expected)
      throw std::invalid_argument(
          "Covering::empty_grid: splits are not a cycled subdivision");
  }
  Covering c;
  c.root_ = root;
  c.depth_ = depth;
  c.splits_ = splits;
  return c;
}

std::int64_t Covering::cells_per_dim(int i) const {
  return std::int64_t{1} << splits_[static_cast<std::size_t>(i)];
}

double Covering::diameter() const {
  double d = 0.0;
  for (int i = 0; i < dim(); ++i)
    d = std::max(d, std::ldexp(root_.width(i),
                               -splits_[static_cast<std::size_t>(i)]));
  return d;
}

Covering Covering::subdivided() const {
  const int n = dim();
  const int d = depth_ % n;
  Covering out;
  out.root_ = root_;
  out.depth_ = depth_ + 1;
  out.splits_ = splits_;
  ++out.splits_[static_cast<std::size_t>(d)];
  out.cells_.reserve(cells_.size() * 2);
  for (const CellId& c : cells_) {
    CellId a = c, b = c;
    a.coords[static_cast<std::size_t>(d)] = 2 * c.coords[static_cast<std::size_t>(d)];
    b.coords[static_cast<std::size_t>(d)] = 2 * c.coords[static_cast<std::size_t>(d)] + 1;
    out.cells_.push_back(std::move(a));
    out.cells_.push_back(std::move(b));
  }
  /* children of different parents interleave unless the bisected
   * dimension is the last one; restore lexicographic order */
  std::sort(out.cells_.begin(), out.cells_.end());
  return out;
}

Covering Covering::with_cells(std::vector<CellId> cells) const {
  for (const CellId& c : cells) {
    if (static_cast<int>(c.coords.size()) != dim())
      throw std::invalid_argument("Covering::with_cells: bad cell dimension");
    for (int i = 0; i < dim(); ++i) {
      const std::int64_t v = c.coords[static_cast<std::size_t>(i)];
      if (v < 0 || v >= cells_per_dim(i))
        throw std::invalid_argument("Covering::with_cells: coords out of range");
    }
  }
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  Covering out;
  out.root_ = root_;
  out.depth_ = depth_;
  out.splits_ = splits_;
  out.cells_ = std::move(cells);
  return out;
}

Box Covering::cell_bounds(const CellId& id) const {
  if (static_cast<int>(id.coords.size()) != dim())
    throw std::invalid_argument("Covering::cell_bounds: bad cell dimension");
  std::vector<double> lo(static_cast<std::size_t>(dim())),
      hi(static_cast<std::size_t>(dim()));
  for (int i = 0; i < dim(); ++i) {
    const std::int64_t v = id.coords[static_cast<std::size_t>(i)];
    if (v < 0 || v >= cells_per_dim(i))
      throw std::out_of_range("Covering::cell_bounds: coords out of range");
    const double w =
        std::ldexp(root_.width(i), -splits_[static_cast<std::size_t>(i)]);
    lo[static_cast<std::size_t>(i)] = root_.lo(i) + static_cast<double>(v) * w;
    hi[static_cast<std::size_t>(i)] = lo[static_cast<std::size_t>(i)] + w;
  }
  return Box(std::move(lo), std::move(hi));
}

std::int64_t Covering::grid_index(int i, double t) const {
  const double rel = (t - root_.lo(i)) / root_.width(i);
  const double scaled = std::ldexp(rel, splits_[static_cast<std::size_t>(i)]);
  std::int64_t idx = static_cast<std::int64_t>(std::floor(scaled));
  const std::int64_t m = cells_per_dim(i);
  if (idx < 0) idx = 0;
  if (idx >= m) idx = m - 1;  // root's upper face is closed
  return idx;
}

std::optional<CellId> Covering::locate_point(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim())
    throw std::invalid_argument("Covering::locate_point: dimension mismatch");
  CellId id;
  id.coords.resize(static_cast<std::size_t>(dim()));
  for (int i = 0; i < dim(); ++i) {
    const double t = x[static_cast<std::size_t>(i)];
    if (t < root_.lo(i) || t > root_.hi(i)) return std::nullopt;
    id.coords[static_cast<std::size_t>(i)] = grid_index(i, t);
  }
  return id;
}

bool Covering::contains_cell(const CellId& id) const {
  return std::binary_search(cells_.begin(), cells_.end(), id);
}

std::optional<std::size_t> Covering::index_of(const CellId& id) const {
  auto it = std::lower_bound(cells_.begin(), cells_.end(), id);
  if (it == cells_.end() || *it != id) return std::nullopt;
  return static_cast<std::size_t>(it - cells_.begin());
}

CellId Covering::ancestor_in(const Covering& coarser, const CellId& id) const {
  if (coarser.root_ != root_)
    throw std::invalid_argument("ancestor_in: mismatched roots");
  CellId out = id;
  for (int i = 0; i < dim(); ++i) {
    const int shift = splits_[static_cast<std::size_t>(i)] -
                      coarser.splits_[static_cast<std::size_t>(i)];
    if (shift < 0)
      throw std::invalid_argument("ancestor_in: target covering is deeper");
    out.coords[static_cast<std::size_t>(i)] >>= shift;
  }
  return out;
}

bool Covering::box_inside_retained(const Box& b) const {
  if (b.dim() != dim())
    throw std::invalid_argument("box_inside_retained: dimension mismatch");
  for (int i = 0; i < dim(); ++i)
    if (b.lo(i) < root_.lo(i) || b.hi(i) > root_.hi(i)) return false;
  /* every grid cell touching b must be retained */
  const int n = dim();
  std::vector<std::int64_t> a(static_cast<std::size_t>(n)),
      z(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    a[static_cast<std::size_t>(i)] = grid_index(i, b.lo(i));
    z[static_cast<std::size_t>(i)] = grid_index(i, b.hi(i));
  }
  CellId id;
  id.coords = a;
  while (true) {
    if (!contains_cell(id)) return false;
    int i = n - 1;
    for (; i >= 0; --i) {
      if (id.coords[static_cast<std::size_t>(i)] < z[static_cast<std::size_t>(i)]) {
        ++id.coords[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < n; ++j)
          id.coords[static_cast<std::size_t>(j)] = a[static_cast<std::size_t>(j)];
        break;
      }
    }
    if (i < 0) break;
  }
  return true;
}

namespace {

bool covered_rec(const Box& b, std::span<const Box> cover, double tol) {
  bool any_overlap = false;
  for (const Box& m : cover) {
    if (m.contains_box(b)) return true;
    if (m.intersects(b)) any_overlap = true;
  }
  if (!any_overlap) return false;
  /* bisect along the widest edge; stop below the tolerance floor */
  int widest = 0;
  for (int i = 1; i < b.dim(); ++i)
    if (b.width(i) > b.width(widest)) widest = i;
  if (b.width(widest) < tol) return true;
  const double mid = b.lo(widest) + 0.5 * b.width(widest);
  std::vector<double> hi_left(b.hi()), lo_right(b.lo());
  hi_left[static_cast<std::size_t>(widest)] = mid;
  lo_right[static_cast<std::size_t>(widest)] = mid;
  return covered_rec(Box(b.lo(), hi_left), cover, tol) &&
         covered_rec(Box(lo_right, b.hi()), cover, tol);
}

}  // namespace

bool box_covered_by_union(const Box& b, std::span<const Box> cover, double tol) {
  if (tol < 0.0)
    throw std::invalid_argument("box_covered_by_union: tol must be >= 0");
  for (const Box& m : cover)
    if (m.dim() != b.dim())
      throw std::invalid_argument("box_covered_by_union: dimension mismatch");
  return covered_rec(b, cover, tol);
}

bool coverings_equal_as_sets(const Covering& a, const Covering& b) {
  if (a.root() != b.root())
    throw std::invalid_argument("coverings_equal_as_sets: mismatched roots");
  if (b.depth() < a.depth())
    throw std::invalid_argument("coverings_equal_as_sets: b must be at least as deep");
  if (a.depth() == b.depth()) return a.cells() == b.cells();

  /* each ancestor of a b-cell must be retained in a and must be fully
   * populated: a's cell splits into 2^(depth gap) descendants */
  std::int64_t expected = 1;
  for (int i = 0; i < a.dim(); ++i) {
    const int shift = b.splits()[static_cast<std::size_t>(i)] -
                      a.splits()[static_cast<std::size_t>(i)];
    expected <<= shift;
  }

  std::vector<CellId> ancestors;
  ancestors.reserve(b.size());
  for (const CellId& c : b.cells()) ancestors.push_back(b.ancestor_in(a, c));
  std::sort(ancestors.begin(), ancestors.end());

  std::size_t i = 0;
  std::size_t distinct = 0;
  while (i < ancestors.size()) {
    std::size_t j = i;
    while (j < ancestors.size() && ancestors[j] == ancestors[i]) ++j;
    if (static_cast<std::int64_t>(j - i) != expected) return false;
    if (!a.contains_cell(ancestors[i])) return false;
    ++distinct;
    i = j;
  }
  return distinct == a.size();
}

bool union_subset_of(const Covering& later, const Covering& earlier) {
  if (later.root() != earlier.root())
    throw std::invalid_argument("union_subset_of: mismatched roots");
  for (const CellId& c : later.cells())
    if (!earlier.contains_cell(later.ancestor_in(earlier, c))) return false;
  return true;
}

}  // namespace rcis
