/* shared helpers for the unit and acceptance suites */

#ifndef RCIS_TESTS_SUPPORT_HPP_
#define RCIS_TESTS_SUPPORT_HPP_

#include <cmath>
#include <memory>
#include <utility>
#include <vector>

#include "rcis/invariance.hpp"
#include "rcis/oracle.hpp"

namespace rcis_tests {

/* encode a small fixture graph over a 1-D covering with 16 grid slots;
 * vertex k of the fixture is grid cell k */
inline rcis::SymbolicImage fixture_graph(
    std::size_t vertices, const std::vector<std::pair<int, int>>& edges) {
  rcis::Covering c = rcis::Covering::root_covering(rcis::Box({0.0}, {16.0}));
  for (int i = 0; i < 4; ++i) c = c.subdivided();
  std::vector<rcis::CellId> cells;
  for (std::size_t k = 0; k < vertices; ++k)
    cells.push_back(rcis::CellId{{static_cast<std::int64_t>(k)}});
  auto covering =
      std::make_shared<const rcis::Covering>(c.with_cells(cells));
  std::vector<std::vector<std::uint32_t>> adj(vertices);
  for (const auto& [a, b] : edges)
    adj[static_cast<std::size_t>(a)].push_back(static_cast<std::uint32_t>(b));
  return rcis::SymbolicImage(covering, {}, std::move(adj));
}

/* the nine-vertex example graph: a 4-cycle B2..B5, feeders B8,B9 and
 * dead ends B1,B6,B7 (1-based names, 0-based vertices) */
inline rcis::SymbolicImage nine_vertex_graph(bool with_b9_to_b5 = true) {
  std::vector<std::pair<int, int>> edges = {
      {1, 2}, {2, 3}, {3, 4}, {4, 1},  // B2 -> B3 -> B4 -> B5 -> B2
      {7, 8},                          // B8 -> B9
      {1, 0}, {1, 6},                  // B2 -> B1, B2 -> B7
      {3, 5},                          // B4 -> B6
  };
  if (with_b9_to_b5) edges.push_back({8, 4});  // B9 -> B5
  return fixture_graph(9, edges);
}

/* exact volume of the symmetric difference between a cell union and a
 * grid-kernel bitmap (both are axis-aligned grids over the domain) */
inline double symmetric_difference_volume(const rcis::Covering& cells,
                                          const rcis::GridKernel& kernel) {
  double engine_volume = 0.0;
  double overlap = 0.0;
  for (const rcis::CellId& id : cells.cells()) {
    const rcis::Box b = cells.cell_bounds(id);
    engine_volume += b.volume();
    const int n = b.dim();
    std::vector<long> lo(static_cast<std::size_t>(n)),
        hi(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const int r = kernel.resolution[static_cast<std::size_t>(i)];
      const double w = kernel.domain.width(i) / r;
      const long a =
          static_cast<long>(std::floor((b.lo(i) - kernel.domain.lo(i)) / w));
      const long z =
          static_cast<long>(std::floor((b.hi(i) - kernel.domain.lo(i)) / w));
      lo[static_cast<std::size_t>(i)] = std::max(0L, a);
      hi[static_cast<std::size_t>(i)] = std::min(static_cast<long>(r - 1), z);
    }
    std::vector<long> idx(lo);
    while (true) {
      long flat = 0;
      for (int i = 0; i < n; ++i)
        flat = flat * kernel.resolution[static_cast<std::size_t>(i)] +
               idx[static_cast<std::size_t>(i)];
      if (kernel.membership[static_cast<std::size_t>(flat)]) {
        const rcis::Box kb = kernel.cell_box(flat);
        double piece = 1.0;
        for (int i = 0; i < n; ++i)
          piece *= std::max(0.0, std::min(b.hi(i), kb.hi(i)) -
                                     std::max(b.lo(i), kb.lo(i)));
        overlap += piece;
      }
      int i = n - 1;
      for (; i >= 0; --i) {
        if (idx[static_cast<std::size_t>(i)] < hi[static_cast<std::size_t>(i)]) {
          ++idx[static_cast<std::size_t>(i)];
          for (int j = i + 1; j < n; ++j)
            idx[static_cast<std::size_t>(j)] = lo[static_cast<std::size_t>(j)];
          break;
        }
      }
      if (i < 0) break;
    }
  }
  return engine_volume + kernel.volume() - 2.0 * overlap;
}

inline double union_volume(const rcis::Covering& c) {
  if (c.empty()) return 0.0;
  return c.cell_bounds(c.cells().front()).volume() *
         static_cast<double>(c.size());
}

}  // namespace rcis_tests

#endif  // RCIS_TESTS_SUPPORT_HPP_
