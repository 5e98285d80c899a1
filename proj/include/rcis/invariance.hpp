/*
 * invariance.hpp
 *
 * Graph-level invariance analysis: strongly connected components,
 * the vertices carrying infinite admissible paths, and the robust
 * intersection over all disturbance graphs.
 */

#ifndef RCIS_INVARIANCE_HPP_
#define RCIS_INVARIANCE_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "rcis/symbolic_image.hpp"

namespace rcis {

struct SccResult {
  /* component index per vertex */
  std::vector<std::uint32_t> component_of;
  /* vertex lists per component */
  std::vector<std::vector<std::uint32_t>> components;
  /* a component is recurrent iff it has >= 2 vertices or a self-loop */
  std::vector<bool> recurrent;
};

/* Tarjan, iterative; linear in vertices + edges */
SccResult strongly_connected_components(const SymbolicImage& g);

/* Cells with an infinite admissible path through them: the vertices of
 * recurrent components plus every vertex with a directed path into a
 * recurrent component. */
struct InvariantVertexSet {
  std::vector<CellId> members;    // recurrent + feeder, sorted
  std::vector<CellId> recurrent;  // in-cycle vertices, sorted
  std::vector<CellId> feeder;     // path into recurrent, sorted
  std::vector<char> member_mask;  // by vertex index of the graph
};

InvariantVertexSet forward_invariant_vertices(const SymbolicImage& g);

/* Intersection of member sets over all graphs (all sharing one
 * covering). With refine_level the graphs are re-restricted to the
 * intersection and the selection repeats until it is a fixed point. */
std::vector<CellId> robust_select(std::span<const SymbolicImage> graphs,
                                  bool refine_level = false);

}  // namespace rcis

#endif  // RCIS_INVARIANCE_HPP_
