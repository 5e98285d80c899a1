/*
 * symbolic_image.hpp
 *
 * Directed graph over the cells of a covering, one graph per fixed
 * disturbance sample. An edge B_i -> B_j records that the approximated
 * image of B_i under f(., U, w) intersects the retained cell B_j.
 */

#ifndef RCIS_SYMBOLIC_IMAGE_HPP_
#define RCIS_SYMBOLIC_IMAGE_HPP_

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "rcis/dynamics.hpp"
#include "rcis/geometry.hpp"

namespace rcis {

enum class ImageMethod { sampling, interval };

/* Approximation of the image of one cell as a list of boxes:
 * sampling yields one point box per (cell sample x input sample),
 * interval yields one enclosure box per input sample (state interval
 * over the whole cell). Every box is inflated by the model's
 * image_inflation. */
std::vector<Box> image_of_cell(const SystemModel& model, const Box& cell,
                               std::span<const double> w,
                               const SamplerConfig& cfg, ImageMethod method);

class SymbolicImage {
public:
  /* adjacency indexed by position in covering->cells(); successor
   * lists sorted ascending. Used directly by tests to encode fixture
   * graphs. */
  SymbolicImage(std::shared_ptr<const Covering> covering,
                std::vector<double> w,
                std::vector<std::vector<std::uint32_t>> adjacency);

  const Covering& covering() const { return *covering_; }
  std::shared_ptr<const Covering> covering_ptr() const { return covering_; }
  std::span<const double> disturbance() const { return w_; }

  std::size_t vertex_count() const { return adj_.size(); }
  std::span<const std::uint32_t> successors(std::size_t i) const {
    return adj_[i];
  }
  std::size_t out_degree(std::size_t i) const { return adj_[i].size(); }
  const CellId& cell_of(std::size_t i) const { return covering_->cells()[i]; }
  std::size_t edge_count() const;

  /* debug edge list, one "src -> dst" line per edge */
  void dump_edges(std::ostream& os) const;

private:
  std::shared_ptr<const Covering> covering_;
  std::vector<double> w_;
  std::vector<std::vector<std::uint32_t>> adj_;
};

/* Build the symbolic image of the difference inclusion f(., U, w) over
 * the covering for one disturbance sample. Edges target retained cells
 * only; images that miss every retained cell contribute nothing, so a
 * cell whose whole image escapes has out-degree zero. Deterministic
 * for a fixed configuration; cells are processed independently and may
 * be split over RCIS_THREADS workers. */
SymbolicImage build_symbolic_image(const SystemModel& model,
                                   std::shared_ptr<const Covering> covering,
                                   std::span<const double> w,
                                   const SamplerConfig& cfg, ImageMethod method);

/* worker count for per-cell parallel loops: RCIS_THREADS when set,
 * otherwise the hardware concurrency */
unsigned engine_thread_count();

}  // namespace rcis

#endif  // RCIS_SYMBOLIC_IMAGE_HPP_
