/*
 * algorithms.hpp
 *
 * Drivers for the outer approximation loop (subdivide / graph /
 * select, stop on empty or unchanged covering) and the inner
 * approximation loop (inflated images, stop when the discarded cells
 * are covered by the inflated survivors), plus the one-step
 * invariance validator used to check results.
 */

#ifndef RCIS_ALGORITHMS_HPP_
#define RCIS_ALGORITHMS_HPP_

#include <functional>
#include <string>
#include <vector>

#include "rcis/invariance.hpp"

namespace rcis {

enum class RunMode { outer, inner };
enum class Termination { empty, fixed_point, inclusion_met, budget_exhausted };

std::string to_string(RunMode m);
std::string to_string(Termination t);

struct IterationRecord {
  int iteration = 0;          // 1-based
  std::size_t cell_count = 0; // retained cells after selection
  double diameter = 0.0;      // covering diameter after selection
  std::size_t edge_total = 0; // edges summed over all graphs
  double selection_seconds = 0.0;
  double wall_seconds = 0.0;  // full iteration
};

struct RunConfig {
  RunMode mode = RunMode::outer;
  /* iteration budget; for the inner mode this is the safety cap on a
   * loop the stopping rule would otherwise bound */
  int max_iterations = 64;
  double eps = 1e-3;  // inner mode only: image inflation + inclusion margin
  SamplerConfig sampler;
  ImageMethod method = ImageMethod::sampling;
  bool refine_level = false;
  bool record_snapshots = true;
  std::function<void(const IterationRecord&)> progress;
};

struct RunReport {
  RunMode mode = RunMode::outer;
  Termination termination = Termination::budget_exhausted;
  int iterations_completed = 0;
  int graphs_per_iteration = 0;
  double eps = 0.0;
  std::vector<IterationRecord> records;
  /* covering after each completed iteration (when recorded) */
  std::vector<CellSetSnapshot> snapshots;
  Covering final_covering;
  /* inner mode: cells dropped by the certification prune (boundary
   * straddlers that survive selection but fail the one-step test) */
  std::size_t pruned_cells = 0;
  double total_seconds = 0.0;
};

/* Outer approximation: each iterate's cell union contains the largest
 * robust control invariant set at the achieved resolution. */
RunReport run_outer(const SystemModel& model, const RunConfig& cfg);

/* Inner approximation: runs with image_inflation = eps. The final
 * covering is pruned to the fixpoint of the one-step validator, so
 * every retained state (at the sampling densities) has an admissible
 * input keeping it inside the returned union; cells straddling the
 * true invariance boundary survive graph selection at any finite
 * depth and are removed here. */
RunReport run_inner(const SystemModel& model, const RunConfig& cfg);

struct InvarianceWitness {
  std::vector<double> x;
  std::vector<double> w;
};

struct InvarianceCheckReport {
  double pass_fraction = 1.0;
  bool empty_set = false;
  std::size_t checks = 0;   // (state sample, disturbance sample) pairs
  std::size_t failures = 0;
  std::vector<InvarianceWitness> witnesses;  // up to 10 failing pairs
};

/* For every sampled state of every retained cell and every sampled
 * disturbance: some sampled input must map the state (inflated by eps)
 * back into the retained union. Pass fraction 1.0 on an inner result
 * confirms robust control invariance at the sampling densities. */
InvarianceCheckReport one_step_invariance_check(const SystemModel& model,
                                                const Covering& cells,
                                                const SamplerConfig& cfg,
                                                double eps);

/* nested-union check used by tests: every later cell refines a
 * retained earlier cell */
bool report_unions_nested(const RunReport& report);

}  // namespace rcis

#endif  // RCIS_ALGORITHMS_HPP_
