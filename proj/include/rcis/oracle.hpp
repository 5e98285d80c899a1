/*
 * oracle.hpp
 *
 * Independent brute-force validators: a uniform-grid fixed-point
 * iteration for the discriminating kernel and an adversarial
 * trajectory simulator. Deliberately simple and kept free of the
 * engine's covering / graph machinery so the two sides can check each
 * other.
 */

#ifndef RCIS_ORACLE_HPP_
#define RCIS_ORACLE_HPP_

#include <iosfwd>
#include <span>
#include <vector>

#include "rcis/dynamics.hpp"

namespace rcis {

struct GridKernel {
  Box domain;
  std::vector<int> resolution;   // grid cells per dimension
  std::vector<char> membership;  // row-major bitmap
  int iterations_to_fixpoint = 0;

  std::size_t cell_count() const;
  std::size_t retained() const;
  double cell_volume() const;
  double volume() const;

  /* grid index of a point; -1 when outside the domain */
  long index_of(std::span<const double> x) const;
  bool member_at(std::span<const double> x) const;
  Box cell_box(long index) const;

  /* portable grey-map style text grid (P2), 2-D only */
  void write_pgm(std::ostream& os) const;
};

/* Fixed-point iteration Q <- {cells c : for all sampled w there is a
 * sampled u with f(center(c),u,w) landing in a retained cell}. Uses
 * the same U/W samplers as the engine for comparability. */
GridKernel grid_discriminating_kernel(const SystemModel& model, int resolution,
                                      const SamplerConfig& cfg);

enum class ExitPolicy {
  worst_u,        // control also adversarial: fastest exit
  best_u_per_w    // control picks the best sampled reply to each w
};

struct ExitResult {
  bool survived = false;
  int steps = 0;  // first step whose result leaves X (when !survived)
};

/* Roll the dynamics from x0: each step the adversary picks the sampled
 * disturbance minimizing the control's best sampled reply. The margin
 * prefers staying deep inside stay_set (when given) and inside X. */
ExitResult simulate_exit_time(const SystemModel& model,
                              std::span<const double> x0, ExitPolicy policy,
                              int horizon, const SamplerConfig& cfg,
                              const GridKernel* stay_set = nullptr);

}  // namespace rcis

#endif  // RCIS_ORACLE_HPP_
