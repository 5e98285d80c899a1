/*
 * dynamics.hpp
 *
 * System models with constraint boxes, point and interval evaluation,
 * cell / input / disturbance samplers, and the input transformation
 * that cancels disturbances of input- and disturbance-affine systems.
 */

#ifndef RCIS_DYNAMICS_HPP_
#define RCIS_DYNAMICS_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rcis/expression.hpp"
#include "rcis/geometry.hpp"

namespace rcis {

enum class CellStrategy { uniform, boundary, center, random };
enum class DisturbanceMode { vertices, grid };

struct SamplerConfig {
  CellStrategy cell_strategy = CellStrategy::boundary;
  int cell_samples = 10;
  int input_samples = 5;
  DisturbanceMode disturbance_mode = DisturbanceMode::vertices;
  int disturbance_samples_per_dim = 2;
  std::uint64_t rng_seed = 0;

  void validate() const;
};

/* points inside cell b according to the configured strategy:
 *   center   - the centroid
 *   uniform  - a regular interior lattice (k^n points, k = floor(s^1/n))
 *   boundary - points spread over the faces, inset 1e-9 * width so they
 *              stay inside the half-open cell, face-interior positions
 *   random   - seeded; the stream is derived from the seed and the cell
 *              bounds, so results do not depend on evaluation order */
std::vector<std::vector<double>> sample_cell(const Box& b,
                                             const SamplerConfig& cfg);

/* input discretization: endpoint-inclusive lattice with
 * cfg.input_samples points per dimension (center when 1) */
std::vector<std::vector<double>> sample_inputs(const Box& U,
                                               const SamplerConfig& cfg);

/* disturbance discretization: the 2^q vertices of W (deduplicated for
 * degenerate faces), or a full lattice including corners in grid mode */
std::vector<std::vector<double>> sample_disturbances(const Box& W,
                                                     const SamplerConfig& cfg);

/* per-cell admissible input / disturbance boxes, used when the input
 * transformation of a state-dependent system must be bounded online */
struct CellBounds {
  Box input;
  Box disturbance;
};
using CellBoundsFn = std::function<CellBounds(const Box& cell)>;

/* Evaluatable dynamics x+ = f(x,u,w) together with the constraint
 * boxes. Immutable after construction; eval is pure. */
class SystemModel {
public:
  using MapFn = std::function<std::vector<double>(
      std::span<const double>, std::span<const double>, std::span<const double>)>;

  SystemModel(std::string name, int state_dim, int input_dim,
              int disturbance_dim, MapFn map, Box X, Box U, Box W,
              double image_inflation = 0.0);

  /* model backed by expression trees; enables the interval method */
  static SystemModel from_expressions(std::string name,
                                      const std::vector<std::string>& exprs,
                                      int input_dim, int disturbance_dim,
                                      Box X, Box U, Box W,
                                      double image_inflation = 0.0);

  const std::string& name() const { return name_; }
  int state_dim() const { return n_; }
  int input_dim() const { return m_; }
  int disturbance_dim() const { return q_; }
  const Box& X() const { return X_; }
  const Box& U() const { return U_; }
  const Box& W() const { return W_; }
  double image_inflation() const { return image_inflation_; }

  /* f(x,u,w); throws EvalError naming the coordinate on a non-finite
   * result. Image inflation is not applied here - the graph builder
   * inflates geometrically. */
  std::vector<double> eval(std::span<const double> x, std::span<const double> u,
                           std::span<const double> w) const;

  bool has_expressions() const { return field_ != nullptr; }
  const ExpressionField& expressions() const;

  /* natural interval extension over (xbox, ubox) at disturbance point
   * w; requires an expression-defined model */
  Box eval_interval(const Box& xbox, const Box& ubox,
                    std::span<const double> w) const;

  bool has_cell_bounds() const { return static_cast<bool>(cell_bounds_); }
  CellBounds cell_bounds(const Box& cell) const { return cell_bounds_(cell); }

  SystemModel with_image_inflation(double eps) const;
  SystemModel with_boxes(std::optional<Box> X, std::optional<Box> U,
                         std::optional<Box> W) const;
  SystemModel with_cell_bounds(CellBoundsFn fn) const;

private:
  std::string name_;
  int n_, m_, q_;
  MapFn map_;
  Box X_, U_, W_;
  double image_inflation_ = 0.0;
  std::shared_ptr<const ExpressionField> field_;
  CellBoundsFn cell_bounds_;
};

/* expression-defined model; alias of SystemModel::from_expressions
 * with dimensions inferred from the boxes */
SystemModel parse_expression_system(const std::vector<std::string>& exprs,
                                    const Box& X, const Box& U, const Box& W);

/* Input- and disturbance-affine structure x+ = f0(x) + g(x)u + h(x)w.
 * Matrix fields are callables of the state; constant fields are
 * flagged so bounds can be computed offline. */
struct AffineParts {
  int n = 0;  // state dimension
  int m = 0;  // input dimension
  int q = 0;  // disturbance dimension
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> f0;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> g;  // n x m
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> h;  // n x q
  bool g_constant = false;
  bool h_constant = false;

  /* elementwise lo/hi enclosures of g, h over a state box; required
   * only for state-dependent fields that go through the transform */
  using IntervalMatrixFn =
      std::function<std::pair<Eigen::MatrixXd, Eigen::MatrixXd>(const Box&)>;
  IntervalMatrixFn g_interval;
  IntervalMatrixFn h_interval;

  std::vector<double> eval(std::span<const double> x, std::span<const double> u,
                           std::span<const double> w) const;
};

AffineParts constant_affine_parts(const Eigen::MatrixXd& A,
                                  const Eigen::MatrixXd& B,
                                  const Eigen::MatrixXd& G);

/* append constant columns to g; the added inputs are constrained to
 * {0}, which leaves the dynamics unchanged */
AffineParts augment_inputs(const AffineParts& parts,
                           const std::vector<std::vector<double>>& added_columns);
Box augment_input_box(const Box& U, std::size_t added);

struct TransformReport {
  /* admissible box of the transformed input v, split into the
   * components that remain controls and those that are disturbances */
  Box v_control;
  Box v_disturbance;
  std::vector<int> control_components;      // indices into v
  std::vector<int> disturbance_components;  // indices into v
  double g_condition_estimate = 0.0;        // 1-norm condition, constant g
  bool per_cell = false;                    // bounds vary with the cell
};

struct TransformResult {
  SystemModel model;
  TransformReport report;
};

/* Cancel disturbances via u = -g(x)^{-1} h(x) w + v, giving
 * x+ = f0(x) + g(x) v. For constant g the v-bounds are computed
 * offline by robustly shrinking U against g^{-1} h W; zero-width input
 * components stay disturbances. State-dependent g produces per-cell
 * bounds evaluated online through interval Gaussian elimination; the
 * transformed model then carries a cell-bounds callback. Throws on a
 * singular g with a hint to augment the inputs first. */
TransformResult cancel_disturbance(const AffineParts& parts, const Box& X,
                                   const Box& U, const Box& W);

}  // namespace rcis

#endif  // RCIS_DYNAMICS_HPP_
