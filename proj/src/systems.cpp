#include "rcis/systems.hpp"

#include <algorithm>
#include <stdexcept>

namespace rcis {

namespace {

Box square(double r) { return Box({-r, -r}, {r, r}); }

SystemModel make_example1_linear() {
  /* x1+ = x2 + w1, x2+ = x1 + x2 + u1 + w2 */
  return SystemModel::from_expressions(
      "example1_linear", {"x2 + w1", "x1 + x2 + u1 + w2"}, 1, 2, square(5.0),
      Box({-2.0}, {2.0}), square(0.3));
}

SystemModel make_example1_transformed() {
  TransformResult t = example1_transform();
  /* same map in closed form, expression-backed for the interval method */
  SystemModel model = SystemModel::from_expressions(
      "example1_transformed", {"x2 + w1", "x1 + x2 + u1"}, 1, 1,
      t.model.X(), t.model.U(), t.model.W());
  return model;
}

SystemModel make_example2_nonlinear() {
  /* sampled double integrator with state-dependent input gain,
   * T = 0.01, mu = 0.9 */
  return SystemModel::from_expressions(
      "example2_nonlinear",
      {"x1 + 0.01*x2 + 0.01*(0.9 + 0.1*x1)*u1 + 0.01*w1",
       "0.01*x1 + x2 + 0.01*(0.9 - 0.4*x2)*u1 + 0.01*w2"},
      1, 2, square(4.0), Box({-2.0}, {2.0}), square(0.4));
}

SystemModel make_shift2d() {
  return SystemModel::from_expressions("shift2d", {"x1 + 1.5", "x2 + 1.5"}, 0,
                                       0, square(2.0), Box::empty_dim(),
                                       Box::empty_dim());
}

SystemModel make_rotation2d() {
  /* rotation by 1 radian; cos(1) and sin(1) to full precision */
  return SystemModel::from_expressions(
      "rotation2d",
      {"0.5403023058681398*x1 - 0.8414709848078965*x2",
       "0.8414709848078965*x1 + 0.5403023058681398*x2"},
      0, 0, square(5.0), Box::empty_dim(), Box::empty_dim());
}

SystemModel make_identity() {
  return SystemModel::from_expressions("identity", {"x1", "x2"}, 0, 0,
                                       square(1.0), Box::empty_dim(),
                                       Box::empty_dim());
}

}  // namespace

const std::vector<std::string>& builtin_system_names() {
  static const std::vector<std::string> names = {
      "example1_linear", "example1_transformed", "example2_nonlinear",
      "shift2d",         "rotation2d",           "identity"};
  return names;
}

bool is_builtin_system(const std::string& name) {
  const auto& names = builtin_system_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

SystemModel make_builtin_system(const std::string& name) {
  if (name == "example1_linear") return make_example1_linear();
  if (name == "example1_transformed") return make_example1_transformed();
  if (name == "example2_nonlinear") return make_example2_nonlinear();
  if (name == "shift2d") return make_shift2d();
  if (name == "rotation2d") return make_rotation2d();
  if (name == "identity") return make_identity();
  throw std::invalid_argument("unknown builtin system '" + name + "'");
}

AffineParts example1_affine_parts() {
  Eigen::MatrixXd A(2, 2), B(2, 1), G(2, 2);
  A << 0.0, 1.0, 1.0, 1.0;
  B << 0.0, 1.0;
  G << 1.0, 0.0, 0.0, 1.0;
  return constant_affine_parts(A, B, G);
}

TransformResult example1_transform() {
  const AffineParts parts = example1_affine_parts();
  const AffineParts augmented = augment_inputs(parts, {{1.0, 0.0}});
  const Box U = augment_input_box(Box({-2.0}, {2.0}), 1);
  return cancel_disturbance(augmented, Box({-5.0, -5.0}, {5.0, 5.0}), U,
                            Box({-0.3, -0.3}, {0.3, 0.3}));
}

}  // namespace rcis
