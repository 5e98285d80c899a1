#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "rcis/systems.hpp"

using namespace rcis;

TEST_CASE("builtin evaluation") {
  const SystemModel ex1 = make_builtin_system("example1_linear");
  CHECK(ex1.eval(std::vector<double>{0, 0}, std::vector<double>{0},
                 std::vector<double>{0, 0}) == std::vector<double>{0, 0});
  CHECK(ex1.eval(std::vector<double>{1, 1}, std::vector<double>{1},
                 std::vector<double>{0, 0}) == std::vector<double>{1, 3});

  const SystemModel shift = make_builtin_system("shift2d");
  CHECK(shift.eval(std::vector<double>{-1.5, -1.5}, {}, {}) ==
        std::vector<double>{0, 0});
}

TEST_CASE("non-finite evaluation reports the coordinate") {
  SystemModel bad = SystemModel::from_expressions(
      "bad", {"x1", "x1/(x1-x1)"}, 0, 0, Box({-1, -1}, {1, 1}),
      Box::empty_dim(), Box::empty_dim());
  CHECK_THROWS_AS(bad.eval(std::vector<double>{1.0, 1.0}, {}, {}), EvalError);
}

TEST_CASE("expression systems match hand transcription") {
  const SystemModel shift = parse_expression_system(
      {"x1 + 1.5", "x2 + 1.5"}, Box({-2, -2}, {2, 2}), Box::empty_dim(),
      Box::empty_dim());
  CHECK(shift.eval(std::vector<double>{0.5, -1.0}, {}, {}) ==
        std::vector<double>{2.0, 0.5});

  const SystemModel nominal = parse_expression_system(
      {"x2", "x1 + x2 + u1"}, Box({-5, -5}, {5, 5}), Box({-2}, {2}),
      Box::empty_dim());
  CHECK(nominal.eval(std::vector<double>{1, 2}, std::vector<double>{0.5}, {}) ==
        std::vector<double>{2, 3.5});
}

TEST_CASE("input augmentation is behavior preserving") {
  const AffineParts parts = example1_affine_parts();
  const AffineParts augmented = augment_inputs(parts, {{1.0, 0.0}});
  CHECK(augmented.m == 2);
  const Eigen::MatrixXd g = augmented.g(Eigen::Vector2d::Zero());
  CHECK(g(0, 0) == 0.0);
  CHECK(g(0, 1) == 1.0);
  CHECK(g(1, 0) == 1.0);
  CHECK(g(1, 1) == 0.0);
  CHECK(augment_input_box(Box({-2.0}, {2.0}), 1) == Box({-2.0, 0.0}, {2.0, 0.0}));

  /* empty pattern is the identity */
  const AffineParts same = augment_inputs(parts, {});
  CHECK(same.m == parts.m);

  /* trajectory equality oracle: augmented dynamics with u_a = 0 agree
   * with the original on random points */
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> coord(-5.0, 5.0);
  std::uniform_real_distribution<double> input(-2.0, 2.0);
  std::uniform_real_distribution<double> dist(-0.3, 0.3);
  for (int trial = 0; trial < 20; ++trial) {
    const std::vector<double> x{coord(rng), coord(rng)};
    const std::vector<double> u{input(rng)};
    const std::vector<double> ua{u[0], 0.0};
    const std::vector<double> w{dist(rng), dist(rng)};
    CHECK(parts.eval(x, u, w) == augmented.eval(x, ua, w));
  }
}

TEST_CASE("disturbance cancellation reproduces the linear benchmark bounds") {
  const TransformResult t = example1_transform();
  REQUIRE(t.report.control_components == std::vector<int>{0});
  REQUIRE(t.report.disturbance_components == std::vector<int>{1});
  CHECK(t.report.v_control.lo(0) == -1.7);
  CHECK(t.report.v_control.hi(0) == 1.7);
  CHECK(t.report.v_disturbance.lo(0) == -0.3);
  CHECK(t.report.v_disturbance.hi(0) == 0.3);
  CHECK(t.report.g_condition_estimate == doctest::Approx(1.0));
  CHECK_FALSE(t.report.per_cell);
  CHECK(t.model.input_dim() == 1);
  CHECK(t.model.disturbance_dim() == 1);

  /* the transformed map in closed form: (x2 + v2, x1 + x2 + v1) */
  const auto y = t.model.eval(std::vector<double>{1.0, 2.0},
                              std::vector<double>{0.5},
                              std::vector<double>{-0.2});
  CHECK(y == std::vector<double>{1.8, 3.5});

  /* substitution round-trip: u = v - g^{-1} h w reproduces the
   * original dynamics exactly on random points */
  const AffineParts original = example1_affine_parts();
  const AffineParts augmented = augment_inputs(original, {{1.0, 0.0}});
  Eigen::Matrix2d g;
  g << 0, 1, 1, 0;
  const Eigen::Matrix2d ginv_h = g.inverse() * Eigen::Matrix2d::Identity();
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> coord(-5.0, 5.0);
  std::uniform_real_distribution<double> v1(-1.7, 1.7);
  std::uniform_real_distribution<double> dist(-0.3, 0.3);
  for (int trial = 0; trial < 50; ++trial) {
    const std::vector<double> x{coord(rng), coord(rng)};
    const std::vector<double> w{dist(rng), dist(rng)};
    /* matching disturbance realization: transformed w = v2 requires
     * u_a = v2 - w1 = 0, i.e. v2 = w1 */
    const std::vector<double> v_matched{v1(rng), w[0]};
    const Eigen::Vector2d u_matched =
        Eigen::Vector2d(v_matched[0], v_matched[1]) -
        ginv_h * Eigen::Vector2d(w[0], w[1]);
    CHECK(u_matched(1) == doctest::Approx(0.0).epsilon(1e-15));
    const auto lhs = augmented.eval(
        x, std::vector<double>{u_matched(0), u_matched(1)}, w);
    const auto rhs = t.model.eval(x, std::vector<double>{v_matched[0]},
                                  std::vector<double>{v_matched[1]});
    for (int i = 0; i < 2; ++i)
      CHECK(lhs[static_cast<std::size_t>(i)] ==
            doctest::Approx(rhs[static_cast<std::size_t>(i)]).epsilon(1e-12));
  }
}

TEST_CASE("cancellation edge cases") {
  /* h = 0, g = I: the transform is the identity and v-bounds equal U */
  AffineParts parts = constant_affine_parts(Eigen::Matrix2d::Identity(),
                                            Eigen::Matrix2d::Identity(),
                                            Eigen::Matrix2d::Zero());
  const Box X({-1, -1}, {1, 1});
  const Box U({-1, -1}, {1, 1});
  const Box W({0, 0}, {0, 0});
  const TransformResult t = cancel_disturbance(parts, X, U, W);
  CHECK(t.report.v_control == U);
  CHECK(t.report.disturbance_components.empty());

  /* singular g is rejected with augmentation advice */
  Eigen::Matrix2d singular;
  singular << 1, 0, 1, 0;
  AffineParts bad = constant_affine_parts(Eigen::Matrix2d::Identity(), singular,
                                          Eigen::Matrix2d::Identity());
  CHECK_THROWS_WITH_AS(
      cancel_disturbance(bad, X, U, Box({-0.1, -0.1}, {0.1, 0.1})),
      doctest::Contains("singular"), std::runtime_error);

  /* non-square g is rejected up front */
  const AffineParts column = example1_affine_parts();
  CHECK_THROWS_AS(cancel_disturbance(column, Box({-5, -5}, {5, 5}),
                                     Box({-2.0}, {2.0}),
                                     Box({-0.3, -0.3}, {0.3, 0.3})),
                  std::invalid_argument);
}

TEST_CASE("state-dependent cancellation bounds are sound per cell") {
  /* g(x) = [[2 + 0.5 x1, 0], [0, 2]], h = I */
  AffineParts parts;
  parts.n = 2;
  parts.m = 2;
  parts.q = 2;
  parts.f0 = [](const Eigen::VectorXd& x) { return x; };
  parts.g = [](const Eigen::VectorXd& x) {
    Eigen::Matrix2d g;
    g << 2.0 + 0.5 * x(0), 0.0, 0.0, 2.0;
    return Eigen::MatrixXd(g);
  };
  parts.h = [](const Eigen::VectorXd&) {
    return Eigen::MatrixXd(Eigen::Matrix2d::Identity());
  };
  parts.g_constant = false;
  parts.h_constant = true;
  parts.g_interval = [](const Box& cell) {
    Eigen::Matrix2d lo, hi;
    lo << 2.0 + 0.5 * cell.lo(0), 0.0, 0.0, 2.0;
    hi << 2.0 + 0.5 * cell.hi(0), 0.0, 0.0, 2.0;
    return std::make_pair(Eigen::MatrixXd(lo), Eigen::MatrixXd(hi));
  };
  parts.h_interval = [](const Box&) {
    const Eigen::MatrixXd eye = Eigen::Matrix2d::Identity();
    return std::make_pair(eye, eye);
  };

  const Box X({-1, -1}, {1, 1});
  const Box U({-1, -1}, {1, 1});
  const Box W({-0.2, -0.2}, {0.2, 0.2});
  const TransformResult t = cancel_disturbance(parts, X, U, W);
  CHECK(t.report.per_cell);
  REQUIRE(t.model.has_cell_bounds());

  /* per-cell bound must keep u = v - g(x)^{-1} h w admissible for
   * every x in the cell and w in W */
  const Box cell({0.0, 0.0}, {0.5, 0.5});
  const CellBounds bounds = t.model.cell_bounds(cell);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 400; ++trial) {
    Eigen::Vector2d x(cell.lo(0) + unit(rng) * cell.width(0),
                      cell.lo(1) + unit(rng) * cell.width(1));
    Eigen::Vector2d w(W.lo(0) + unit(rng) * W.width(0),
                      W.lo(1) + unit(rng) * W.width(1));
    Eigen::Vector2d v(bounds.input.lo(0) + unit(rng) * bounds.input.width(0),
                      bounds.input.lo(1) + unit(rng) * bounds.input.width(1));
    const Eigen::Vector2d u = v - parts.g(x).inverse() * parts.h(x) * w;
    for (int i = 0; i < 2; ++i) {
      CHECK(u(i) >= U.lo(i) - 1e-12);
      CHECK(u(i) <= U.hi(i) + 1e-12);
    }
  }
  /* the cell-local box is at least as large as the global one */
  for (int i = 0; i < 2; ++i) {
    CHECK(bounds.input.lo(i) <= t.report.v_control.lo(i) + 1e-12);
    CHECK(bounds.input.hi(i) >= t.report.v_control.hi(i) - 1e-12);
  }
}

TEST_CASE("cell sampling strategies") {
  SamplerConfig cfg;
  const Box cell({0, 0}, {1, 1});

  cfg.cell_strategy = CellStrategy::center;
  CHECK(sample_cell(cell, cfg) ==
        std::vector<std::vector<double>>{{0.5, 0.5}});

  cfg.cell_strategy = CellStrategy::boundary;
  cfg.cell_samples = 8;
  const auto boundary = sample_cell(cell, cfg);
  CHECK(boundary.size() == 8);
  for (const auto& p : boundary) {
    const double m = std::max(std::abs(p[0] - 0.5), std::abs(p[1] - 0.5));
    CHECK(m >= 0.5 - 1e-6);
    CHECK(cell.contains(p));
    CHECK(p[0] < 1.0);  // inside the half-open cell
    CHECK(p[1] < 1.0);
  }

  cfg.cell_strategy = CellStrategy::uniform;
  cfg.cell_samples = 4;
  const auto uniform = sample_cell(Box({0.0}, {1.0}), cfg);
  REQUIRE(uniform.size() == 4);
  CHECK(uniform[0][0] == doctest::Approx(0.1));
  CHECK(uniform[1][0] == doctest::Approx(0.3666666667));
  CHECK(uniform[2][0] == doctest::Approx(0.6333333333));
  CHECK(uniform[3][0] == doctest::Approx(0.9));
  for (std::size_t i = 1; i < uniform.size(); ++i)
    CHECK(uniform[i - 1][0] < uniform[i][0]);

  cfg.cell_strategy = CellStrategy::random;
  cfg.cell_samples = 32;
  cfg.rng_seed = 99;
  const auto random_pts = sample_cell(cell, cfg);
  CHECK(random_pts.size() == 32);
  for (const auto& p : random_pts) CHECK(cell.contains(p));
  /* bit-identical replay */
  CHECK(sample_cell(cell, cfg) == random_pts);
}

TEST_CASE("disturbance sampling") {
  SamplerConfig cfg;
  const auto w3 = sample_disturbances(Box({-0.3, -0.3}, {0.3, 0.3}), cfg);
  CHECK(w3.size() == 4);
  CHECK(w3.front() == std::vector<double>{-0.3, -0.3});
  CHECK(w3.back() == std::vector<double>{0.3, 0.3});

  const auto w4 = sample_disturbances(Box({-0.4, -0.4}, {0.4, 0.4}), cfg);
  CHECK(w4.size() == 4);

  const auto zero = sample_disturbances(Box({0.0, 0.0}, {0.0, 0.0}), cfg);
  CHECK(zero == std::vector<std::vector<double>>{{0.0, 0.0}});

  cfg.disturbance_mode = DisturbanceMode::grid;
  cfg.disturbance_samples_per_dim = 3;
  const auto grid = sample_disturbances(Box({-1.0}, {1.0}), cfg);
  CHECK(grid == std::vector<std::vector<double>>{{-1.0}, {0.0}, {1.0}});
}

TEST_CASE("input sampling is endpoint inclusive") {
  SamplerConfig cfg;
  cfg.input_samples = 5;
  const auto u = sample_inputs(Box({-2.0}, {2.0}), cfg);
  CHECK(u == std::vector<std::vector<double>>{{-2}, {-1}, {0}, {1}, {2}});
  CHECK(sample_inputs(Box::empty_dim(), cfg) ==
        std::vector<std::vector<double>>{{}});
}

TEST_CASE("sampler determinism") {
  SamplerConfig cfg;
  cfg.cell_strategy = CellStrategy::random;
  cfg.cell_samples = 17;
  cfg.rng_seed = 1234;
  const Box cell({-1.5, 2.0}, {-0.5, 3.0});
  const auto a = sample_cell(cell, cfg);
  const auto b = sample_cell(cell, cfg);
  CHECK(a == b);
  /* different cells get different streams */
  const auto c = sample_cell(Box({-0.5, 2.0}, {0.5, 3.0}), cfg);
  CHECK(a != c);
}

TEST_CASE("builtin transformed system matches the pipeline") {
  const SystemModel builtin = make_builtin_system("example1_transformed");
  const TransformResult t = example1_transform();
  CHECK(builtin.U() == t.model.U());
  CHECK(builtin.W() == t.model.W());
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> coord(-5.0, 5.0);
  std::uniform_real_distribution<double> v1(-1.7, 1.7);
  std::uniform_real_distribution<double> v2(-0.3, 0.3);
  for (int trial = 0; trial < 100; ++trial) {
    const std::vector<double> x{coord(rng), coord(rng)};
    const std::vector<double> u{v1(rng)};
    const std::vector<double> w{v2(rng)};
    const auto a = builtin.eval(x, u, w);
    const auto b = t.model.eval(x, u, w);
    for (int i = 0; i < 2; ++i)
      CHECK(a[static_cast<std::size_t>(i)] ==
            doctest::Approx(b[static_cast<std::size_t>(i)]).epsilon(1e-12));
  }
}
