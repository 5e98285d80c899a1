#include <sstream>

#include "doctest.h"
#include "rcis/algorithms.hpp"
#include "rcis/oracle.hpp"
#include "rcis/systems.hpp"
#include "support.hpp"

using namespace rcis;
using rcis_tests::symmetric_difference_volume;

TEST_CASE("contraction keeps the whole domain") {
  const SystemModel half = parse_expression_system(
      {"0.5*x1", "0.5*x2"}, Box({-1, -1}, {1, 1}), Box::empty_dim(),
      Box::empty_dim());
  SamplerConfig cfg;
  const GridKernel kernel = grid_discriminating_kernel(half, 16, cfg);
  CHECK(kernel.retained() == kernel.cell_count());
  CHECK(kernel.volume() == doctest::Approx(4.0));
}

TEST_CASE("shift map has an empty kernel") {
  const SystemModel shift = make_builtin_system("shift2d");
  SamplerConfig cfg;
  const GridKernel kernel = grid_discriminating_kernel(shift, 16, cfg);
  CHECK(kernel.retained() == 0);
  CHECK(kernel.volume() == 0.0);
}

TEST_CASE("overwhelming disturbance gives an empty kernel") {
  const SystemModel model = make_builtin_system("example1_linear");
  const SystemModel wild =
      model.with_boxes(std::nullopt, std::nullopt, Box({-5, -5}, {5, 5}));
  SamplerConfig cfg;
  /* resolution 0.1 over [-5,5]^2 */
  const GridKernel kernel = grid_discriminating_kernel(wild, 100, cfg);
  CHECK(kernel.retained() == 0);
}

TEST_CASE("exit times of the shift map") {
  const SystemModel shift = make_builtin_system("shift2d");
  SamplerConfig cfg;
  const ExitResult r = simulate_exit_time(shift, std::vector<double>{0.0, 0.0},
                                          ExitPolicy::best_u_per_w, 100, cfg);
  CHECK_FALSE(r.survived);
  CHECK(r.steps == 2);  // (1.5,1.5) then (3,3) outside

  /* every shift cell's center leaves within three steps */
  Covering c = Covering::root_covering(shift.X());
  for (int i = 0; i < 4; ++i) c = c.subdivided();
  for (const CellId& id : c.cells()) {
    const ExitResult e =
        simulate_exit_time(shift, c.cell_bounds(id).center(),
                           ExitPolicy::best_u_per_w, 100, cfg);
    CHECK_FALSE(e.survived);
    CHECK(e.steps <= 3);
  }
}

TEST_CASE("identity survives any horizon") {
  const SystemModel identity = make_builtin_system("identity");
  SamplerConfig cfg;
  const ExitResult r = simulate_exit_time(
      identity, std::vector<double>{0.3, -0.7}, ExitPolicy::best_u_per_w, 1000,
      cfg);
  CHECK(r.survived);
  const ExitResult w = simulate_exit_time(
      identity, std::vector<double>{0.3, -0.7}, ExitPolicy::worst_u, 1000, cfg);
  CHECK(w.survived);
}

TEST_CASE("kernel members survive adversarial play inside the kernel") {
  const SystemModel model = make_builtin_system("example1_linear");
  SamplerConfig cfg;
  const GridKernel kernel = grid_discriminating_kernel(model, 40, cfg);
  REQUIRE(kernel.retained() > 0);
  const int horizon = 10 * kernel.iterations_to_fixpoint;

  std::size_t checked = 0;
  for (std::size_t c = 0; c < kernel.cell_count() && checked < 150; ++c) {
    if (!kernel.membership[c]) continue;
    ++checked;
    const auto x0 = kernel.cell_box(static_cast<long>(c)).center();
    const ExitResult r = simulate_exit_time(
        model, x0, ExitPolicy::best_u_per_w, horizon, cfg, &kernel);
    CHECK(r.survived);
  }
  CHECK(checked > 0);
}

TEST_CASE("engine and oracle agree increasingly well with depth") {
  const SystemModel model = make_builtin_system("example1_linear");
  SamplerConfig sampler;
  const GridKernel kernel = grid_discriminating_kernel(model, 50, sampler);
  REQUIRE(kernel.retained() > 0);

  double previous = std::numeric_limits<double>::infinity();
  for (const int depth : {8, 10, 12}) {
    RunConfig cfg;
    cfg.mode = RunMode::outer;
    cfg.max_iterations = depth;
    cfg.record_snapshots = false;
    const RunReport report = run_outer(model, cfg);
    REQUIRE(report.iterations_completed == depth);
    const double sym =
        symmetric_difference_volume(report.final_covering, kernel);
    CHECK(sym <= previous + 1e-9);
    previous = sym;
  }
}

TEST_CASE("pgm export shape") {
  const SystemModel half = parse_expression_system(
      {"0.5*x1", "0.5*x2"}, Box({-1, -1}, {1, 1}), Box::empty_dim(),
      Box::empty_dim());
  SamplerConfig cfg;
  const GridKernel kernel = grid_discriminating_kernel(half, 4, cfg);
  std::ostringstream os;
  kernel.write_pgm(os);
  CHECK(os.str().substr(0, 2) == "P2");
  CHECK(os.str().find("4 4") != std::string::npos);
}
