#include <memory>
#include <set>
#include <sstream>

#include "doctest.h"
#include "rcis/symbolic_image.hpp"
#include "rcis/systems.hpp"

using namespace rcis;

namespace {

std::shared_ptr<const Covering> grid16() {
  Covering c = Covering::root_covering(Box({-2, -2}, {2, 2}));
  for (int i = 0; i < 4; ++i) c = c.subdivided();
  return std::make_shared<const Covering>(std::move(c));
}

std::set<std::vector<std::int64_t>> successor_coords(const SymbolicImage& g,
                                                     const CellId& src) {
  std::set<std::vector<std::int64_t>> out;
  const auto idx = g.covering().index_of(src);
  REQUIRE(idx.has_value());
  for (const auto s : g.successors(*idx)) out.insert(g.cell_of(s).coords);
  return out;
}

}  // namespace

TEST_CASE("image of a cell under the shift map") {
  const SystemModel shift = make_builtin_system("shift2d");
  SamplerConfig cfg;
  cfg.cell_strategy = CellStrategy::center;
  cfg.cell_samples = 1;

  /* the center (-1.5,-1.5) shifts to the origin */
  const Box cell({-2, -2}, {-1, -1});
  const auto images =
      image_of_cell(shift, cell, {}, cfg, ImageMethod::sampling);
  REQUIRE(images.size() == 1);
  CHECK(images[0] == Box::point({0.0, 0.0}));

  const auto inflated = image_of_cell(shift.with_image_inflation(0.001), cell,
                                      {}, cfg, ImageMethod::sampling);
  CHECK(inflated[0] == Box({-0.001, -0.001}, {0.001, 0.001}));

  /* the interval image is the whole shifted cell */
  const auto enclosure =
      image_of_cell(shift, cell, {}, cfg, ImageMethod::interval);
  REQUIRE(enclosure.size() == 1);
  CHECK(enclosure[0].lo(0) == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(enclosure[0].hi(0) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("image of a cell for the transformed linear benchmark") {
  const SystemModel model = make_builtin_system("example1_transformed");
  SamplerConfig cfg;
  cfg.cell_strategy = CellStrategy::center;
  cfg.cell_samples = 1;
  cfg.input_samples = 3;  // v1 in {-1.7, 0, 1.7}

  /* degenerate cell pinned at the origin; w = v2 = 0.3 */
  const Box cell({0, 0}, {0, 0});
  const std::vector<double> w{0.3};
  const auto images = image_of_cell(model, cell, w, cfg, ImageMethod::sampling);
  REQUIRE(images.size() == 3);
  /* (x2 + v2, x1 + x2 + v1) at the origin = (0.3, v1); cross-checked
   * against direct evaluation */
  for (std::size_t k = 0; k < 3; ++k) {
    const double v1 = std::vector<double>{-1.7, 0.0, 1.7}[k];
    const auto direct = model.eval(std::vector<double>{0.0, 0.0},
                                   std::vector<double>{v1}, w);
    CHECK(images[k] == Box::point(direct));
    CHECK(direct[0] == doctest::Approx(0.3));
    CHECK(direct[1] == doctest::Approx(v1));
  }
}

TEST_CASE("shift system symbolic image on the 16-cell covering") {
  const SystemModel shift = make_builtin_system("shift2d");
  auto covering = grid16();
  SamplerConfig cfg;  // boundary 10 by default

  for (const ImageMethod method :
       {ImageMethod::sampling, ImageMethod::interval}) {
    const SymbolicImage g = build_symbolic_image(shift, covering, {}, cfg, method);

    /* the [-2,-1]^2 cell maps onto [-0.5,0.5]^2: exactly the four unit
     * cells around the origin */
    const auto succ = successor_coords(g, CellId{{0, 0}});
    CHECK(succ == std::set<std::vector<std::int64_t>>{
                      {1, 1}, {1, 2}, {2, 1}, {2, 2}});

    /* the [1,2]^2 cell maps outside the domain */
    const auto top = g.covering().index_of(CellId{{3, 3}});
    CHECK(g.out_degree(*top) == 0);
  }
}

TEST_CASE("identity map produces self-loops") {
  const SystemModel identity = make_builtin_system("identity");
  auto covering = std::make_shared<const Covering>(
      Covering::root_covering(Box({-1, -1}, {1, 1})));
  SamplerConfig cfg;
  const SymbolicImage g =
      build_symbolic_image(identity, covering, {}, cfg, ImageMethod::sampling);
  REQUIRE(g.vertex_count() == 1);
  CHECK(g.out_degree(0) == 1);
  CHECK(g.successors(0)[0] == 0);
}

TEST_CASE("edges never target discarded cells") {
  const SystemModel shift = make_builtin_system("shift2d");
  Covering all = Covering::root_covering(Box({-2, -2}, {2, 2}));
  for (int i = 0; i < 4; ++i) all = all.subdivided();
  /* discard the four cells around the origin */
  std::vector<CellId> kept;
  for (const CellId& id : all.cells()) {
    const bool near_origin = (id.coords[0] == 1 || id.coords[0] == 2) &&
                             (id.coords[1] == 1 || id.coords[1] == 2);
    if (!near_origin) kept.push_back(id);
  }
  auto covering = std::make_shared<const Covering>(all.with_cells(kept));
  SamplerConfig cfg;
  const SymbolicImage g =
      build_symbolic_image(shift, covering, {}, cfg, ImageMethod::sampling);
  const auto idx = g.covering().index_of(CellId{{0, 0}});
  REQUIRE(idx.has_value());
  CHECK(g.out_degree(*idx) == 0);  // the whole image area was discarded
}

TEST_CASE("interval edges contain sampling edges") {
  const SystemModel model = make_builtin_system("example1_linear");
  Covering c = Covering::root_covering(model.X());
  for (int i = 0; i < 6; ++i) c = c.subdivided();
  auto covering = std::make_shared<const Covering>(std::move(c));
  SamplerConfig cfg;
  const std::vector<double> w{0.3, -0.3};

  const SymbolicImage sampled =
      build_symbolic_image(model, covering, w, cfg, ImageMethod::sampling);
  const SymbolicImage interval =
      build_symbolic_image(model, covering, w, cfg, ImageMethod::interval);
  REQUIRE(sampled.vertex_count() == interval.vertex_count());
  for (std::size_t v = 0; v < sampled.vertex_count(); ++v) {
    const auto si = sampled.successors(v);
    const auto ii = interval.successors(v);
    CHECK(std::includes(ii.begin(), ii.end(), si.begin(), si.end()));
  }
  CHECK(interval.edge_count() >= sampled.edge_count());
}

TEST_CASE("graph determinism and monotone sampling density") {
  const SystemModel model = make_builtin_system("example1_transformed");
  Covering c = Covering::root_covering(model.X());
  for (int i = 0; i < 6; ++i) c = c.subdivided();
  auto covering = std::make_shared<const Covering>(std::move(c));
  const std::vector<double> w{0.3};

  SamplerConfig sparse;
  sparse.cell_strategy = CellStrategy::uniform;
  sparse.cell_samples = 4;   // 2x2 interior lattice
  sparse.input_samples = 3;

  const SymbolicImage a =
      build_symbolic_image(model, covering, w, sparse, ImageMethod::sampling);
  const SymbolicImage b =
      build_symbolic_image(model, covering, w, sparse, ImageMethod::sampling);
  /* byte-for-byte determinism of the adjacency */
  std::ostringstream dump_a, dump_b;
  a.dump_edges(dump_a);
  b.dump_edges(dump_b);
  CHECK(dump_a.str() == dump_b.str());

  /* input lattice {-v,0,v} is nested in the 5-point lattice, cell
   * samples unchanged: edges can only grow */
  SamplerConfig denser_inputs = sparse;
  denser_inputs.input_samples = 5;
  const SymbolicImage c5 = build_symbolic_image(model, covering, w,
                                                denser_inputs,
                                                ImageMethod::sampling);
  for (std::size_t v = 0; v < a.vertex_count(); ++v) {
    const auto sa = a.successors(v);
    const auto sc = c5.successors(v);
    CHECK(std::includes(sc.begin(), sc.end(), sa.begin(), sa.end()));
  }
}

TEST_CASE("inflated image boxes can bridge a cell boundary") {
  /* map sending everything to an exact internal boundary point */
  const SystemModel to_seam = parse_expression_system(
      {"0", "0"}, Box({-2, -2}, {2, 2}), Box::empty_dim(), Box::empty_dim());
  auto covering = grid16();
  SamplerConfig cfg;
  cfg.cell_strategy = CellStrategy::center;
  cfg.cell_samples = 1;

  const SymbolicImage nominal =
      build_symbolic_image(to_seam, covering, {}, cfg, ImageMethod::sampling);
  const SymbolicImage inflated =
      build_symbolic_image(to_seam.with_image_inflation(1e-3), covering, {},
                           cfg, ImageMethod::sampling);
  const auto i0 = covering->index_of(CellId{{0, 0}});
  CHECK(nominal.out_degree(*i0) == 1);   // the upper cell owns the seam
  CHECK(inflated.out_degree(*i0) == 4);  // the ball touches all four
}
