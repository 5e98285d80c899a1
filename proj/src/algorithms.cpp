#include "rcis/algorithms.hpp"

#include <algorithm>
#include <chrono>
#include <memory>
#include <stdexcept>

namespace rcis {

std::string to_string(RunMode m) {
  return m == RunMode::outer ? "outer" : "inner";
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::empty: return "empty";
    case Termination::fixed_point: return "fixed_point";
    case Termination::inclusion_met: return "inclusion_met";
    case Termination::budget_exhausted: return "budget_exhausted";
  }
  return "?";
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

/* rejected children sorted set = refined.cells() minus selected */
std::vector<CellId> rejected_children(const Covering& refined,
                                      const Covering& selected) {
  std::vector<CellId> out;
  std::set_difference(refined.cells().begin(), refined.cells().end(),
                      selected.cells().begin(), selected.cells().end(),
                      std::back_inserter(out));
  return out;
}

/* the inclusion stopping rule: every discarded child must fit in the
 * union of the retained cells inflated by eps. Candidate cover members
 * are the retained cells inside the child's eps-window. */
bool inclusion_holds(const Covering& selected,
                     const std::vector<CellId>& rejected, double eps) {
  const int n = selected.dim();
  const Box& root = selected.root();
  const double tol = eps * 1e-3;
  for (const CellId& r : rejected) {
    const Box child = selected.cell_bounds(r);
    const Box window = child.inflate(eps);
    std::vector<std::int64_t> a(static_cast<std::size_t>(n)),
        z(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      a[static_cast<std::size_t>(i)] =
          selected.grid_index(i, std::max(window.lo(i), root.lo(i)));
      z[static_cast<std::size_t>(i)] =
          selected.grid_index(i, std::min(window.hi(i), root.hi(i)));
    }
    std::vector<Box> cover;
    CellId id;
    id.coords = a;
    while (true) {
      if (selected.contains_cell(id))
        cover.push_back(selected.cell_bounds(id).inflate(eps));
      int i = n - 1;
      for (; i >= 0; --i) {
        if (id.coords[static_cast<std::size_t>(i)] < z[static_cast<std::size_t>(i)]) {
          ++id.coords[static_cast<std::size_t>(i)];
          for (int j = i + 1; j < n; ++j)
            id.coords[static_cast<std::size_t>(j)] = a[static_cast<std::size_t>(j)];
          break;
        }
      }
      if (i < 0) break;
    }
    if (cover.empty()) return false;
    if (!box_covered_by_union(child, cover, tol)) return false;
  }
  return true;
}

/* cells with some (sampled state, sampled disturbance) pair for which
 * no sampled input keeps the eps-inflated image inside the union */
std::vector<CellId> one_step_failing_cells(const SystemModel& model,
                                           const Covering& cells,
                                           const SamplerConfig& cfg,
                                           double eps) {
  std::vector<CellId> failing;
  const auto w_samples = sample_disturbances(model.W(), cfg);
  for (const CellId& id : cells.cells()) {
    const Box cell = cells.cell_bounds(id);
    const auto u_samples =
        model.has_cell_bounds()
            ? sample_inputs(model.cell_bounds(cell).input, cfg)
            : sample_inputs(model.U(), cfg);
    bool cell_ok = true;
    for (const auto& x : sample_cell(cell, cfg)) {
      for (const auto& w : w_samples) {
        bool ok = false;
        for (const auto& u : u_samples) {
          Box image = Box::point(model.eval(x, u, w));
          if (eps > 0.0) image = image.inflate(eps);
          if (cells.box_inside_retained(image)) {
            ok = true;
            break;
          }
        }
        if (!ok) {
          cell_ok = false;
          break;
        }
      }
      if (!cell_ok) break;
    }
    if (!cell_ok) failing.push_back(id);
  }
  return failing;
}

RunReport run_loop(const SystemModel& nominal, const RunConfig& cfg,
                   RunMode mode) {
  if (cfg.max_iterations < 1)
    throw std::invalid_argument("RunConfig: max_iterations must be >= 1");
  if (mode == RunMode::inner && !(cfg.eps > 0.0))
    throw std::invalid_argument("RunConfig: inner mode requires eps > 0");
  cfg.sampler.validate();

  const SystemModel model = mode == RunMode::inner
                                ? nominal.with_image_inflation(cfg.eps)
                                : nominal;
  const auto w_samples = sample_disturbances(model.W(), cfg.sampler);

  RunReport report;
  report.mode = mode;
  report.eps = mode == RunMode::inner ? cfg.eps : 0.0;
  report.graphs_per_iteration = static_cast<int>(w_samples.size());

  const auto t_start = Clock::now();
  Covering current = Covering::root_covering(model.X());
  std::unique_ptr<Covering> previous;        // covering before the last round
  std::vector<CellId> last_rejected;
  bool have_round = false;

  /* A round that discards nothing makes the covering a point-set fixed
   * point of one level, but coarse levels reach that state spuriously
   * (cells wider than the dynamics' step always chain into each other).
   * Before stopping on an unchanged covering, certify it: every sampled
   * state must have an admissible reply that keeps the nominal image
   * inside the union. Runs only on no-discard rounds. */
  auto certified_stable = [&](const Covering& covering) {
    return one_step_invariance_check(model, covering, cfg.sampler, 0.0)
               .pass_fraction == 1.0;
  };

  report.termination = Termination::budget_exhausted;
  for (int k = 1; k <= cfg.max_iterations; ++k) {
    /* termination checks against the two most recent coverings */
    if (current.empty()) {
      report.termination = Termination::empty;
      break;
    }
    if (have_round) {
      if (mode == RunMode::inner) {
        if (last_rejected.empty()
                ? certified_stable(current)
                : inclusion_holds(current, last_rejected, cfg.eps)) {
          report.termination = Termination::inclusion_met;
          break;
        }
      } else {
        if (coverings_equal_as_sets(*previous, current) &&
            certified_stable(current)) {
          report.termination = Termination::fixed_point;
          break;
        }
      }
    }

    const auto t_iter = Clock::now();
    Covering refined = current.subdivided();
    auto shared = std::make_shared<const Covering>(refined);

    std::vector<SymbolicImage> graphs;
    graphs.reserve(w_samples.size());
    std::size_t edge_total = 0;
    for (const auto& w : w_samples) {
      graphs.push_back(
          build_symbolic_image(model, shared, w, cfg.sampler, cfg.method));
      edge_total += graphs.back().edge_count();
    }

    const auto t_select = Clock::now();
    std::vector<CellId> kept = robust_select(graphs, cfg.refine_level);
    Covering selected = refined.with_cells(std::move(kept));
    const double select_seconds = seconds_since(t_select);

    last_rejected = rejected_children(refined, selected);
    previous = std::make_unique<Covering>(std::move(current));
    current = std::move(selected);
    have_round = true;

    IterationRecord rec;
    rec.iteration = k;
    rec.cell_count = current.size();
    rec.diameter = current.diameter();
    rec.edge_total = edge_total;
    rec.selection_seconds = select_seconds;
    rec.wall_seconds = seconds_since(t_iter);
    report.records.push_back(rec);
    if (cfg.record_snapshots)
      report.snapshots.push_back(CellSetSnapshot{current, k, current.diameter()});
    if (cfg.progress) cfg.progress(rec);
  }

  report.iterations_completed = static_cast<int>(report.records.size());

  if (mode == RunMode::inner) {
    /* certification prune: drop cells the validator rejects until the
     * remaining union passes, so the result is one-step invariant at
     * the sampling densities (Definition-2 semantics, no ball) */
    while (!current.empty()) {
      const std::vector<CellId> failing =
          one_step_failing_cells(model, current, cfg.sampler, 0.0);
      if (failing.empty()) break;
      report.pruned_cells += failing.size();
      std::vector<CellId> kept;
      std::set_difference(current.cells().begin(), current.cells().end(),
                          failing.begin(), failing.end(),
                          std::back_inserter(kept));
      current = current.with_cells(std::move(kept));
    }
  }

  report.final_covering = std::move(current);
  report.total_seconds = seconds_since(t_start);
  return report;
}

}  // namespace

RunReport run_outer(const SystemModel& model, const RunConfig& cfg) {
  return run_loop(model, cfg, RunMode::outer);
}

RunReport run_inner(const SystemModel& model, const RunConfig& cfg) {
  return run_loop(model, cfg, RunMode::inner);
}

InvarianceCheckReport one_step_invariance_check(const SystemModel& model,
                                                const Covering& cells,
                                                const SamplerConfig& cfg,
                                                double eps) {
  cfg.validate();
  InvarianceCheckReport report;
  if (cells.empty()) {
    report.empty_set = true;
    report.pass_fraction = 1.0;
    return report;
  }
  const auto w_samples = sample_disturbances(model.W(), cfg);

  for (const CellId& id : cells.cells()) {
    const Box cell = cells.cell_bounds(id);
    const auto u_samples =
        model.has_cell_bounds()
            ? sample_inputs(model.cell_bounds(cell).input, cfg)
            : sample_inputs(model.U(), cfg);
    for (const auto& x : sample_cell(cell, cfg)) {
      for (const auto& w : w_samples) {
        ++report.checks;
        bool ok = false;
        for (const auto& u : u_samples) {
          Box image = Box::point(model.eval(x, u, w));
          if (eps > 0.0) image = image.inflate(eps);
          if (cells.box_inside_retained(image)) {
            ok = true;
            break;
          }
        }
        if (!ok) {
          ++report.failures;
          if (report.witnesses.size() < 10)
            report.witnesses.push_back(InvarianceWitness{x, w});
        }
      }
    }
  }
  report.pass_fraction =
      report.checks == 0
          ? 1.0
          : 1.0 - static_cast<double>(report.failures) /
                      static_cast<double>(report.checks);
  return report;
}

bool report_unions_nested(const RunReport& report) {
  const Covering* prev = nullptr;
  for (const CellSetSnapshot& s : report.snapshots) {
    if (prev && !union_subset_of(s.covering, *prev)) return false;
    prev = &s.covering;
  }
  return true;
}

}  // namespace rcis
