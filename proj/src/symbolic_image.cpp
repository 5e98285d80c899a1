#include "rcis/symbolic_image.hpp"

#include <algorithm>
#include <cstdlib>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace rcis {

std::vector<Box> image_of_cell(const SystemModel& model, const Box& cell,
                               std::span<const double> w,
                               const SamplerConfig& cfg, ImageMethod method) {
  const double eps = model.image_inflation();
  const Box ubox = model.has_cell_bounds() ? model.cell_bounds(cell).input
                                           : model.U();
  const auto inputs = sample_inputs(ubox, cfg);
  std::vector<Box> out;
  if (method == ImageMethod::interval) {
    out.reserve(inputs.size());
    for (const auto& u : inputs) {
      const Box enclosure =
          model.eval_interval(cell, Box::point(u), w);
      out.push_back(eps > 0.0 ? enclosure.inflate(eps) : enclosure);
    }
    return out;
  }
  const auto points = sample_cell(cell, cfg);
  out.reserve(points.size() * inputs.size());
  for (const auto& x : points)
    for (const auto& u : inputs) {
      Box image = Box::point(model.eval(x, u, w));
      out.push_back(eps > 0.0 ? image.inflate(eps) : std::move(image));
    }
  return out;
}

SymbolicImage::SymbolicImage(std::shared_ptr<const Covering> covering,
                             std::vector<double> w,
                             std::vector<std::vector<std::uint32_t>> adjacency)
    : covering_(std::move(covering)), w_(std::move(w)), adj_(std::move(adjacency)) {
  if (adj_.size() != covering_->size())
    throw std::invalid_argument(
        "SymbolicImage: adjacency size must match the covering");
  for (auto& row : adj_) {
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
    if (!row.empty() && row.back() >= covering_->size())
      throw std::invalid_argument("SymbolicImage: successor index out of range");
  }
}

std::size_t SymbolicImage::edge_count() const {
  std::size_t total = 0;
  for (const auto& row : adj_) total += row.size();
  return total;
}

void SymbolicImage::dump_edges(std::ostream& os) const {
  auto print_cell = [&os](const CellId& id) {
    os << '(';
    for (std::size_t i = 0; i < id.coords.size(); ++i) {
      if (i) os << ',';
      os << id.coords[i];
    }
    os << ')';
  };
  for (std::size_t i = 0; i < adj_.size(); ++i)
    for (const std::uint32_t j : adj_[i]) {
      print_cell(cell_of(i));
      os << " -> ";
      print_cell(cell_of(j));
      os << '\n';
    }
}

unsigned engine_thread_count() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("RCIS_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1 && static_cast<unsigned>(v) < hw) hw = static_cast<unsigned>(v);
  }
  return hw;
}

namespace {

/* successors of one cell: grid index windows of each image box,
 * restricted to retained cells */
void cell_successors(const Covering& cov, const SystemModel& model,
                     const Box& cell_box, std::span<const double> w,
                     const SamplerConfig& cfg, ImageMethod method,
                     std::vector<std::uint32_t>& out) {
  const int n = cov.dim();
  const Box& root = cov.root();
  const auto boxes = image_of_cell(model, cell_box, w, cfg, method);
  std::vector<std::int64_t> a(static_cast<std::size_t>(n)),
      z(static_cast<std::size_t>(n));
  CellId id;
  id.coords.resize(static_cast<std::size_t>(n));
  for (const Box& b : boxes) {
    bool outside = false;
    for (int i = 0; i < n && !outside; ++i)
      if (b.hi(i) < root.lo(i) || b.lo(i) > root.hi(i)) outside = true;
    if (outside) continue;
    for (int i = 0; i < n; ++i) {
      a[static_cast<std::size_t>(i)] =
          cov.grid_index(i, std::max(b.lo(i), root.lo(i)));
      z[static_cast<std::size_t>(i)] =
          cov.grid_index(i, std::min(b.hi(i), root.hi(i)));
    }
    id.coords = a;
    while (true) {
      if (auto idx = cov.index_of(id))
        out.push_back(static_cast<std::uint32_t>(*idx));
      int i = n - 1;
      for (; i >= 0; --i) {
        if (id.coords[static_cast<std::size_t>(i)] <
            z[static_cast<std::size_t>(i)]) {
          ++id.coords[static_cast<std::size_t>(i)];
          for (int j = i + 1; j < n; ++j)
            id.coords[static_cast<std::size_t>(j)] = a[static_cast<std::size_t>(j)];
          break;
        }
      }
      if (i < 0) break;
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
}

}  // namespace

SymbolicImage build_symbolic_image(const SystemModel& model,
                                   std::shared_ptr<const Covering> covering,
                                   std::span<const double> w,
                                   const SamplerConfig& cfg,
                                   ImageMethod method) {
  if (covering->empty())
    throw std::invalid_argument("build_symbolic_image: empty covering");
  if (method == ImageMethod::interval && !model.has_expressions())
    throw std::invalid_argument(
        "build_symbolic_image: the interval method requires an "
        "expression-defined model");
  cfg.validate();

  const Covering& cov = *covering;
  const std::size_t l = cov.size();
  std::vector<std::vector<std::uint32_t>> adj(l);

  const unsigned workers =
      std::min<unsigned>(engine_thread_count(),
                         static_cast<unsigned>(std::max<std::size_t>(l, 1)));
  auto run_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i)
      cell_successors(cov, model, cov.cell_bounds(cov.cells()[i]), w, cfg,
                      method, adj[i]);
  };
  if (workers <= 1 || l < 64) {
    run_range(0, l);
  } else {
    /* fixed slice per worker; each writes its own adjacency rows, so
     * the merged result is independent of scheduling */
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    const std::size_t chunk = (l + workers - 1) / workers;
    for (unsigned t = 0; t < workers; ++t) {
      const std::size_t begin = static_cast<std::size_t>(t) * chunk;
      const std::size_t end = std::min(l, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back([&, t, begin, end] {
        try {
          run_range(begin, end);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (const auto& err : errors)
      if (err) std::rethrow_exception(err);
  }

  return SymbolicImage(std::move(covering),
                       std::vector<double>(w.begin(), w.end()), std::move(adj));
}

}  // namespace rcis
