#include "rcis/invariance.hpp"

#include <algorithm>
#include <stdexcept>

namespace rcis {

namespace {

/* member mask over vertex indices, optionally restricted to an
 * allowed-vertex mask (edges into or out of excluded vertices are
 * ignored) */
std::vector<char> member_mask_restricted(const SymbolicImage& g,
                                         const std::vector<char>* allowed) {
  const std::size_t nv = g.vertex_count();
  const std::uint32_t kUndefined = 0xffffffffu;

  auto vertex_allowed = [&](std::uint32_t v) {
    return allowed == nullptr || (*allowed)[v] != 0;
  };

  /* iterative Tarjan */
  std::vector<std::uint32_t> index(nv, kUndefined), lowlink(nv, 0);
  std::vector<char> on_stack(nv, 0);
  std::vector<std::uint32_t> stack;
  std::vector<std::uint32_t> comp_of(nv, kUndefined);
  std::vector<char> comp_recurrent;
  std::vector<std::uint32_t> comp_size;
  std::uint32_t next_index = 0;

  struct Frame {
    std::uint32_t v;
    std::size_t edge;
  };
  std::vector<Frame> call;

  std::vector<char> self_loop(nv, 0);
  for (std::uint32_t v = 0; v < nv; ++v)
    for (std::uint32_t s : g.successors(v))
      if (s == v) self_loop[v] = 1;

  for (std::uint32_t root = 0; root < nv; ++root) {
    if (!vertex_allowed(root) || index[root] != kUndefined) continue;
    call.push_back({root, 0});
    index[root] = lowlink[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      Frame& f = call.back();
      const auto succ = g.successors(f.v);
      bool descended = false;
      while (f.edge < succ.size()) {
        const std::uint32_t to = succ[f.edge++];
        if (!vertex_allowed(to)) continue;
        if (index[to] == kUndefined) {
          index[to] = lowlink[to] = next_index++;
          stack.push_back(to);
          on_stack[to] = 1;
          call.push_back({to, 0});
          descended = true;
          break;
        }
        if (on_stack[to]) lowlink[f.v] = std::min(lowlink[f.v], index[to]);
      }
      if (descended) continue;
      /* f.v finished */
      if (lowlink[f.v] == index[f.v]) {
        const std::uint32_t comp = static_cast<std::uint32_t>(comp_size.size());
        std::uint32_t size = 0;
        bool recur = false;
        while (true) {
          const std::uint32_t u = stack.back();
          stack.pop_back();
          on_stack[u] = 0;
          comp_of[u] = comp;
          ++size;
          if (self_loop[u]) recur = true;
          if (u == f.v) break;
        }
        comp_size.push_back(size);
        comp_recurrent.push_back(recur || size >= 2);
      }
      const std::uint32_t child = f.v;
      call.pop_back();
      if (!call.empty())
        lowlink[call.back().v] = std::min(lowlink[call.back().v], lowlink[child]);
    }
  }

  /* members = recurrent vertices plus backward reachability from them */
  std::vector<std::vector<std::uint32_t>> reverse(nv);
  for (std::uint32_t v = 0; v < nv; ++v) {
    if (!vertex_allowed(v)) continue;
    for (std::uint32_t s : g.successors(v))
      if (vertex_allowed(s)) reverse[s].push_back(v);
  }
  std::vector<char> member(nv, 0);
  std::vector<std::uint32_t> frontier;
  for (std::uint32_t v = 0; v < nv; ++v)
    if (vertex_allowed(v) && comp_of[v] != kUndefined &&
        comp_recurrent[comp_of[v]]) {
      member[v] = 1;
      frontier.push_back(v);
    }
  while (!frontier.empty()) {
    const std::uint32_t v = frontier.back();
    frontier.pop_back();
    for (std::uint32_t p : reverse[v])
      if (!member[p]) {
        member[p] = 1;
        frontier.push_back(p);
      }
  }
  return member;
}

}  // namespace

SccResult strongly_connected_components(const SymbolicImage& g) {
  const std::size_t nv = g.vertex_count();
  const std::uint32_t kUndefined = 0xffffffffu;
  SccResult out;
  out.component_of.assign(nv, kUndefined);

  std::vector<std::uint32_t> index(nv, kUndefined), lowlink(nv, 0);
  std::vector<char> on_stack(nv, 0);
  std::vector<std::uint32_t> stack;
  std::uint32_t next_index = 0;

  std::vector<char> self_loop(nv, 0);
  for (std::uint32_t v = 0; v < nv; ++v)
    for (std::uint32_t s : g.successors(v))
      if (s == v) self_loop[v] = 1;

  struct Frame {
    std::uint32_t v;
    std::size_t edge;
  };
  std::vector<Frame> call;

  for (std::uint32_t root = 0; root < nv; ++root) {
    if (index[root] != kUndefined) continue;
    call.push_back({root, 0});
    index[root] = lowlink[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      Frame& f = call.back();
      const auto succ = g.successors(f.v);
      bool descended = false;
      while (f.edge < succ.size()) {
        const std::uint32_t to = succ[f.edge++];
        if (index[to] == kUndefined) {
          index[to] = lowlink[to] = next_index++;
          stack.push_back(to);
          on_stack[to] = 1;
          call.push_back({to, 0});
          descended = true;
          break;
        }
        if (on_stack[to]) lowlink[f.v] = std::min(lowlink[f.v], index[to]);
      }
      if (descended) continue;
      if (lowlink[f.v] == index[f.v]) {
        std::vector<std::uint32_t> comp;
        bool recur = false;
        while (true) {
          const std::uint32_t u = stack.back();
          stack.pop_back();
          on_stack[u] = 0;
          out.component_of[u] = static_cast<std::uint32_t>(out.components.size());
          comp.push_back(u);
          if (self_loop[u]) recur = true;
          if (u == f.v) break;
        }
        std::sort(comp.begin(), comp.end());
        out.recurrent.push_back(recur || comp.size() >= 2);
        out.components.push_back(std::move(comp));
      }
      const std::uint32_t child = f.v;
      call.pop_back();
      if (!call.empty())
        lowlink[call.back().v] = std::min(lowlink[call.back().v], lowlink[child]);
    }
  }
  return out;
}

InvariantVertexSet forward_invariant_vertices(const SymbolicImage& g) {
  InvariantVertexSet out;
  out.member_mask = member_mask_restricted(g, nullptr);

  const SccResult scc = strongly_connected_components(g);
  for (std::uint32_t v = 0; v < g.vertex_count(); ++v) {
    if (!out.member_mask[v]) continue;
    out.members.push_back(g.cell_of(v));
    if (scc.recurrent[scc.component_of[v]])
      out.recurrent.push_back(g.cell_of(v));
    else
      out.feeder.push_back(g.cell_of(v));
  }
  /* covering order is already sorted */
  return out;
}

std::vector<CellId> robust_select(std::span<const SymbolicImage> graphs,
                                  bool refine_level) {
  if (graphs.empty())
    throw std::invalid_argument("robust_select: needs at least one graph");
  const Covering& cov = graphs.front().covering();
  for (const SymbolicImage& g : graphs)
    if (&g.covering() != &cov && g.covering().cells() != cov.cells())
      throw std::invalid_argument("robust_select: graphs over different coverings");

  const std::size_t nv = cov.size();
  std::vector<char> selected(nv, 1);

  bool changed = true;
  bool first = true;
  while (changed) {
    changed = false;
    std::vector<char> next(nv, 1);
    for (const SymbolicImage& g : graphs) {
      const std::vector<char> member =
          member_mask_restricted(g, first ? nullptr : &selected);
      for (std::size_t v = 0; v < nv; ++v)
        if (!member[v]) next[v] = 0;
    }
    if (first) {
      /* the plain selection step; refinement re-restricts below */
      selected = next;
      first = false;
      changed = refine_level;
      continue;
    }
    for (std::size_t v = 0; v < nv; ++v) {
      if (selected[v] && !next[v]) {
        changed = true;
      }
      next[v] = next[v] && selected[v];
    }
    selected = std::move(next);
  }

  std::vector<CellId> out;
  for (std::size_t v = 0; v < nv; ++v)
    if (selected[v]) out.push_back(cov.cells()[v]);
  return out;
}

}  // namespace rcis
