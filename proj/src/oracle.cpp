#include "rcis/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace rcis {

std::size_t GridKernel::cell_count() const {
  std::size_t total = 1;
  for (int r : resolution) total *= static_cast<std::size_t>(r);
  return total;
}

std::size_t GridKernel::retained() const {
  std::size_t c = 0;
  for (char m : membership) c += (m != 0);
  return c;
}

double GridKernel::cell_volume() const {
  double v = 1.0;
  for (int i = 0; i < domain.dim(); ++i)
    v *= domain.width(i) / resolution[static_cast<std::size_t>(i)];
  return v;
}

double GridKernel::volume() const {
  return static_cast<double>(retained()) * cell_volume();
}

long GridKernel::index_of(std::span<const double> x) const {
  const int n = domain.dim();
  long idx = 0;
  for (int i = 0; i < n; ++i) {
    const double t = x[static_cast<std::size_t>(i)];
    if (t < domain.lo(i) || t > domain.hi(i)) return -1;
    const int r = resolution[static_cast<std::size_t>(i)];
    long k = static_cast<long>(
        std::floor((t - domain.lo(i)) / domain.width(i) * r));
    if (k < 0) k = 0;
    if (k >= r) k = r - 1;
    idx = idx * r + k;
  }
  return idx;
}

bool GridKernel::member_at(std::span<const double> x) const {
  const long idx = index_of(x);
  return idx >= 0 && membership[static_cast<std::size_t>(idx)] != 0;
}

Box GridKernel::cell_box(long index) const {
  const int n = domain.dim();
  std::vector<double> lo(static_cast<std::size_t>(n)),
      hi(static_cast<std::size_t>(n));
  for (int i = n; i-- > 0;) {
    const int r = resolution[static_cast<std::size_t>(i)];
    const long k = index % r;
    index /= r;
    const double w = domain.width(i) / r;
    lo[static_cast<std::size_t>(i)] = domain.lo(i) + k * w;
    hi[static_cast<std::size_t>(i)] = lo[static_cast<std::size_t>(i)] + w;
  }
  return Box(std::move(lo), std::move(hi));
}

void GridKernel::write_pgm(std::ostream& os) const {
  if (domain.dim() != 2)
    throw std::invalid_argument("GridKernel::write_pgm: 2-D only");
  const int rx = resolution[0], ry = resolution[1];
  os << "P2\n" << rx << ' ' << ry << "\n255\n";
  /* top row = largest x2 so the picture is upright */
  for (int j = ry - 1; j >= 0; --j) {
    for (int i = 0; i < rx; ++i) {
      os << (membership[static_cast<std::size_t>(i * ry + j)] ? 255 : 0);
      os << (i + 1 == rx ? '\n' : ' ');
    }
  }
}

GridKernel grid_discriminating_kernel(const SystemModel& model, int resolution,
                                      const SamplerConfig& cfg) {
  if (resolution < 2)
    throw std::invalid_argument(
        "grid_discriminating_kernel: resolution must be >= 2");
  cfg.validate();
  const int n = model.state_dim();
  GridKernel kernel;
  kernel.domain = model.X();
  kernel.resolution.assign(static_cast<std::size_t>(n), resolution);
  kernel.membership.assign(kernel.cell_count(), 1);

  const auto u_samples = sample_inputs(model.U(), cfg);
  const auto w_samples = sample_disturbances(model.W(), cfg);

  /* cell centers, computed once */
  const std::size_t total = kernel.cell_count();
  std::vector<std::vector<double>> centers(total);
  for (std::size_t c = 0; c < total; ++c)
    centers[c] = kernel.cell_box(static_cast<long>(c)).center();

  int sweeps = 0;
  bool removed = true;
  while (removed) {
    removed = false;
    ++sweeps;
    for (std::size_t c = 0; c < total; ++c) {
      if (!kernel.membership[c]) continue;
      const auto& x = centers[c];
      bool safe = true;
      for (const auto& w : w_samples) {
        bool reply = false;
        for (const auto& u : u_samples) {
          const auto y = model.eval(x, u, w);
          const long idx = kernel.index_of(y);
          if (idx >= 0 && kernel.membership[static_cast<std::size_t>(idx)]) {
            reply = true;
            break;
          }
        }
        if (!reply) {
          safe = false;
          break;
        }
      }
      if (!safe) {
        kernel.membership[c] = 0;
        removed = true;
      }
    }
  }
  kernel.iterations_to_fixpoint = sweeps;
  return kernel;
}

namespace {

double domain_margin(const Box& X, std::span<const double> y) {
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i < X.dim(); ++i) {
    m = std::min(m, y[static_cast<std::size_t>(i)] - X.lo(i));
    m = std::min(m, X.hi(i) - y[static_cast<std::size_t>(i)]);
  }
  return m;
}

/* Chebyshev ring depth inside the kernel bitmap: the largest r <= 8
 * such that all grid cells within radius r of y's cell are retained;
 * -1 outside the kernel. 2-D fast path, generic otherwise. */
double kernel_depth(const GridKernel& k, std::span<const double> y) {
  const long idx = k.index_of(y);
  if (idx < 0 || !k.membership[static_cast<std::size_t>(idx)]) return -1.0;
  const int n = k.domain.dim();
  std::vector<long> coord(static_cast<std::size_t>(n));
  long rest = idx;
  for (int i = n; i-- > 0;) {
    coord[static_cast<std::size_t>(i)] = rest % k.resolution[static_cast<std::size_t>(i)];
    rest /= k.resolution[static_cast<std::size_t>(i)];
  }
  for (int r = 1; r <= 8; ++r) {
    /* scan the full box of radius r (cheap for small r) */
    std::vector<long> off(static_cast<std::size_t>(n), -r);
    while (true) {
      long probe = 0;
      bool valid = true;
      for (int i = 0; i < n && valid; ++i) {
        const long c = coord[static_cast<std::size_t>(i)] + off[static_cast<std::size_t>(i)];
        if (c < 0 || c >= k.resolution[static_cast<std::size_t>(i)])
          valid = false;
        else
          probe = probe * k.resolution[static_cast<std::size_t>(i)] + c;
      }
      if (!valid || !k.membership[static_cast<std::size_t>(probe)])
        return static_cast<double>(r - 1);
      int i = n - 1;
      for (; i >= 0; --i) {
        if (off[static_cast<std::size_t>(i)] < r) {
          ++off[static_cast<std::size_t>(i)];
          for (int j = i + 1; j < n; ++j) off[static_cast<std::size_t>(j)] = -r;
          break;
        }
      }
      if (i < 0) break;
    }
  }
  return 8.0;
}

double score(const SystemModel& model, const GridKernel* stay,
             std::span<const double> y) {
  if (stay != nullptr) {
    /* kernel depth dominates; domain margin breaks ties */
    return kernel_depth(*stay, y) * 1e6 + domain_margin(model.X(), y);
  }
  return domain_margin(model.X(), y);
}

}  // namespace

ExitResult simulate_exit_time(const SystemModel& model,
                              std::span<const double> x0, ExitPolicy policy,
                              int horizon, const SamplerConfig& cfg,
                              const GridKernel* stay_set) {
  cfg.validate();
  if (!model.X().contains(x0))
    throw std::invalid_argument("simulate_exit_time: x0 must lie in X");
  const auto u_samples = sample_inputs(model.U(), cfg);
  const auto w_samples = sample_disturbances(model.W(), cfg);

  std::vector<double> x(x0.begin(), x0.end());
  for (int step = 1; step <= horizon; ++step) {
    std::vector<double> next;
    if (policy == ExitPolicy::worst_u) {
      double worst = std::numeric_limits<double>::infinity();
      for (const auto& w : w_samples)
        for (const auto& u : u_samples) {
          auto y = model.eval(x, u, w);
          const double s = score(model, stay_set, y);
          if (s < worst) {
            worst = s;
            next = std::move(y);
          }
        }
    } else {
      /* adversary picks w minimizing the control's best reply */
      double adversary_best = std::numeric_limits<double>::infinity();
      for (const auto& w : w_samples) {
        double best = -std::numeric_limits<double>::infinity();
        std::vector<double> best_y;
        for (const auto& u : u_samples) {
          auto y = model.eval(x, u, w);
          const double s = score(model, stay_set, y);
          if (s > best) {
            best = s;
            best_y = std::move(y);
          }
        }
        if (best < adversary_best) {
          adversary_best = best;
          next = std::move(best_y);
        }
      }
    }
    x = std::move(next);
    if (!model.X().contains(x)) return ExitResult{false, step};
  }
  return ExitResult{true, horizon};
}

}  // namespace rcis
