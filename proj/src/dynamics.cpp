#include "rcis/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <random>
#include <stdexcept>

namespace rcis {

void SamplerConfig::validate() const {
  if (cell_samples < 1)
    throw std::invalid_argument("SamplerConfig: cell_samples must be >= 1");
  if (input_samples < 1)
    throw std::invalid_argument("SamplerConfig: input_samples must be >= 1");
  if (disturbance_samples_per_dim < 1)
    throw std::invalid_argument(
        "SamplerConfig: disturbance_samples_per_dim must be >= 1");
}

namespace {

constexpr double kBoundaryInset = 1e-9;

/* interior lattice positions on [lo,hi]: inset by width/(2(k+1)) from
 * both ends, k equispaced points; the centroid for k = 1 */
std::vector<double> interior_lattice(double lo, double hi, int k) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(k));
  if (k == 1) {
    out.push_back(lo + 0.5 * (hi - lo));
    return out;
  }
  const double inset = (hi - lo) / (2.0 * (k + 1));
  const double a = lo + inset, b = hi - inset;
  for (int j = 0; j < k; ++j)
    out.push_back(a + (b - a) * static_cast<double>(j) /
                          static_cast<double>(k - 1));
  return out;
}

/* endpoint-inclusive lattice on [lo,hi] */
std::vector<double> endpoint_lattice(double lo, double hi, int k) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(k));
  if (k == 1) {
    out.push_back(lo + 0.5 * (hi - lo));
    return out;
  }
  for (int j = 0; j < k; ++j)
    out.push_back(lo + (hi - lo) * static_cast<double>(j) /
                          static_cast<double>(k - 1));
  return out;
}

std::vector<std::vector<double>> lattice_product(
    const std::vector<std::vector<double>>& axes) {
  std::vector<std::vector<double>> out;
  std::size_t total = 1;
  for (const auto& a : axes) total *= a.size();
  out.reserve(total);
  std::vector<std::size_t> idx(axes.size(), 0);
  for (std::size_t c = 0; c < total; ++c) {
    std::vector<double> p(axes.size());
    for (std::size_t i = 0; i < axes.size(); ++i) p[i] = axes[i][idx[i]];
    out.push_back(std::move(p));
    for (std::size_t i = axes.size(); i-- > 0;) {
      if (++idx[i] < axes[i].size()) break;
      idx[i] = 0;
    }
  }
  return out;
}

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/* per-cell random stream: seed mixed with the cell bounds, so the
 * stream is independent of evaluation order */
std::uint64_t cell_stream_seed(std::uint64_t seed, const Box& b) {
  std::uint64_t h = splitmix64(seed);
  for (int i = 0; i < b.dim(); ++i) {
    std::uint64_t bits;
    double v = b.lo(i);
    std::memcpy(&bits, &v, sizeof bits);
    h = splitmix64(h ^ bits);
    v = b.hi(i);
    std::memcpy(&bits, &v, sizeof bits);
    h = splitmix64(h ^ bits);
  }
  return h;
}

std::vector<std::vector<double>> boundary_points(const Box& b, int count) {
  const int n = b.dim();
  std::vector<std::vector<double>> out;
  out.reserve(static_cast<std::size_t>(count));
  /* distribute the budget round-robin over the 2n faces:
   * (dim0,lo), (dim0,hi), (dim1,lo), ... */
  const int faces = 2 * n;
  std::vector<int> per_face(static_cast<std::size_t>(faces), count / faces);
  for (int f = 0; f < count % faces; ++f) ++per_face[static_cast<std::size_t>(f)];

  for (int f = 0; f < faces; ++f) {
    const int d = f / 2;
    const bool upper = (f % 2) == 1;
    const int k = per_face[static_cast<std::size_t>(f)];
    if (k == 0) continue;
    const double inset = kBoundaryInset * b.width(d);
    const double face_coord = upper ? b.hi(d) - inset : b.lo(d) + inset;
    if (n == 1) {
      for (int j = 0; j < k; ++j) out.push_back({face_coord});
      continue;
    }
    /* face-interior lattice over the free dimensions (no corners) */
    const int free_dims = n - 1;
    int kk = 1;
    while (std::pow(kk, free_dims) < static_cast<double>(k)) ++kk;
    std::vector<int> idx(static_cast<std::size_t>(free_dims), 0);
    for (int j = 0; j < k; ++j) {
      std::vector<double> p(static_cast<std::size_t>(n));
      p[static_cast<std::size_t>(d)] = face_coord;
      int fd = 0;
      for (int i = 0; i < n; ++i) {
        if (i == d) continue;
        const double t =
            (idx[static_cast<std::size_t>(fd)] + 0.5) / static_cast<double>(kk);
        p[static_cast<std::size_t>(i)] = b.lo(i) + t * b.width(i);
        ++fd;
      }
      out.push_back(std::move(p));
      for (int i = free_dims; i-- > 0;) {
        if (++idx[static_cast<std::size_t>(i)] < kk) break;
        idx[static_cast<std::size_t>(i)] = 0;
      }
    }
  }
  /* collapse duplicates (only possible in dimension 1) */
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

std::vector<std::vector<double>> sample_cell(const Box& b,
                                             const SamplerConfig& cfg) {
  cfg.validate();
  const int n = b.dim();
  switch (cfg.cell_strategy) {
    case CellStrategy::center:
      return {b.center()};
    case CellStrategy::uniform: {
      int k = 1;
      while (std::pow(k + 1, n) <= static_cast<double>(cfg.cell_samples)) ++k;
      std::vector<std::vector<double>> axes;
      for (int i = 0; i < n; ++i)
        axes.push_back(interior_lattice(b.lo(i), b.hi(i), k));
      return lattice_product(axes);
    }
    case CellStrategy::boundary:
      return boundary_points(b, cfg.cell_samples);
    case CellStrategy::random: {
      std::mt19937_64 rng(cell_stream_seed(cfg.rng_seed, b));
      std::vector<std::vector<double>> out;
      out.reserve(static_cast<std::size_t>(cfg.cell_samples));
      for (int j = 0; j < cfg.cell_samples; ++j) {
        std::vector<double> p(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
          std::uniform_real_distribution<double> dist(b.lo(i), b.hi(i));
          p[static_cast<std::size_t>(i)] = dist(rng);
        }
        out.push_back(std::move(p));
      }
      return out;
    }
  }
  throw std::logic_error("sample_cell: bad strategy");
}

std::vector<std::vector<double>> sample_inputs(const Box& U,
                                               const SamplerConfig& cfg) {
  cfg.validate();
  if (U.dim() == 0) return {std::vector<double>{}};
  std::vector<std::vector<double>> axes;
  for (int i = 0; i < U.dim(); ++i)
    axes.push_back(endpoint_lattice(U.lo(i), U.hi(i), cfg.input_samples));
  return lattice_product(axes);
}

std::vector<std::vector<double>> sample_disturbances(const Box& W,
                                                     const SamplerConfig& cfg) {
  cfg.validate();
  if (W.dim() == 0) return {std::vector<double>{}};
  if (cfg.disturbance_mode == DisturbanceMode::vertices) {
    if (W.dim() > 20)
      throw std::invalid_argument(
          "sample_disturbances: vertices mode rejects dimension > 20");
    auto corners = W.corners();
    std::sort(corners.begin(), corners.end());
    corners.erase(std::unique(corners.begin(), corners.end()), corners.end());
    return corners;
  }
  std::vector<std::vector<double>> axes;
  for (int i = 0; i < W.dim(); ++i)
    axes.push_back(
        endpoint_lattice(W.lo(i), W.hi(i), cfg.disturbance_samples_per_dim));
  auto pts = lattice_product(axes);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

SystemModel::SystemModel(std::string name, int state_dim, int input_dim,
                         int disturbance_dim, MapFn map, Box X, Box U, Box W,
                         double image_inflation)
    : name_(std::move(name)),
      n_(state_dim),
      m_(input_dim),
      q_(disturbance_dim),
      map_(std::move(map)),
      X_(std::move(X)),
      U_(std::move(U)),
      W_(std::move(W)),
      image_inflation_(image_inflation) {
  if (n_ < 1) throw std::invalid_argument("SystemModel: state_dim must be >= 1");
  if (X_.dim() != n_)
    throw std::invalid_argument("SystemModel: X dimension mismatch");
  if (U_.dim() != m_)
    throw std::invalid_argument("SystemModel: U dimension mismatch");
  if (W_.dim() != q_)
    throw std::invalid_argument("SystemModel: W dimension mismatch");
  if (image_inflation_ < 0.0)
    throw std::invalid_argument("SystemModel: image_inflation must be >= 0");
}

SystemModel SystemModel::from_expressions(std::string name,
                                          const std::vector<std::string>& exprs,
                                          int input_dim, int disturbance_dim,
                                          Box X, Box U, Box W,
                                          double image_inflation) {
  auto field = std::make_shared<const ExpressionField>(
      exprs, static_cast<int>(exprs.size()), input_dim, disturbance_dim);
  MapFn map = [field](std::span<const double> x, std::span<const double> u,
                      std::span<const double> w) {
    return field->eval(x, u, w);
  };
  SystemModel model(std::move(name), static_cast<int>(exprs.size()), input_dim,
                    disturbance_dim, std::move(map), std::move(X), std::move(U),
                    std::move(W), image_inflation);
  model.field_ = field;
  return model;
}

std::vector<double> SystemModel::eval(std::span<const double> x,
                                      std::span<const double> u,
                                      std::span<const double> w) const {
  if (static_cast<int>(x.size()) != n_ || static_cast<int>(u.size()) != m_ ||
      static_cast<int>(w.size()) != q_)
    throw std::invalid_argument("SystemModel::eval: dimension mismatch");
  std::vector<double> out = map_(x, u, w);
  if (static_cast<int>(out.size()) != n_)
    throw EvalError("SystemModel::eval: map returned wrong dimension");
  for (int i = 0; i < n_; ++i)
    if (!std::isfinite(out[static_cast<std::size_t>(i)]))
      throw EvalError("SystemModel::eval: non-finite result in coordinate " +
                      std::to_string(i + 1) + " of system '" + name_ + "'");
  return out;
}

const ExpressionField& SystemModel::expressions() const {
  if (!field_)
    throw std::logic_error("SystemModel: no expression field attached");
  return *field_;
}

Box SystemModel::eval_interval(const Box& xbox, const Box& ubox,
                               std::span<const double> w) const {
  if (!field_)
    throw std::invalid_argument(
        "eval_interval requires an expression-defined model");
  return field_->eval_interval(xbox, ubox, w);
}

SystemModel SystemModel::with_image_inflation(double eps) const {
  if (eps < 0.0)
    throw std::invalid_argument("with_image_inflation: eps must be >= 0");
  SystemModel out = *this;
  out.image_inflation_ = eps;
  return out;
}

SystemModel SystemModel::with_boxes(std::optional<Box> X, std::optional<Box> U,
                                    std::optional<Box> W) const {
  SystemModel out = *this;
  if (X) {
    if (X->dim() != n_) throw std::invalid_argument("with_boxes: X dimension");
    out.X_ = std::move(*X);
  }
  if (U) {
    if (U->dim() != m_) throw std::invalid_argument("with_boxes: U dimension");
    out.U_ = std::move(*U);
  }
  if (W) {
    if (W->dim() != q_) throw std::invalid_argument("with_boxes: W dimension");
    out.W_ = std::move(*W);
  }
  return out;
}

SystemModel SystemModel::with_cell_bounds(CellBoundsFn fn) const {
  SystemModel out = *this;
  out.cell_bounds_ = std::move(fn);
  return out;
}

SystemModel parse_expression_system(const std::vector<std::string>& exprs,
                                    const Box& X, const Box& U, const Box& W) {
  if (static_cast<int>(exprs.size()) != X.dim())
    throw std::invalid_argument(
        "parse_expression_system: one expression per state coordinate");
  return SystemModel::from_expressions("expressions", exprs, U.dim(), W.dim(),
                                       X, U, W);
}

std::vector<double> AffineParts::eval(std::span<const double> x,
                                      std::span<const double> u,
                                      std::span<const double> w) const {
  Eigen::VectorXd xv = Eigen::Map<const Eigen::VectorXd>(x.data(),
                                                         static_cast<long>(x.size()));
  Eigen::VectorXd uv = Eigen::Map<const Eigen::VectorXd>(u.data(),
                                                         static_cast<long>(u.size()));
  Eigen::VectorXd wv = Eigen::Map<const Eigen::VectorXd>(w.data(),
                                                         static_cast<long>(w.size()));
  Eigen::VectorXd out = f0(xv);
  if (m > 0) out += g(xv) * uv;
  if (q > 0) out += h(xv) * wv;
  return std::vector<double>(out.data(), out.data() + out.size());
}

AffineParts constant_affine_parts(const Eigen::MatrixXd& A,
                                  const Eigen::MatrixXd& B,
                                  const Eigen::MatrixXd& G) {
  AffineParts parts;
  parts.n = static_cast<int>(A.rows());
  parts.m = static_cast<int>(B.cols());
  parts.q = static_cast<int>(G.cols());
  if (A.cols() != A.rows() || B.rows() != A.rows() || G.rows() != A.rows())
    throw std::invalid_argument("constant_affine_parts: inconsistent shapes");
  parts.f0 = [A](const Eigen::VectorXd& x) -> Eigen::VectorXd { return A * x; };
  parts.g = [B](const Eigen::VectorXd&) { return B; };
  parts.h = [G](const Eigen::VectorXd&) { return G; };
  parts.g_constant = true;
  parts.h_constant = true;
  return parts;
}

AffineParts augment_inputs(const AffineParts& parts,
                           const std::vector<std::vector<double>>& added_columns) {
  if (added_columns.empty()) return parts;
  for (const auto& col : added_columns)
    if (static_cast<int>(col.size()) != parts.n)
      throw std::invalid_argument("augment_inputs: column length must equal n");
  Eigen::MatrixXd extra(parts.n, static_cast<long>(added_columns.size()));
  for (std::size_t j = 0; j < added_columns.size(); ++j)
    for (int i = 0; i < parts.n; ++i)
      extra(i, static_cast<long>(j)) = added_columns[j][static_cast<std::size_t>(i)];

  AffineParts out = parts;
  out.m = parts.m + static_cast<int>(added_columns.size());
  auto base_g = parts.g;
  const int base_m = parts.m;
  out.g = [base_g, extra, base_m](const Eigen::VectorXd& x) {
    Eigen::MatrixXd gx = base_g(x);
    Eigen::MatrixXd full(gx.rows(), base_m + extra.cols());
    full << gx, extra;
    return full;
  };
  if (parts.g_interval) {
    auto base_gi = parts.g_interval;
    out.g_interval = [base_gi, extra, base_m](const Box& cell) {
      auto [lo, hi] = base_gi(cell);
      Eigen::MatrixXd full_lo(lo.rows(), base_m + extra.cols());
      Eigen::MatrixXd full_hi(hi.rows(), base_m + extra.cols());
      full_lo << lo, extra;
      full_hi << hi, extra;
      return std::make_pair(full_lo, full_hi);
    };
  }
  return out;
}

Box augment_input_box(const Box& U, std::size_t added) {
  std::vector<double> lo(U.lo()), hi(U.hi());
  for (std::size_t j = 0; j < added; ++j) {
    lo.push_back(0.0);
    hi.push_back(0.0);
  }
  return Box(std::move(lo), std::move(hi));
}

namespace {

using IntervalMatrix = std::vector<std::vector<Interval>>;
using IntervalVector = std::vector<Interval>;

IntervalMatrix to_interval(const Eigen::MatrixXd& lo, const Eigen::MatrixXd& hi) {
  IntervalMatrix M(static_cast<std::size_t>(lo.rows()),
                   IntervalVector(static_cast<std::size_t>(lo.cols())));
  for (long i = 0; i < lo.rows(); ++i)
    for (long j = 0; j < lo.cols(); ++j)
      M[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          Interval(lo(i, j), hi(i, j));
  return M;
}

double mignitude(const Interval& a) {
  if (a.lo <= 0.0 && a.hi >= 0.0) return 0.0;
  return std::min(std::abs(a.lo), std::abs(a.hi));
}

/* interval Gaussian elimination; solves [M] s = rhs with column
 * pivoting on mignitude. Returns false when no zero-free pivot exists,
 * i.e. the interval matrix is not verifiably invertible. */
bool interval_gauss_solve(IntervalMatrix M, IntervalVector rhs,
                          IntervalVector& out) {
  const std::size_t n = M.size();
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t best = k;
    double best_mig = mignitude(M[perm[k]][k]);
    for (std::size_t r = k + 1; r < n; ++r) {
      const double mig = mignitude(M[perm[r]][k]);
      if (mig > best_mig) {
        best = r;
        best_mig = mig;
      }
    }
    if (best_mig == 0.0) return false;
    std::swap(perm[k], perm[best]);
    for (std::size_t r = k + 1; r < n; ++r) {
      if (M[perm[r]][k].lo == 0.0 && M[perm[r]][k].hi == 0.0) continue;
      const Interval factor = M[perm[r]][k] / M[perm[k]][k];
      for (std::size_t c = k + 1; c < n; ++c)
        M[perm[r]][c] = M[perm[r]][c] - factor * M[perm[k]][c];
      rhs[perm[r]] = rhs[perm[r]] - factor * rhs[perm[k]];
      M[perm[r]][k] = Interval(0.0);
    }
  }
  out.assign(n, Interval(0.0));
  for (std::size_t k = n; k-- > 0;) {
    Interval acc = rhs[perm[k]];
    for (std::size_t c = k + 1; c < n; ++c)
      acc = acc - M[perm[k]][c] * out[c];
    out[k] = acc / M[perm[k]][k];
  }
  return true;
}

/* range of (g^{-1} h w) over w in W and x in the given box, via
 * interval Gauss; empty optional when not verifiably invertible */
std::optional<IntervalVector> transform_range(const AffineParts& parts,
                                              const Box& region, const Box& W) {
  auto [glo, ghi] = parts.g_interval(region);
  auto [hlo, hhi] = parts.h_interval(region);
  IntervalMatrix G = to_interval(glo, ghi);
  IntervalMatrix H = to_interval(hlo, hhi);
  IntervalVector rhs(static_cast<std::size_t>(parts.n), Interval(0.0));
  for (int i = 0; i < parts.n; ++i) {
    Interval acc(0.0);
    for (int k = 0; k < parts.q; ++k)
      acc = acc + H[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] *
                      Interval(W.lo(k), W.hi(k));
    rhs[static_cast<std::size_t>(i)] = acc;
  }
  IntervalVector s;
  if (!interval_gauss_solve(std::move(G), std::move(rhs), s)) return std::nullopt;
  return s;
}

/* split the range of g^{-1} h w into v-bounds: components with a
 * zero-width input slot remain disturbances (v_j = u_j + s_j), the
 * rest are controls shrunk so u = v - s stays admissible for every w */
TransformReport make_report(const Box& U, const IntervalVector& s) {
  TransformReport report;
  std::vector<double> clo, chi, dlo, dhi;
  for (int j = 0; j < U.dim(); ++j) {
    const Interval sj = s[static_cast<std::size_t>(j)];
    if (U.lo(j) == U.hi(j)) {
      report.disturbance_components.push_back(j);
      dlo.push_back(U.lo(j) + sj.lo);
      dhi.push_back(U.lo(j) + sj.hi);
    } else {
      const double vlo = U.lo(j) + sj.hi;
      const double vhi = U.hi(j) + sj.lo;
      if (vlo > vhi)
        throw std::runtime_error(
            "cancel_disturbance: input authority too small; the admissible "
            "box of v" + std::to_string(j + 1) + " is empty");
      report.control_components.push_back(j);
      clo.push_back(vlo);
      chi.push_back(vhi);
    }
  }
  report.v_control = clo.empty() ? Box::empty_dim() : Box(clo, chi);
  report.v_disturbance = dlo.empty() ? Box::empty_dim() : Box(dlo, dhi);
  return report;
}

}  // namespace

TransformResult cancel_disturbance(const AffineParts& parts, const Box& X,
                                   const Box& U, const Box& W) {
  if (parts.m != parts.n)
    throw std::invalid_argument(
        "cancel_disturbance: g(x) must be square; add arbitrary inputs "
        "constrained to {0} to square it first");
  if (U.dim() != parts.m || W.dim() != parts.q || X.dim() != parts.n)
    throw std::invalid_argument("cancel_disturbance: box dimension mismatch");

  TransformReport report;
  if (parts.g_constant && parts.h_constant) {
    const Eigen::VectorXd origin = Eigen::VectorXd::Zero(parts.n);
    const Eigen::MatrixXd G = parts.g(origin);
    const Eigen::MatrixXd H = parts.h(origin);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(G);
    if (!lu.isInvertible())
      throw std::runtime_error(
          "cancel_disturbance: g is singular (rank " +
          std::to_string(lu.rank()) + " of " + std::to_string(parts.n) +
          "); augment the inputs with arbitrary columns constrained to {0}");
    const Eigen::MatrixXd Ginv = lu.inverse();
    const Eigen::MatrixXd M = Ginv * H;
    /* componentwise range of (g^{-1} h w) over w in W */
    IntervalVector s(static_cast<std::size_t>(parts.n), Interval(0.0));
    for (int i = 0; i < parts.n; ++i) {
      double lo = 0.0, hi = 0.0;
      for (int k = 0; k < parts.q; ++k) {
        const double a = M(i, k) * W.lo(k), b = M(i, k) * W.hi(k);
        lo += std::min(a, b);
        hi += std::max(a, b);
      }
      s[static_cast<std::size_t>(i)] = Interval(lo, hi);
    }
    report = make_report(U, s);
    report.g_condition_estimate =
        G.cwiseAbs().colwise().sum().maxCoeff() *
        Ginv.cwiseAbs().colwise().sum().maxCoeff();
    report.per_cell = false;
  } else {
    if (!parts.g_interval || !parts.h_interval)
      throw std::invalid_argument(
          "cancel_disturbance: state-dependent parts need g_interval/"
          "h_interval enclosures for online bound computation");
    auto s = transform_range(parts, X, W);
    if (!s)
      throw std::runtime_error(
          "cancel_disturbance: g(x) is not verifiably invertible over X; "
          "keeping the untransformed system");
    report = make_report(U, *s);
    report.g_condition_estimate = 0.0;
    report.per_cell = true;
  }

  /* transformed dynamics x+ = f0(x) + g(x) v with v assembled from the
   * control components (new input) and disturbance components (new w) */
  const std::vector<int> ctrl = report.control_components;
  const std::vector<int> dist = report.disturbance_components;
  auto f0 = parts.f0;
  auto g = parts.g;
  const int n = parts.n;
  SystemModel::MapFn map = [f0, g, ctrl, dist, n](std::span<const double> x,
                                                  std::span<const double> u,
                                                  std::span<const double> w) {
    Eigen::VectorXd xv =
        Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<long>(x.size()));
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
    for (std::size_t j = 0; j < ctrl.size(); ++j) v[ctrl[j]] = u[j];
    for (std::size_t j = 0; j < dist.size(); ++j) v[dist[j]] = w[j];
    Eigen::VectorXd out = f0(xv) + g(xv) * v;
    return std::vector<double>(out.data(), out.data() + out.size());
  };

  SystemModel model("transformed", n,
                    static_cast<int>(ctrl.size()),
                    static_cast<int>(dist.size()), std::move(map), X,
                    report.v_control, report.v_disturbance);

  if (report.per_cell) {
    AffineParts captured = parts;
    Box Ubox = U, Wbox = W;
    TransformReport global = report;
    model = model.with_cell_bounds([captured, Ubox, Wbox, global](const Box& cell) {
      auto s = transform_range(captured, cell, Wbox);
      if (!s)
        return CellBounds{global.v_control, global.v_disturbance};
      TransformReport local = make_report(Ubox, *s);
      return CellBounds{local.v_control, local.v_disturbance};
    });
  }
  return TransformResult{std::move(model), std::move(report)};
}

}  // namespace rcis
