#include "crd/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "crd/linalg.hpp"

namespace crd {

namespace {

void require_lengths(std::span<const double> a, std::span<const double> b,
                     const char* what) {
  if (a.size() != b.size() || a.empty())
    throw DomainError(std::string(what) +
                      ": diffusion and decay vectors must have equal, "
                      "non-zero length");
}

bool f1_is_diagonal(const CoefficientTensors& t) {
  const auto* f1 = t.order(1);
  if (f1 == nullptr) return true;
  return std::all_of(f1->entries.begin(), f1->entries.end(),
                     [](const TensorEntry& e) { return e.row == e.col; });
}

}  // namespace

SpatialGrid SpatialGrid::make(int n, int d) {
  if (n < 3) throw DomainError("grid: n must be >= 3 (got " + std::to_string(n) + ")");
  if (d < 1 || d > 3) throw DomainError("grid: d must be in 1..3");
  return SpatialGrid{n, d};
}

std::vector<double> SpatialGrid::coordinates(Index p) const {
  std::vector<double> x(d);
  for (int a = d - 1; a >= 0; --a) {
    x[a] = static_cast<double>(p % n) / n;
    p /= n;
  }
  return x;
}

DiscreteOperator laplacian_1d(int n) {
  if (n < 3)
    throw DomainError("laplacian_1d: n must be >= 3 (got " + std::to_string(n) + ")");
  const double n2 = static_cast<double>(n) * n;
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(3 * n);
  for (int i = 0; i < n; ++i) {
    trips.emplace_back(i, i, -2.0 * n2);
    trips.emplace_back(i, (i + 1) % n, n2);
    trips.emplace_back(i, (i + n - 1) % n, n2);
  }
  DiscreteOperator op;
  op.matrix.resize(n, n);
  op.matrix.setFromTriplets(trips.begin(), trips.end());
  op.symmetric = true;
  return op;
}

DiscreteOperator laplacian_nd(int n, int d, Index max_nodes) {
  const auto grid = SpatialGrid::make(n, d);
  const Index total = grid.nodes();
  if (total > max_nodes)
    throw ResourceLimitError("laplacian_nd: " + std::to_string(total) +
                             " nodes exceeds limit " + std::to_string(max_nodes));
  const auto one_d = laplacian_1d(n).matrix;
  // sum over axes of I (x) ... (x) D_h (x) ... (x) I
  SparseMatrix sum(total, total);
  for (int axis = 0; axis < d; ++axis) {
    SparseMatrix term = axis == 0 ? one_d : sparse_identity(n);
    for (int a = 1; a < d; ++a)
      term = kron(term, a == axis ? one_d : sparse_identity(n));
    sum += term;
  }
  sum.makeCompressed();
  return DiscreteOperator{std::move(sum), true};
}

double laplacian_eigenvalue(std::span<const int> k, int n) {
  double acc = 0.0;
  for (int ki : k)
    acc += std::cos(2.0 * std::numbers::pi * ki / n) - 1.0;
  return 2.0 * static_cast<double>(n) * n * acc;
}

LaplacianNorm laplacian_norm_exact(int n, int d) {
  SpatialGrid::make(n, d);
  // Every axis contributes independently; the extreme wave number is the one
  // closest to n/2.
  const int k_star = n / 2;
  const double per_axis =
      2.0 * static_cast<double>(n) * n *
      (1.0 - std::cos(2.0 * std::numbers::pi * k_star / n));
  LaplacianNorm out;
  out.value = d * per_axis;
  out.bound = 4.0 * d * static_cast<double>(n) * n;
  out.bound_tight = n % 2 == 0;
  if (out.bound_tight) out.value = out.bound;
  return out;
}

std::vector<SpectrumEntry> laplacian_spectrum(int n, int d) {
  const auto grid = SpatialGrid::make(n, d);
  const Index total = grid.nodes();
  std::vector<SpectrumEntry> out;
  out.reserve(total);
  for (Index p = 0; p < total; ++p) {
    SpectrumEntry e;
    e.k = lex_tuple(p, n, d);
    for (int& ki : e.k) --ki;
    e.eigenvalue = laplacian_eigenvalue(e.k, n);
    out.push_back(std::move(e));
  }
  return out;
}

DiscreteOperator build_F1(std::span<const double> diffusion,
                          std::span<const double> decay,
                          const SpatialGrid& grid) {
  require_lengths(diffusion, decay, "build_F1");
  for (double D : diffusion)
    if (!(D >= 0.0)) throw DomainError("build_F1: diffusion must be >= 0");
  const Index nd = grid.nodes();
  const auto lap = laplacian_nd(grid.n, grid.d).matrix;
  const Index S = static_cast<Index>(diffusion.size());
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(S * (lap.nonZeros() + nd));
  for (Index i = 0; i < S; ++i) {
    const Index off = i * nd;
    if (diffusion[i] != 0.0)
      for (Index r = 0; r < lap.outerSize(); ++r)
        for (SparseMatrix::InnerIterator it(lap, r); it; ++it)
          trips.emplace_back(off + it.row(), off + it.col(),
                             diffusion[i] * it.value());
    for (Index p = 0; p < nd; ++p) trips.emplace_back(off + p, off + p, -decay[i]);
  }
  DiscreteOperator op;
  op.matrix.resize(S * nd, S * nd);
  op.matrix.setFromTriplets(trips.begin(), trips.end());
  op.matrix.prune(0.0);
  op.symmetric = true;
  return op;
}

double f1_norm_exact(std::span<const double> diffusion,
                     std::span<const double> decay, const SpatialGrid& grid) {
  require_lengths(diffusion, decay, "f1_norm_exact");
  // D_i lambda - mu_i is affine in lambda, so the extremes sit at the ends of
  // the Laplacian spectrum: lambda = 0 and lambda = -||Lap||.
  const double lap_norm = laplacian_norm_exact(grid.n, grid.d).value;
  double best = 0.0;
  for (std::size_t i = 0; i < diffusion.size(); ++i) {
    best = std::max(best, std::abs(decay[i]));
    best = std::max(best, std::abs(diffusion[i] * lap_norm + decay[i]));
  }
  return best;
}

double f1_norm_bound(std::span<const double> diffusion,
                     std::span<const double> decay, const SpatialGrid& grid) {
  require_lengths(diffusion, decay, "f1_norm_bound");
  const double dmax = *std::max_element(diffusion.begin(), diffusion.end());
  double mu_max = 0.0;
  for (double m : decay) mu_max = std::max(mu_max, std::abs(m));
  return 4.0 * grid.d * static_cast<double>(grid.n) * grid.n * dmax + mu_max;
}

CoefficientTensor lift_tensor(const CoefficientTensor& tensor,
                              const SpatialGrid& grid,
                              std::span<const double> node_scaling) {
  const Index nd = grid.nodes();
  if (!node_scaling.empty() && static_cast<Index>(node_scaling.size()) != nd)
    throw DomainError("lift_tensor: node_scaling must have one entry per node");
  const Index S = tensor.rows;
  const Index N = S * nd;
  CoefficientTensor out;
  out.order = tensor.order;
  out.rows = N;
  out.cols = checked_pow(N, tensor.order);
  double scale_max = node_scaling.empty() ? 1.0 : 0.0;
  for (double s : node_scaling) scale_max = std::max(scale_max, std::abs(s));
  out.max_rate = tensor.max_rate * scale_max;

  // Species tuples are decoded once; the global column for node p replaces
  // every species s by (s - 1) * n_d + p.
  std::vector<std::vector<int>> tuples;
  tuples.reserve(tensor.entries.size());
  for (const auto& e : tensor.entries)
    tuples.push_back(lex_tuple(e.col, static_cast<int>(S), tensor.order));

  out.entries.reserve(tensor.entries.size() * nd);
  for (Index p = 0; p < nd; ++p) {
    const double scale = node_scaling.empty() ? 1.0 : node_scaling[p];
    if (scale == 0.0) continue;
    for (std::size_t k = 0; k < tensor.entries.size(); ++k) {
      const auto& e = tensor.entries[k];
      Index col = 0;
      for (int s : tuples[k]) col = col * N + (s - 1) * nd + p;
      out.entries.push_back(
          TensorEntry{e.row * nd + p, col, e.value * scale, e.abs_stoich});
    }
  }
  std::sort(out.entries.begin(), out.entries.end(),
            [](const TensorEntry& a, const TensorEntry& b) {
              return std::tie(a.row, a.col) < std::tie(b.row, b.col);
            });
  return out;
}

DiscretizedSystem::DiscretizedSystem(CoefficientTensors reactions,
                                     std::vector<double> diffusion,
                                     SpatialGrid grid,
                                     std::vector<double> node_scaling)
    : reactions_(std::move(reactions)),
      diffusion_(std::move(diffusion)),
      grid_(SpatialGrid::make(grid.n, grid.d)),
      nodes_(grid_.nodes()),
      scaling_(std::move(node_scaling)) {
  const int S = reactions_.species;
  if (static_cast<int>(diffusion_.size()) != S)
    throw DomainError("DiscretizedSystem: diffusion length must equal species count");
  for (double D : diffusion_)
    if (!(D >= 0.0)) throw DomainError("DiscretizedSystem: diffusion must be >= 0");
  if (reactions_.source.empty()) reactions_.source.assign(S, 0.0);
  if (reactions_.max_order() > 16)
    throw DomainError("DiscretizedSystem: reaction order above 16 is not supported");
  if (!scaling_.empty() && static_cast<Index>(scaling_.size()) != nodes_)
    throw DomainError("DiscretizedSystem: node_scaling must have one entry per node");

  laplacian_ = laplacian_nd(grid_.n, grid_.d);
  const std::vector<double> zero(S, 0.0);
  linear_ = build_F1(diffusion_, zero, grid_).matrix;
  if (const auto* f1 = reactions_.order(1); f1 != nullptr && !f1->empty()) {
    const auto lifted1 = lift_tensor(*f1, grid_, scaling_);
    SparseMatrix react(dim(), dim());
    std::vector<Eigen::Triplet<double>> trips;
    for (const auto& e : lifted1.entries) trips.emplace_back(e.row, e.col, e.value);
    react.setFromTriplets(trips.begin(), trips.end());
    linear_ += react;
  }
  linear_.prune(0.0);
  linear_.makeCompressed();
}

std::vector<double> DiscretizedSystem::source() const {
  std::vector<double> out(dim());
  for (int i = 0; i < species(); ++i)
    std::fill_n(out.begin() + i * nodes_, nodes_, reactions_.source[i]);
  return out;
}

CoefficientTensor DiscretizedSystem::lifted(int order) const {
  if (order < 2) throw DomainError("DiscretizedSystem::lifted: order must be >= 2");
  if (const auto* f = reactions_.order(order); f != nullptr)
    return lift_tensor(*f, grid_, scaling_);
  CoefficientTensor empty;
  empty.order = order;
  empty.rows = dim();
  empty.cols = checked_pow(dim(), order);
  return empty;
}

void DiscretizedSystem::rhs(std::span<const double> y, std::span<double> dy) const {
  const Index n = dim();
  if (static_cast<Index>(y.size()) != n || static_cast<Index>(dy.size()) != n)
    throw DomainError("DiscretizedSystem::rhs: state length mismatch");
  Eigen::Map<const Eigen::VectorXd> yv(y.data(), n);
  Eigen::Map<Eigen::VectorXd> dv(dy.data(), n);
  dv.noalias() = linear_ * yv;
  for (int i = 0; i < species(); ++i)
    for (Index p = 0; p < nodes_; ++p) dv[i * nodes_ + p] += reactions_.source[i];

  const int S = species();
  for (int j = 2; j <= reactions_.max_order(); ++j) {
    const auto& term = reactions_.terms[j - 1];
    for (const auto& e : term.entries) {
      // monomial digits of the species-level column
      Index c = e.col;
      int digits[16];
      for (int q = j - 1; q >= 0; --q) {
        digits[q] = static_cast<int>(c % S);
        c /= S;
      }
      for (Index p = 0; p < nodes_; ++p) {
        double mono = e.value;
        if (!scaling_.empty()) mono *= scaling_[p];
        for (int q = 0; q < j; ++q) mono *= y[digits[q] * nodes_ + p];
        dy[e.row * nodes_ + p] += mono;
      }
    }
  }
}

double DiscretizedSystem::linear_norm() const {
  const auto* f1 = reactions_.order(1);
  if (scaling_.empty() && f1_is_diagonal(reactions_)) {
    std::vector<double> decay(species(), 0.0);
    if (f1 != nullptr)
      for (const auto& e : f1->entries) decay[e.row] = -e.value;
    return f1_norm_exact(diffusion_, decay, grid_);
  }
  if (dim() <= 2048) return spectral_norm_dense(to_dense(linear_));
  return spectral_norm_power(linear_);
}

}  // namespace crd
