#pragma once

// Periodic finite-difference Laplacians on the unit box and the spatial
// lifting of species-level reaction tensors onto a grid.
//
// State ordering is species-major: entry (i, p) of the discretised state
// lives at (i - 1) * n_d + p, where p is the row-major node index.

#include <optional>
#include <span>
#include <vector>

#include "crd/common.hpp"
#include "crd/reaction_network.hpp"

namespace crd {

struct SpatialGrid {
  int n = 3;  // nodes per dimension
  int d = 1;  // spatial dimension

  static SpatialGrid make(int n, int d);

  double h() const { return 1.0 / n; }
  Index nodes() const { return checked_pow(n, d); }
  /// x coordinate (i / n) along each axis of node p.
  std::vector<double> coordinates(Index p) const;
};

struct DiscreteOperator {
  SparseMatrix matrix;
  bool symmetric = false;

  Index dim() const { return matrix.rows(); }
};

inline constexpr Index kDefaultMaxNodes = Index{1} << 21;

DiscreteOperator laplacian_1d(int n);
DiscreteOperator laplacian_nd(int n, int d, Index max_nodes = kDefaultMaxNodes);

/// Eigenvalue (2 n^2) sum_i (cos(2 pi k_i / n) - 1) of the d-dim Laplacian.
double laplacian_eigenvalue(std::span<const int> k, int n);

struct LaplacianNorm {
  double value = 0.0;        // attained max |eigenvalue|
  double bound = 0.0;        // 4 d n^2
  bool bound_tight = false;  // n even
};

LaplacianNorm laplacian_norm_exact(int n, int d);

struct SpectrumEntry {
  std::vector<int> k;
  double eigenvalue = 0.0;
};

/// All n^d eigenvalues indexed by wave numbers, lexicographic in k.
std::vector<SpectrumEntry> laplacian_spectrum(int n, int d);

/// Block-diagonal diag_i(D_i Lap - mu_i I) of size S n_d.
DiscreteOperator build_F1(std::span<const double> diffusion,
                          std::span<const double> decay,
                          const SpatialGrid& grid);

/// max_i max_k |D_i lambda_k - mu_i|.
double f1_norm_exact(std::span<const double> diffusion,
                     std::span<const double> decay, const SpatialGrid& grid);

/// 4 d n^2 max D + max |mu|.
double f1_norm_bound(std::span<const double> diffusion,
                     std::span<const double> decay, const SpatialGrid& grid);

/// Copy of a species-level tensor at every node p, scaled by node_scaling[p]
/// (uniform when empty). Rows and columns index the S n_d lifted state.
CoefficientTensor lift_tensor(const CoefficientTensor& tensor,
                              const SpatialGrid& grid,
                              std::span<const double> node_scaling = {});

/// The spatially discretised polynomial RDE
///   dY/dt = F~_0 + (diag(D) (x) Lap + F~_1^react) Y + sum_j F~_j Y^{(x)j}
/// with node-local reactions.
class DiscretizedSystem {
 public:
  DiscretizedSystem(CoefficientTensors reactions, std::vector<double> diffusion,
                    SpatialGrid grid, std::vector<double> node_scaling = {});

  int species() const { return reactions_.species; }
  Index nodes() const { return nodes_; }
  Index dim() const { return species() * nodes_; }
  int max_order() const { return std::max(1, reactions_.max_order()); }
  const SpatialGrid& grid() const { return grid_; }
  const CoefficientTensors& reactions() const { return reactions_; }
  const std::vector<double>& diffusion() const { return diffusion_; }
  const std::vector<double>& node_scaling() const { return scaling_; }
  const DiscreteOperator& laplacian() const { return laplacian_; }

  /// F~_1 including diffusion.
  const SparseMatrix& linear_operator() const { return linear_; }
  /// F~_0 (sources are not node-scaled).
  std::vector<double> source() const;
  /// Lifted F~_j for j >= 2; empty tensor when the network has no such order.
  CoefficientTensor lifted(int order) const;

  /// Full right-hand side; nonlinear terms evaluated node by node.
  void rhs(std::span<const double> y, std::span<double> dy) const;

  /// ||F~_1||_2 evaluated through the Laplacian spectrum when F_1 is
  /// diagonal, otherwise by a dense eigensolver.
  double linear_norm() const;

 private:
  CoefficientTensors reactions_;
  std::vector<double> diffusion_;
  SpatialGrid grid_;
  Index nodes_;
  std::vector<double> scaling_;
  DiscreteOperator laplacian_;
  SparseMatrix linear_;
};

}  // namespace crd
