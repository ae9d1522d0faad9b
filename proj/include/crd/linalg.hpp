#pragma once

#include <Eigen/Dense>

#include "crd/common.hpp"

namespace crd {

/// Largest singular value by power iteration on A^T A. Deterministic start
/// vector; converges from below.
double spectral_norm_power(const SparseMatrix& a, int max_iterations = 2000,
                           double rel_tol = 1e-12);

/// Largest singular value through a dense SVD (small matrices only).
double spectral_norm_dense(const Eigen::MatrixXd& a);

/// Sparse Kronecker product A (x) B.
SparseMatrix kron(const SparseMatrix& a, const SparseMatrix& b);

SparseMatrix sparse_identity(Index n);

/// Dense copy with a size guard.
Eigen::MatrixXd to_dense(const SparseMatrix& a, Index max_dim = 4096);

}  // namespace crd
