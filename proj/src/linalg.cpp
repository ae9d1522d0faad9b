#include "crd/linalg.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace crd {

double spectral_norm_power(const SparseMatrix& a, int max_iterations,
                           double rel_tol) {
  if (a.nonZeros() == 0) return 0.0;
  // A slightly non-uniform start avoids being orthogonal to the top
  // singular vector for symmetric stencils.
  Eigen::VectorXd v(a.cols());
  for (Index i = 0; i < a.cols(); ++i)
    v[i] = 1.0 + 0.1 * std::sin(1.0 + static_cast<double>(i));
  v.normalize();
  double sigma = 0.0;
  for (int it = 0; it < max_iterations; ++it) {
    Eigen::VectorXd w = a.transpose() * (a * v);
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    v = w / norm;
    const double next = std::sqrt(norm);
    if (std::abs(next - sigma) <= rel_tol * next) return next;
    sigma = next;
  }
  return sigma;
}

double spectral_norm_dense(const Eigen::MatrixXd& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  return svd.singularValues()(0);
}

SparseMatrix kron(const SparseMatrix& a, const SparseMatrix& b) {
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(a.nonZeros() * b.nonZeros()));
  for (Index ra = 0; ra < a.outerSize(); ++ra)
    for (SparseMatrix::InnerIterator ia(a, ra); ia; ++ia)
      for (Index rb = 0; rb < b.outerSize(); ++rb)
        for (SparseMatrix::InnerIterator ib(b, rb); ib; ++ib)
          trips.emplace_back(ia.row() * b.rows() + ib.row(),
                             ia.col() * b.cols() + ib.col(),
                             ia.value() * ib.value());
  SparseMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

SparseMatrix sparse_identity(Index n) {
  SparseMatrix id(n, n);
  id.setIdentity();
  return id;
}

Eigen::MatrixXd to_dense(const SparseMatrix& a, Index max_dim) {
  if (a.rows() > max_dim || a.cols() > max_dim)
    throw ResourceLimitError("to_dense: matrix " + std::to_string(a.rows()) +
                             "x" + std::to_string(a.cols()) +
                             " exceeds dense limit");
  return Eigen::MatrixXd(a);
}

}  // namespace crd
