#pragma once

// Classical check of the linear-combination-of-Hamiltonian-simulation
// identity
//
//   e^{-A t} = int_R f(k) / (1 - i k) e^{-i t (k L + H)} dk,   A = L + i H,
//
// valid when the Hermitian part L is positive semi-definite. The k-integral
// is truncated to [-K, K] and discretised with composite 8-point
// Gauss-Legendre panels.

#include <vector>

#include <Eigen/Dense>

#include "crd/common.hpp"

namespace crd {


inline constexpr Index kLchsMaxDim = 64;

struct LCHSConfig {
  double beta = 0.8;
  double K = 100.0;
  int nodes = 2048;    // k nodes, rounded up to a multiple of 8
  int s_nodes = 64;    // s nodes for the inhomogeneous term
  double t = 1.0;

  void validate() const;
};

struct CartesianPair {
  Eigen::MatrixXcd L;
  Eigen::MatrixXcd H;
};

/// A = L + i H with L = (A + A^*)/2, H = (A - A^*)/(2i).
CartesianPair cartesian_decompose(const Eigen::MatrixXcd& a);

/// e^{2^beta - (1 + i z)^beta} / (2 pi), principal branch.
Complex kernel(Complex z, double beta);

struct LCUCoefficients {
  std::vector<double> k;
  std::vector<Complex> c;  // w_j f(k_j) / (1 - i k_j)
  double one_norm = 0.0;
};

LCUCoefficients lcu_coefficients(const LCHSConfig& cfg);

/// Truncation K = (ln(g / eps))^{1/beta} with unit constant.
double default_truncation(double g, double eps, double beta);

/// Sum_j c_j e^{-i t (k_j L + H)}, approximating e^{-A t}.
Eigen::MatrixXcd reconstruct_propagator(const Eigen::MatrixXcd& a,
                                        const LCHSConfig& cfg);

/// z(t) for dz/dt = -A z + b with constant b; the Duhamel integral over s uses
/// Gauss-Legendre on [0, t].
Eigen::VectorXcd solve_inhomogeneous(const Eigen::MatrixXcd& a,
                                     const Eigen::VectorXcd& b,
                                     const Eigen::VectorXcd& z0,
                                     const LCHSConfig& cfg);

}  // namespace crd
