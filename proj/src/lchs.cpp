#include "crd/lchs.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss.hpp>

namespace crd {

namespace {

using Rule = boost::math::quadrature::gauss<double, 8>;

// Nodes and weights of the composite rule on [a, b] with `panels` panels.
void composite_rule(double a, double b, int panels, std::vector<double>& x,
                    std::vector<double>& w) {
  const auto& abscissa = Rule::abscissa();
  const auto& weights = Rule::weights();
  const double width = (b - a) / panels;
  x.clear();
  w.clear();
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * width;
    const double half = 0.5 * width;
    // boost stores the non-negative half of a symmetric rule
    for (std::size_t i = abscissa.size(); i-- > 0;) {
      if (abscissa[i] == 0.0) continue;
      x.push_back(mid - half * abscissa[i]);
      w.push_back(half * weights[i]);
    }
    for (std::size_t i = 0; i < abscissa.size(); ++i) {
      x.push_back(mid + half * abscissa[i]);
      w.push_back(half * weights[i]);
    }
  }
}

void check_square(const Eigen::MatrixXcd& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() == 0)
    throw DomainError(std::string(what) + ": matrix must be square and non-empty");
  if (a.rows() > kLchsMaxDim)
    throw ResourceLimitError(std::string(what) + ": dimension above " +
                             std::to_string(kLchsMaxDim));
}

void require_psd(const Eigen::MatrixXcd& L) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(L, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  if (lo < -1e-12 * scale)
    throw StabilityError("lchs: Hermitian part is not positive semi-definite "
                         "(smallest eigenvalue " + std::to_string(lo) + ")");
}

// Eigendecomposition of k L + H for every quadrature node.
struct NodeSpectra {
  std::vector<Eigen::MatrixXcd> vectors;
  std::vector<Eigen::VectorXd> values;
};

NodeSpectra node_spectra(const CartesianPair& lh, const LCUCoefficients& lcu) {
  NodeSpectra out;
  out.vectors.reserve(lcu.k.size());
  out.values.reserve(lcu.k.size());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es;
  for (double k : lcu.k) {
    es.compute(k * lh.L + lh.H);
    out.vectors.push_back(es.eigenvectors());
    out.values.push_back(es.eigenvalues());
  }
  return out;
}

}  // namespace

void LCHSConfig::validate() const {
  if (!(beta > 0.0 && beta < 1.0)) throw DomainError("beta must lie in (0, 1)");
  if (!(K > 0.0) || !std::isfinite(K)) throw DomainError("K must be > 0");
  if (nodes < 2) throw DomainError("nodes must be >= 2");
  if (s_nodes < 2) throw DomainError("s_nodes must be >= 2");
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("t must be >= 0");
}

CartesianPair cartesian_decompose(const Eigen::MatrixXcd& a) {
  if (a.rows() != a.cols())
    throw DomainError("cartesian_decompose: matrix must be square");
  const Eigen::MatrixXcd adj = a.adjoint();
  return {0.5 * (a + adj), Complex(0.0, -0.5) * (a - adj)};
}

Complex kernel(Complex z, double beta) {
  const Complex one_iz = Complex(1.0, 0.0) + Complex(0.0, 1.0) * z;
  return std::exp(std::pow(2.0, beta) - std::pow(one_iz, beta)) /
         (2.0 * std::numbers::pi);
}

LCUCoefficients lcu_coefficients(const LCHSConfig& cfg) {
  cfg.validate();
  const int panels = (cfg.nodes + 7) / 8;
  std::vector<double> w;
  LCUCoefficients out;
  composite_rule(-cfg.K, cfg.K, panels, out.k, w);
  out.c.resize(out.k.size());
  for (std::size_t j = 0; j < out.k.size(); ++j) {
    const double k = out.k[j];
    out.c[j] = w[j] * kernel(k, cfg.beta) / Complex(1.0, -k);
    out.one_norm += std::abs(out.c[j]);
  }
  return out;
}

double default_truncation(double g, double eps, double beta) {
  if (!(g >= 1.0) || !(eps > 0.0) || !(beta > 0.0 && beta <= 1.0))
    throw DomainError("default_truncation: need g >= 1, eps > 0, beta in (0, 1]");
  return std::pow(std::max(std::log(g / eps), 0.0), 1.0 / beta);
}

Eigen::MatrixXcd reconstruct_propagator(const Eigen::MatrixXcd& a,
                                        const LCHSConfig& cfg) {
  check_square(a, "reconstruct_propagator");
  const auto lh = cartesian_decompose(a);
  require_psd(lh.L);
  const auto lcu = lcu_coefficients(cfg);
  const auto spectra = node_spectra(lh, lcu);
  const Index n = a.rows();
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t j = 0; j < lcu.k.size(); ++j) {
    const auto& V = spectra.vectors[j];
    Eigen::VectorXcd phase(n);
    for (Index i = 0; i < n; ++i)
      phase[i] = lcu.c[j] * std::exp(Complex(0.0, -cfg.t * spectra.values[j][i]));
    sum.noalias() += V * phase.asDiagonal() * V.adjoint();
  }
  return sum;
}

Eigen::VectorXcd solve_inhomogeneous(const Eigen::MatrixXcd& a,
                                     const Eigen::VectorXcd& b,
                                     const Eigen::VectorXcd& z0,
                                     const LCHSConfig& cfg) {
  check_square(a, "solve_inhomogeneous");
  if (b.size() != a.rows() || z0.size() != a.rows())
    throw DomainError("solve_inhomogeneous: vector lengths must match the matrix");
  const auto lh = cartesian_decompose(a);
  require_psd(lh.L);
  const auto lcu = lcu_coefficients(cfg);
  const auto spectra = node_spectra(lh, lcu);

  std::vector<double> s, ws;
  if (cfg.t > 0.0) composite_rule(0.0, cfg.t, (cfg.s_nodes + 7) / 8, s, ws);

  const Index n = a.rows();
  Eigen::VectorXcd z = Eigen::VectorXcd::Zero(n);
  for (std::size_t j = 0; j < lcu.k.size(); ++j) {
    const auto& V = spectra.vectors[j];
    const auto& lam = spectra.values[j];
    const Eigen::VectorXcd z0_hat = V.adjoint() * z0;
    const Eigen::VectorXcd b_hat = V.adjoint() * b;
    Eigen::VectorXcd acc(n);
    for (Index i = 0; i < n; ++i) {
      Complex term = std::exp(Complex(0.0, -cfg.t * lam[i])) * z0_hat[i];
      for (std::size_t q = 0; q < s.size(); ++q)
        term += ws[q] * std::exp(Complex(0.0, -(cfg.t - s[q]) * lam[i])) * b_hat[i];
      acc[i] = term;
    }
    z.noalias() += lcu.c[j] * (V * acc);
  }
  return z;
}

}  // namespace crd
