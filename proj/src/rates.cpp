#include "crd/rates.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace crd {

namespace {

constexpr double kHermitianTol = 1e-12;
constexpr double kCommuteTol = 1e-10;
constexpr double kGapTol = 1e-10;

void check_hermitian(const Eigen::MatrixXcd& h, const char* name) {
  if (h.rows() != h.cols() || h.rows() == 0)
    throw DomainError(std::string(name) + " must be square and non-empty");
  if (h.rows() > 64) throw ResourceLimitError(std::string(name) + ": dimension above 64");
  if ((h - h.adjoint()).norm() > kHermitianTol * std::max(1.0, h.norm()))
    throw DomainError(std::string(name) + " is not Hermitian");
}

// Weights of the reference state in the eigenbasis of Hi, returned as a
// density matrix.
Eigen::MatrixXcd reference_state(const Eigen::MatrixXcd& hi, double kBT,
                                 Reference reference) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hi);
  const auto& e = es.eigenvalues();
  const auto& v = es.eigenvectors();
  const Index n = e.size();
  Eigen::VectorXd p = Eigen::VectorXd::Zero(n);
  if (reference == Reference::groundstate) {
    if (n > 1 && e[1] - e[0] < kGapTol)
      throw DomainError("groundstate reference needs a non-degenerate ground state of Hi");
    p[0] = 1.0;
  } else {
    for (Index k = 0; k < n; ++k) p[k] = std::exp(-(e[k] - e[0]) / kBT);
    p /= p.sum();
  }
  return v * p.cast<Complex>().asDiagonal() * v.adjoint();
}

double expect(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& op) {
  return (rho * op).trace().real();
}

double log_partition(const Eigen::MatrixXcd& h, double kBT) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  const auto& e = es.eigenvalues();
  const double e0 = e.minCoeff();
  double acc = 0.0;
  for (Index k = 0; k < e.size(); ++k) acc += std::exp(-(e[k] - e0) / kBT);
  return std::log(acc) - e0 / kBT;
}

}  // namespace

void ThermoContext::validate() const {
  if (!(kBT > 0.0) || !std::isfinite(kBT)) throw DomainError("kBT must be > 0");
}

void HamiltonianPair::validate() const {
  check_hermitian(Hi, "Hi");
  check_hermitian(Hj, "Hj");
  if (Hi.rows() != Hj.rows()) throw DomainError("Hi and Hj differ in dimension");
}

double eyring_rate(double deltaG, const ThermoContext& ctx) {
  ctx.validate();
  if (!std::isfinite(deltaG)) throw DomainError("eyring_rate: deltaG must be finite");
  const double x = deltaG / ctx.kBT;
  if (x < -700.0)
    throw DomainError("eyring_rate: deltaG / kBT = " + std::to_string(x) +
                      " overflows the exponential");
  return ctx.kBT / (2.0 * std::numbers::pi) * std::exp(-x);
}

double zwanzig_exact(const HamiltonianPair& pair, const ThermoContext& ctx) {
  ctx.validate();
  pair.validate();
  const Eigen::MatrixXcd comm = pair.Hi * pair.Hj - pair.Hj * pair.Hi;
  if (comm.norm() > kCommuteTol)
    throw DomainError("zwanzig_exact: Hi and Hj do not commute (||[Hi, Hj]|| = " +
                      std::to_string(comm.norm()) +
                      "); use free_energy_difference instead");
  // Shared eigenbasis from a generic combination of the commuting pair.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(pair.Hi + std::numbers::sqrt2 * pair.Hj);
  const Eigen::MatrixXcd& v = es.eigenvectors();
  const Eigen::VectorXd ei = (v.adjoint() * pair.Hi * v).diagonal().real();
  const Eigen::VectorXd ej = (v.adjoint() * pair.Hj * v).diagonal().real();
  const double e0 = ei.minCoeff();
  double num = 0.0, den = 0.0;
  for (Index k = 0; k < ei.size(); ++k) {
    const double w = std::exp(-(ei[k] - e0) / ctx.kBT);
    den += w;
    num += w * std::exp(-(ej[k] - ei[k]) / ctx.kBT);
  }
  return -ctx.kBT * std::log(num / den);
}

double free_energy_difference(const HamiltonianPair& pair, const ThermoContext& ctx) {
  ctx.validate();
  pair.validate();
  return -ctx.kBT * (log_partition(pair.Hj, ctx.kBT) - log_partition(pair.Hi, ctx.kBT));
}

double zwanzig_second_order(const HamiltonianPair& pair, const ThermoContext& ctx,
                            Reference reference, bool literal_form) {
  ctx.validate();
  pair.validate();
  const auto rho = reference_state(pair.Hi, ctx.kBT, reference);
  if (literal_form) {
    const double hj = expect(rho, pair.Hj);
    const double hi = expect(rho, pair.Hi);
    const double hj2 = expect(rho, pair.Hj * pair.Hj);
    const double cross = (rho * pair.Hi * pair.Hj).trace().real();
    return hj - hi - (hj2 - hj * hj - 2.0 * cross) / (2.0 * ctx.kBT);
  }
  const Eigen::MatrixXcd dh = pair.Hj - pair.Hi;
  const double mean = expect(rho, dh);
  const double var = expect(rho, dh * dh) - mean * mean;
  return mean - var / (2.0 * ctx.kBT);
}

std::map<RateKey, double> rates_from_table(const std::map<RateKey, double>& deltaG,
                                           const ThermoContext& ctx) {
  std::map<RateKey, double> out;
  for (const auto& [key, g] : deltaG) {
    try {
      out[key] = eyring_rate(g, ctx);
    } catch (const DomainError& e) {
      throw DomainError("entry (" + std::to_string(key.first) + "," +
                        std::to_string(key.second) + "): " + e.what());
    }
  }
  return out;
}

}  // namespace crd
