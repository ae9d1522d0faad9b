#pragma once

// Rate constants from free-energy differences (Eyring) and free-energy
// differences from small Hamiltonians (Zwanzig perturbation). Units with
// hbar = 1.

#include <map>
#include <utility>

#include <Eigen/Dense>

#include "crd/common.hpp"

namespace crd {

struct ThermoContext {
  double kBT = 1.0;

  void validate() const;
};

struct HamiltonianPair {
  Eigen::MatrixXcd Hi;
  Eigen::MatrixXcd Hj;

  void validate() const;
};

/// (kBT / 2 pi) e^{-deltaG / kBT}.
double eyring_rate(double deltaG, const ThermoContext& ctx);

/// -kBT ln < e^{-(Hj - Hi)/kBT} >_i for commuting Hi, Hj (thermal state of Hi).
double zwanzig_exact(const HamiltonianPair& pair, const ThermoContext& ctx);

/// -kBT ln(Z_j / Z_i); defined for any Hermitian pair.
double free_energy_difference(const HamiltonianPair& pair, const ThermoContext& ctx);

enum class Reference { thermal, groundstate };

/// <dH> - Var(dH) / (2 kBT) with dH = Hj - Hi, averaged in the Gibbs state
/// or the ground state of Hi. literal_form evaluates the alternative
/// ground-state form <Hj> - <Hi> - (<Hj^2> - <Hj>^2 - 2 Re <Hi Hj>) / (2 kBT)
/// instead, which is not zero for Hi = Hj.
double zwanzig_second_order(const HamiltonianPair& pair, const ThermoContext& ctx,
                            Reference reference = Reference::thermal,
                            bool literal_form = false);

using RateKey = std::pair<int, int>;

std::map<RateKey, double> rates_from_table(const std::map<RateKey, double>& deltaG,
                                           const ThermoContext& ctx);

}  // namespace crd
