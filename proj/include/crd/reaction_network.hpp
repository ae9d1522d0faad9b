#pragma once

// Mass-action reaction networks and their polynomial coefficient tensors.
//
// A network with S species is turned into the polynomial right-hand side
//
//   dY/dt = F_0 + F_1 Y + F_2 Y^{(x)2} + ... + F_s Y^{(x)s}
//
// where Y^{(x)j} is the lexicographic Kronecker power of the state and F_j is
// an S x S^j matrix. Tensors are stored as sorted coordinate lists; column
// indices are 0-based offsets into the Kronecker power.

#include <span>
#include <vector>

#include "crd/common.hpp"

namespace crd {

struct Reaction {
  std::vector<int> alpha;  // reactant stoichiometry, length S
  std::vector<int> beta;   // product stoichiometry, length S
  double rate = 0.0;
  // Optional 1-based reactant tuple fixing the monomial position. Must be a
  // permutation of the multiset given by alpha. Empty means ascending order.
  std::vector<int> reactant_order;

  int order() const;
};

/// (order-1) y_i + y_j -> order y_i, 1-based species, reactant tuple (i..i, j).
Reaction autocatalytic_reaction(int species, int i, int j, int order,
                                double rate);

class ReactionNetwork {
 public:
  ReactionNetwork() = default;
  ReactionNetwork(int species, std::vector<Reaction> reactions);

  int species() const { return species_; }
  const std::vector<Reaction>& reactions() const { return reactions_; }
  int max_order() const { return max_order_; }

 private:
  int species_ = 0;
  std::vector<Reaction> reactions_;
  int max_order_ = 0;
};

struct TensorEntry {
  Index row = 0;
  Index col = 0;
  double value = 0.0;
  // Sum over contributing reactions of |beta_ri - alpha_ri|; used by the
  // sigma/tau norm bound.
  double abs_stoich = 0.0;
};

struct CoefficientTensor {
  int order = 0;
  Index rows = 0;
  Index cols = 0;
  std::vector<TensorEntry> entries;  // sorted by (row, col), unique
  double max_rate = 0.0;             // largest rate constant feeding the tensor

  bool empty() const { return entries.empty(); }
};

/// F_0 plus F_1..F_s for one network. terms[j-1] has order j.
struct CoefficientTensors {
  int species = 0;
  std::vector<double> source;
  std::vector<CoefficientTensor> terms;

  int max_order() const { return static_cast<int>(terms.size()); }
  const CoefficientTensor* order(int j) const;
};

/// 1-based lexicographic index of a 1-based tuple, in 1..S^k.
Index lex_index(std::span<const int> tuple, int species);

/// Inverse of lex_index for a 0-based offset; returns the 1-based tuple.
std::vector<int> lex_tuple(Index offset, int species, int length);

/// lex_index of (i, ..., i, j) with i repeated order-1 times, closed form.
Index canonical_position(int i, int j, int species, int order);

/// Lexicographic Kronecker power; power 0 is [1].
std::vector<double> tensor_power(std::span<const double> y, int power);

CoefficientTensor build_tensor(const ReactionNetwork& network, int order);

/// All tensors up to the network's max order, with the given F_0 (empty
/// source means zero).
CoefficientTensors build_tensors(const ReactionNetwork& network,
                                 std::vector<double> source = {});

/// F_j Y^{(x)j} without materialising the Kronecker power.
std::vector<double> apply_tensor(const CoefficientTensor& tensor,
                                 std::span<const double> y);

std::vector<double> rhs_eval(const CoefficientTensors& tensors,
                             std::span<const double> y);

struct TensorNorms {
  double inf_norm = 0.0;
  double one_norm = 0.0;
  double two_norm = 0.0;
  double two_bound = 0.0;  // C_max sqrt(sigma_max tau_max)
  double sigma_max = 0.0;
  double tau_max = 0.0;
};

TensorNorms tensor_norms(const CoefficientTensor& tensor);

/// Sum of |beta - alpha| over species and over reactions of order >= 2
/// (the reactions that feed the nonlinear rate tensors).
double stoichiometric_sum(const ReactionNetwork& network);

}  // namespace crd
