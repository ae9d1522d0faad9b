#include "crd/reaction_network.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace crd {

namespace {

constexpr Index kDenseGramLimit = 2048;

// 0-based offset of a 1-based tuple.
Index lex_offset(std::span<const int> tuple, int species) {
  Index off = 0;
  for (int s : tuple) {
    if (s < 1 || s > species)
      throw DomainError("lex_index: entry " + std::to_string(s) +
                        " outside 1.." + std::to_string(species));
    if (off > (std::numeric_limits<Index>::max() - (s - 1)) / species)
      throw ResourceLimitError("lex_index: index overflow");
    off = off * species + (s - 1);
  }
  return off;
}

std::vector<int> reactant_tuple(const Reaction& r) {
  if (!r.reactant_order.empty()) return r.reactant_order;
  std::vector<int> tuple;
  for (std::size_t i = 0; i < r.alpha.size(); ++i)
    tuple.insert(tuple.end(), r.alpha[i], static_cast<int>(i) + 1);
  return tuple;
}

void validate(const Reaction& r, int species, std::size_t idx) {
  const auto where = "reaction " + std::to_string(idx) + ": ";
  if (static_cast<int>(r.alpha.size()) != species ||
      static_cast<int>(r.beta.size()) != species)
    throw DomainError(where + "alpha/beta must have length " +
                      std::to_string(species));
  for (int i = 0; i < species; ++i)
    if (r.alpha[i] < 0 || r.beta[i] < 0)
      throw DomainError(where + "negative stoichiometric coefficient");
  if (r.order() < 1)
    throw DomainError(where +
                      "no reactants; sources belong in F_0, not in reactions");
  if (!(r.rate > 0.0) || !std::isfinite(r.rate))
    throw DomainError(where + "rate must be positive and finite");
  if (!r.reactant_order.empty()) {
    std::vector<int> counts(species, 0);
    for (int s : r.reactant_order) {
      if (s < 1 || s > species)
        throw DomainError(where + "reactant_order entry out of range");
      ++counts[s - 1];
    }
    if (counts != r.alpha)
      throw DomainError(where + "reactant_order is not a permutation of alpha");
  }
}

// Largest singular value of a sparse tensor.
double spectral_norm(const CoefficientTensor& t) {
  if (t.entries.empty()) return 0.0;
  if (t.rows <= kDenseGramLimit) {
    // F F^T accumulated column by column.
    std::vector<TensorEntry> by_col = t.entries;
    std::sort(by_col.begin(), by_col.end(), [](const auto& a, const auto& b) {
      return std::tie(a.col, a.row) < std::tie(b.col, b.row);
    });
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(t.rows, t.rows);
    for (std::size_t a = 0; a < by_col.size();) {
      std::size_t b = a;
      while (b < by_col.size() && by_col[b].col == by_col[a].col) ++b;
      for (std::size_t p = a; p < b; ++p)
        for (std::size_t q = a; q < b; ++q)
          gram(by_col[p].row, by_col[q].row) +=
              by_col[p].value * by_col[q].value;
      a = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram,
                                                      Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
  }
  // Power iteration on F F^T through the coordinate list.
  std::map<Index, std::vector<std::pair<Index, double>>> cols;
  for (const auto& e : t.entries) cols[e.col].emplace_back(e.row, e.value);
  Eigen::VectorXd v = Eigen::VectorXd::Ones(t.rows).normalized();
  double lambda = 0.0;
  for (int it = 0; it < 500; ++it) {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(t.rows);
    for (const auto& [c, col] : cols) {
      double dot = 0.0;
      for (auto [r, val] : col) dot += val * v[r];
      for (auto [r, val] : col) w[r] += val * dot;
    }
    const double next = w.norm();
    if (next == 0.0) return 0.0;
    v = w / next;
    if (std::abs(next - lambda) <= 1e-14 * next) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return std::sqrt(lambda);
}

}  // namespace

int Reaction::order() const {
  return std::accumulate(alpha.begin(), alpha.end(), 0);
}

Reaction autocatalytic_reaction(int species, int i, int j, int order,
                                double rate) {
  if (order < 1 || i < 1 || i > species || j < 1 || j > species)
    throw DomainError("autocatalytic_reaction: invalid species or order");
  Reaction r;
  r.alpha.assign(species, 0);
  r.beta.assign(species, 0);
  r.alpha[i - 1] += order - 1;
  r.alpha[j - 1] += 1;
  r.beta[i - 1] = order;
  r.rate = rate;
  r.reactant_order.assign(order - 1, i);
  r.reactant_order.push_back(j);
  return r;
}

ReactionNetwork::ReactionNetwork(int species, std::vector<Reaction> reactions)
    : species_(species), reactions_(std::move(reactions)) {
  if (species < 1) throw DomainError("ReactionNetwork: species must be >= 1");
  for (std::size_t r = 0; r < reactions_.size(); ++r) {
    validate(reactions_[r], species_, r);
    max_order_ = std::max(max_order_, reactions_[r].order());
  }
}

const CoefficientTensor* CoefficientTensors::order(int j) const {
  if (j < 1 || j > max_order()) return nullptr;
  return &terms[j - 1];
}

Index lex_index(std::span<const int> tuple, int species) {
  if (species < 1) throw DomainError("lex_index: species must be >= 1");
  return lex_offset(tuple, species) + 1;
}

std::vector<int> lex_tuple(Index offset, int species, int length) {
  std::vector<int> tuple(length);
  for (int p = length - 1; p >= 0; --p) {
    tuple[p] = static_cast<int>(offset % species) + 1;
    offset /= species;
  }
  if (offset != 0) throw DomainError("lex_tuple: offset out of range");
  return tuple;
}

Index canonical_position(int i, int j, int species, int order) {
  if (species < 2) throw DomainError("canonical_position: requires S >= 2");
  if (order < 1) throw DomainError("canonical_position: requires order >= 1");
  if (i < 1 || i > species || j < 1 || j > species)
    throw DomainError("canonical_position: species index out of range");
  const Index s = species;
  const Index geometric = s * (checked_pow(s, order - 1) - 1) / (s - 1);
  return j + (i - 1) * geometric;
}

std::vector<double> tensor_power(std::span<const double> y, int power) {
  if (power < 0) throw DomainError("tensor_power: negative power");
  const Index m = static_cast<Index>(y.size());
  const Index size = checked_pow(m, power);
  std::vector<double> out{1.0};
  out.reserve(size);
  for (int p = 0; p < power; ++p) {
    std::vector<double> next;
    next.reserve(out.size() * y.size());
    for (double a : out)
      for (double b : y) next.push_back(a * b);
    out = std::move(next);
  }
  return out;
}

CoefficientTensor build_tensor(const ReactionNetwork& network, int order) {
  if (order < 1) throw DomainError("build_tensor: order must be >= 1");
  const int S = network.species();
  CoefficientTensor t;
  t.order = order;
  t.rows = S;
  t.cols = checked_pow(S, order);

  std::map<std::pair<Index, Index>, TensorEntry> acc;
  for (const auto& r : network.reactions()) {
    if (r.order() != order) continue;
    t.max_rate = std::max(t.max_rate, r.rate);
    const Index col = lex_offset(reactant_tuple(r), S);
    for (int i = 0; i < S; ++i) {
      const int change = r.beta[i] - r.alpha[i];
      if (change == 0) continue;
      auto& e = acc[{i, col}];
      e.row = i;
      e.col = col;
      e.value += change * r.rate;
      e.abs_stoich += std::abs(change);
    }
  }
  t.entries.reserve(acc.size());
  for (auto& [key, e] : acc) t.entries.push_back(e);
  return t;
}

CoefficientTensors build_tensors(const ReactionNetwork& network,
                                 std::vector<double> source) {
  CoefficientTensors out;
  out.species = network.species();
  if (source.empty()) source.assign(out.species, 0.0);
  if (static_cast<int>(source.size()) != out.species)
    throw DomainError("build_tensors: source length must equal species count");
  out.source = std::move(source);
  for (int j = 1; j <= network.max_order(); ++j)
    out.terms.push_back(build_tensor(network, j));
  return out;
}

std::vector<double> apply_tensor(const CoefficientTensor& tensor,
                                 std::span<const double> y) {
  const Index m = static_cast<Index>(y.size());
  if (tensor.order > 0 && checked_pow(m, tensor.order) != tensor.cols)
    throw DomainError("apply_tensor: state length does not match tensor");
  std::vector<double> out(tensor.rows, 0.0);
  for (const auto& e : tensor.entries) {
    double mono = 1.0;
    Index c = e.col;
    for (int p = 0; p < tensor.order; ++p) {
      mono *= y[c % m];
      c /= m;
    }
    out[e.row] += e.value * mono;
  }
  return out;
}

std::vector<double> rhs_eval(const CoefficientTensors& tensors,
                             std::span<const double> y) {
  if (static_cast<int>(y.size()) != tensors.species)
    throw DomainError("rhs_eval: state length " + std::to_string(y.size()) +
                      " does not match species count " +
                      std::to_string(tensors.species));
  std::vector<double> out = tensors.source;
  if (out.empty()) out.assign(tensors.species, 0.0);
  for (const auto& term : tensors.terms) {
    const auto part = apply_tensor(term, y);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += part[i];
  }
  return out;
}

TensorNorms tensor_norms(const CoefficientTensor& tensor) {
  TensorNorms n;
  if (tensor.entries.empty()) return n;
  std::map<Index, double> row_abs, col_abs, row_stoich, col_stoich;
  for (const auto& e : tensor.entries) {
    row_abs[e.row] += std::abs(e.value);
    col_abs[e.col] += std::abs(e.value);
    row_stoich[e.row] += e.abs_stoich;
    col_stoich[e.col] += e.abs_stoich;
  }
  auto max_of = [](const std::map<Index, double>& m) {
    double best = 0.0;
    for (const auto& [k, v] : m) best = std::max(best, v);
    return best;
  };
  n.inf_norm = max_of(row_abs);
  n.one_norm = max_of(col_abs);
  n.sigma_max = max_of(row_stoich);
  n.tau_max = max_of(col_stoich);
  n.two_norm = spectral_norm(tensor);
  n.two_bound = tensor.max_rate * std::sqrt(n.sigma_max * n.tau_max);
  return n;
}

double stoichiometric_sum(const ReactionNetwork& network) {
  double total = 0.0;
  for (const auto& r : network.reactions()) {
    if (r.order() < 2) continue;
    for (std::size_t i = 0; i < r.alpha.size(); ++i)
      total += std::abs(r.beta[i] - r.alpha[i]);
  }
  return total;
}

}  // namespace crd
