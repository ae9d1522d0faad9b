#pragma once

// Hand-rolled generators and independent oracles shared by the unit tests and
// the acceptance binary.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "crd/reaction_network.hpp"
#include "crd/spatial.hpp"

namespace crd::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * std::generate_canonical<double, 53>(rng_);
  }
  int integer(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(rng_() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  bool coin() { return (rng_() & 1u) != 0; }
  std::vector<double> vec(std::size_t n, double lo, double hi) {
    std::vector<double> v(n);
    for (auto& x : v) x = uniform(lo, hi);
    return v;
  }
  Eigen::MatrixXcd complex_matrix(int n, double scale = 1.0) {
    Eigen::MatrixXcd m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        m(i, j) = {uniform(-scale, scale), uniform(-scale, scale)};
    return m;
  }
  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

/// Random mass-action network with orders in 1..max_order.
inline ReactionNetwork random_network(Gen& g, int species, int max_order,
                                      int reactions) {
  std::vector<Reaction> out;
  for (int r = 0; r < reactions; ++r) {
    Reaction rx;
    rx.alpha.assign(species, 0);
    rx.beta.assign(species, 0);
    const int order = g.integer(1, max_order);
    for (int m = 0; m < order; ++m) ++rx.alpha[g.integer(0, species - 1)];
    const int products = g.integer(0, max_order + 1);
    for (int m = 0; m < products; ++m) ++rx.beta[g.integer(0, species - 1)];
    rx.rate = g.uniform(0.1, 2.0);
    out.push_back(rx);
  }
  return ReactionNetwork(species, std::move(out));
}

/// Direct mass-action sum: F_0 + sum_r (beta_r - alpha_r) c_r prod y^alpha_r.
inline std::vector<double> mass_action_oracle(const ReactionNetwork& net,
                                              const std::vector<double>& source,
                                              const std::vector<double>& y) {
  std::vector<double> out(net.species(), 0.0);
  for (int i = 0; i < net.species(); ++i)
    out[i] = source.empty() ? 0.0 : source[i];
  for (const auto& r : net.reactions()) {
    double mono = r.rate;
    for (int i = 0; i < net.species(); ++i) mono *= std::pow(y[i], r.alpha[i]);
    for (int i = 0; i < net.species(); ++i) out[i] += (r.beta[i] - r.alpha[i]) * mono;
  }
  return out;
}

inline Eigen::MatrixXd dense(const CoefficientTensor& t) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(t.rows, t.cols);
  for (const auto& e : t.entries) m(e.row, e.col) += e.value;
  return m;
}

inline Eigen::MatrixXd dense(const SparseMatrix& a) { return Eigen::MatrixXd(a); }

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

/// Spectral norm of a symmetric matrix by dense eigensolver.
inline double symmetric_norm(const Eigen::MatrixXd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

/// Random system with a square-free mix of orders up to 3 on a tiny grid.
inline DiscretizedSystem random_system(Gen& g, int species, int max_order,
                                       const SpatialGrid& grid,
                                       bool with_source = false) {
  auto net = random_network(g, species, max_order, g.integer(1, 5));
  std::vector<double> src;
  if (with_source) src = g.vec(species, -1.0, 1.0);
  return DiscretizedSystem(build_tensors(net, src), g.vec(species, 1e-3, 1e-2), grid);
}

}  // namespace crd::testing

#include "crd/estimator.hpp"

namespace crd::testing {

struct Scenario {
  EncodingInputs enc;
  LchsInputs lchs;
};

inline Scenario random_scenario(Gen& g) {
  Scenario s;
  s.enc.alpha_i = g.uniform(0.1, 5);
  s.enc.alpha_j_max = g.uniform(0.1, 5);
  s.enc.kBT = g.uniform(0.2, 5);
  s.enc.gamma = g.uniform(0.05, 2);
  s.enc.delta = g.uniform(0.05, 1);
  s.enc.epsilon = std::exp(g.uniform(std::log(1e-8), std::log(0.5)));
  s.enc.stoich_sum = g.uniform(0.5, 10);
  s.lchs.alpha_M = g.uniform(0.1, 50);
  s.lchs.t = g.uniform(0.1, 10);
  s.lchs.g = g.uniform(1, 10);
  s.lchs.beta = g.uniform(0.3, 0.95);
  s.lchs.c_one_norm = g.uniform(1, 3);
  s.lchs.eps_BE = g.uniform(1e-6, 1e-2);
  return s;
}

/// Counts field moves against the documented direction when one input is
/// pushed. Error tolerances (error_rescale, eps1, combined_error) shrink with
/// 1/eps by construction and are checked in that direction.
inline int monotonicity_violations(const Scenario& base) {
  int bad = 0;
  const auto ref = report_values(total_queries(base.enc, base.lchs));
  const auto cols = report_columns();
  auto check = [&](const Scenario& moved, int sign, bool error_fields_flip) {
    const auto v = report_values(total_queries(moved.enc, moved.lchs));
    for (std::size_t i = 0; i < v.size(); ++i) {
      int s = sign;
      const bool error_field = cols[i] == "error_rescale" || cols[i] == "eps1" ||
                               cols[i] == "combined_error";
      if (error_field && error_fields_flip) s = -s;
      const double tol = 1e-12 * std::max(std::abs(v[i]), std::abs(ref[i]));
      if (s > 0 && v[i] < ref[i] - tol) ++bad;
      if (s < 0 && v[i] > ref[i] + tol) ++bad;
    }
  };
  const double f = 1.3;
  Scenario m = base;
  m.enc.gamma *= f;
  check(m, -1, false);
  m = base;
  m.enc.delta = std::min(1.0, m.enc.delta * f);
  check(m, -1, false);
  m = base;
  m.enc.kBT *= f;
  check(m, -1, false);
  m = base;
  m.lchs.t *= f;
  check(m, +1, false);
  m = base;
  m.enc.alpha_i *= f;
  check(m, +1, false);
  m = base;
  m.enc.alpha_j_max *= f;
  check(m, +1, false);
  m = base;
  m.lchs.alpha_M *= f;
  check(m, +1, false);
  m = base;
  m.enc.epsilon /= f;
  check(m, +1, true);
  return bad;
}

}  // namespace crd::testing
