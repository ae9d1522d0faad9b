#include <cmath>

#include "doctest.h"
#include "support.hpp"

#include "crd/linalg.hpp"
#include "crd/models.hpp"
#include "crd/reaction_network.hpp"

using namespace crd;
using crd::testing::Gen;

namespace {

Reaction make(std::vector<int> a, std::vector<int> b, double rate,
              std::vector<int> order = {}) {
  Reaction r;
  r.alpha = std::move(a);
  r.beta = std::move(b);
  r.rate = rate;
  r.reactant_order = std::move(order);
  return r;
}

// Network whose order-3 tensor is the reference two-species matrix
// [[c11, c12, 0, 0, 0, 0, c21, 0], [0, -c12, 0, 0, 0, 0, -c21, c22]].
ReactionNetwork reference_fixture(double c11, double c12, double c21, double c22) {
  return ReactionNetwork(2, {make({3, 0}, {4, 0}, c11), make({2, 1}, {3, 0}, c12),
                             make({1, 2}, {2, 1}, c21, {2, 2, 1}),
                             make({0, 3}, {0, 4}, c22)});
}

}  // namespace

TEST_CASE("lex_index examples") {
  CHECK(lex_index(std::vector<int>{1, 1, 1}, 2) == 1);
  CHECK(lex_index(std::vector<int>{2, 2, 2}, 2) == 8);
  CHECK(lex_index(std::vector<int>{1, 2}, 2) == 2);
  CHECK_THROWS_AS(lex_index(std::vector<int>{1, 3}, 2), DomainError);
  CHECK_THROWS_AS(lex_index(std::vector<int>{0}, 2), DomainError);
}

TEST_CASE("lex_index is a bijection onto 1..S^k") {
  for (int S = 1; S <= 3; ++S)
    for (int k = 1; k <= 4; ++k) {
      const Index total = checked_pow(S, k);
      std::vector<int> seen(total + 1, 0);
      // odometer enumeration in lexicographic order
      std::vector<int> tuple(k, 1);
      for (Index n = 1; n <= total; ++n) {
        const Index idx = lex_index(tuple, S);
        REQUIRE(idx >= 1);
        REQUIRE(idx <= total);
        CHECK(idx == n);
        ++seen[idx];
        CHECK(lex_tuple(idx - 1, S, k) == tuple);
        for (int p = k - 1; p >= 0; --p) {
          if (++tuple[p] <= S) break;
          tuple[p] = 1;
        }
      }
      for (Index n = 1; n <= total; ++n) CHECK(seen[n] == 1);
    }
}

TEST_CASE("canonical_position examples and closed form") {
  CHECK(canonical_position(1, 2, 2, 3) == 2);
  CHECK(canonical_position(2, 1, 2, 3) == 7);
  for (int S = 2; S <= 4; ++S)
    for (int order = 1; order <= 4; ++order) {
      CHECK(canonical_position(1, 1, S, order) == 1);
      for (int i = 1; i <= S; ++i)
        for (int j = 1; j <= S; ++j) {
          std::vector<int> tuple(order - 1, i);
          tuple.push_back(j);
          CHECK(canonical_position(i, j, S, order) == lex_index(tuple, S));
        }
    }
  CHECK_THROWS_AS(canonical_position(1, 1, 1, 3), DomainError);
}

TEST_CASE("tensor_power examples") {
  const std::vector<double> y{2.0, 3.0};
  CHECK(tensor_power(y, 0) == std::vector<double>{1.0});
  CHECK(tensor_power(y, 2) == std::vector<double>{4, 6, 6, 9});
  // Y^3 ordering y1^3, y1^2 y2, y1 y2 y1, y1 y2^2, y2 y1^2, y2 y1 y2, y2^2 y1, y2^3
  const double a = 2.0, b = 3.0;
  const std::vector<double> expect{a * a * a, a * a * b, a * b * a, a * b * b,
                                   b * a * a, b * a * b, b * b * a, b * b * b};
  CHECK(tensor_power(y, 3) == expect);
}

TEST_CASE("tensor_power(a + b) is the Kronecker product of the parts") {
  Gen g(11);
  for (int trial = 0; trial < 30; ++trial) {
    const auto y = g.vec(g.integer(1, 3), -2.0, 2.0);
    const int a = g.integer(0, 3), b = g.integer(0, 3);
    const auto pa = tensor_power(y, a), pb = tensor_power(y, b);
    std::vector<double> kr;
    for (double x : pa)
      for (double z : pb) kr.push_back(x * z);
    const auto full = tensor_power(y, a + b);
    REQUIRE(full.size() == kr.size());
    CHECK(crd::testing::max_abs_diff(full, kr) <= 1e-12);
  }
}

TEST_CASE("build_tensor reproduces the reference two-species order-3 matrix") {
  const double c11 = 1.5, c12 = 0.7, c21 = 2.25, c22 = 0.4;
  const auto t = build_tensor(reference_fixture(c11, c12, c21, c22), 3);
  Eigen::MatrixXd expect = Eigen::MatrixXd::Zero(2, 8);
  expect(0, 0) = c11;
  expect(0, 1) = c12;
  expect(0, 6) = c21;
  expect(1, 1) = -c12;
  expect(1, 6) = -c21;
  expect(1, 7) = c22;
  CHECK(crd::testing::dense(t) == expect);
  CHECK(t.rows == 2);
  CHECK(t.cols == 8);
}

TEST_CASE("tensor_norms on the unit reference matrix") {
  const auto n = tensor_norms(build_tensor(reference_fixture(1, 1, 1, 1), 3));
  CHECK(n.two_bound == doctest::Approx(std::sqrt(6.0)).epsilon(1e-15));
  CHECK(n.two_norm == doctest::Approx(2.2360679774997894).epsilon(1e-12));
  CHECK(n.inf_norm == 3.0);
  CHECK(n.one_norm == 2.0);
  CHECK(n.sigma_max == 3.0);
  CHECK(n.tau_max == 2.0);
}

TEST_CASE("empty network gives zero tensors and zero norms") {
  const ReactionNetwork net(2, {});
  const auto t = build_tensor(net, 3);
  CHECK(t.empty());
  CHECK(t.cols == 8);
  const auto n = tensor_norms(t);
  CHECK(n.inf_norm == 0.0);
  CHECK(n.one_norm == 0.0);
  CHECK(n.two_norm == 0.0);
  CHECK(n.two_bound == 0.0);
  const auto all = build_tensors(net);
  CHECK(rhs_eval(all, std::vector<double>{1.0, 2.0}) == std::vector<double>{0.0, 0.0});
}

TEST_CASE("autocatalytic_reaction lands on the canonical position") {
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j) {
      if (i == j) continue;
      const ReactionNetwork net(3, {autocatalytic_reaction(3, i, j, 3, 1.0)});
      const auto t = build_tensor(net, 3);
      REQUIRE(t.entries.size() == 2);
      for (const auto& e : t.entries)
        CHECK(e.col + 1 == canonical_position(i, j, 3, 3));
    }
}

TEST_CASE("duplicate reactions sum into one entry") {
  const ReactionNetwork net(2, {make({2, 1}, {3, 0}, 0.5), make({2, 1}, {3, 0}, 0.25)});
  const auto t = build_tensor(net, 3);
  REQUIRE(t.entries.size() == 2);
  CHECK(t.entries[0].value == 0.75);
  CHECK(t.entries[1].value == -0.75);
}

TEST_CASE("invalid reactions are rejected") {
  CHECK_THROWS_AS(ReactionNetwork(2, {make({0, 0}, {1, 0}, 1.0)}), DomainError);
  CHECK_THROWS_AS(ReactionNetwork(2, {make({1, 0}, {0, 0}, 0.0)}), DomainError);
  CHECK_THROWS_AS(ReactionNetwork(2, {make({1, 0}, {0, 0}, -1.0)}), DomainError);
  CHECK_THROWS_AS(ReactionNetwork(2, {make({1}, {0}, 1.0)}), DomainError);
  CHECK_THROWS_AS(ReactionNetwork(2, {make({-1, 2}, {0, 0}, 1.0)}), DomainError);
  CHECK_THROWS_AS(ReactionNetwork(2, {make({2, 1}, {3, 0}, 1.0, {1, 1, 1})}),
                  DomainError);
}

TEST_CASE("rhs_eval dimension mismatch") {
  const auto t = build_tensors(reference_fixture(1, 1, 1, 1));
  CHECK_THROWS_AS(rhs_eval(t, std::vector<double>{1.0}), DomainError);
}

TEST_CASE("GM network rhs at Y = [1, 1]") {
  GMParams p;
  p.mu1 = 2.0;
  p.mu2 = 3.0;
  p.c1 = 0.5;
  p.b1 = 1.25;
  p.b2 = 0.75;
  const auto f = rhs_eval(gm_tensors(p), std::vector<double>{1.0, 1.0});
  CHECK(f[0] == doctest::Approx(p.b1 - p.mu1 + p.c1).epsilon(1e-15));
  CHECK(f[1] == doctest::Approx(p.b2 - p.mu2 - p.c1).epsilon(1e-15));
}

TEST_CASE("stoichiometric_sum of the GM network") {
  CHECK(stoichiometric_sum(gm_network(GMParams{})) == 2.0);
}

TEST_CASE("rhs_eval matches the mass-action oracle on random networks") {
  Gen g(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const int S = g.integer(1, 4);
    const auto net = crd::testing::random_network(g, S, 3, g.integer(1, 6));
    const auto src = g.vec(S, -1.0, 1.0);
    const auto y = g.vec(S, -1.5, 1.5);
    const auto got = rhs_eval(build_tensors(net, src), y);
    const auto want = crd::testing::mass_action_oracle(net, src, y);
    for (int i = 0; i < S; ++i)
      CHECK(std::abs(got[i] - want[i]) <= 1e-12 * std::max(1.0, std::abs(want[i])));
  }
}

TEST_CASE("norm chain two_norm <= sqrt(inf * one) <= two_bound") {
  Gen g(77);
  for (int trial = 0; trial < 200; ++trial) {
    const int S = g.integer(1, 4);
    const auto net = crd::testing::random_network(g, S, 3, g.integer(1, 8));
    for (int j = 1; j <= net.max_order(); ++j) {
      const auto t = build_tensor(net, j);
      const auto n = tensor_norms(t);
      const double mid = std::sqrt(n.inf_norm * n.one_norm);
      CHECK(n.two_norm <= mid * (1 + 1e-12) + 1e-14);
      CHECK(mid <= n.two_bound * (1 + 1e-12) + 1e-14);
      const double dense_norm = t.empty() ? 0.0 : spectral_norm_dense(crd::testing::dense(t));
      CHECK(n.two_norm == doctest::Approx(dense_norm).epsilon(1e-9));
    }
  }
}
