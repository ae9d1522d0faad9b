#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

#include "doctest.h"
#include "support.hpp"

#include "crd/carleman.hpp"
#include "crd/integrators.hpp"
#include "crd/lchs.hpp"
#include "crd/models.hpp"

using namespace crd;
using crd::testing::Gen;

namespace {

// A = B B^* + i H with H Hermitian, so the Hermitian part is PSD.
Eigen::MatrixXcd dissipative(Gen& g, int n) {
  const Eigen::MatrixXcd b = g.complex_matrix(n, 0.6);
  const Eigen::MatrixXcd h0 = g.complex_matrix(n, 0.6);
  const Eigen::MatrixXcd h = (h0 + h0.adjoint()) / 2.0;
  return b * b.adjoint() + Complex(0, 1) * h;
}

double fro_error(const Eigen::MatrixXcd& a, const LCHSConfig& cfg) {
  const Eigen::MatrixXcd want = (-a * cfg.t).exp();
  return (reconstruct_propagator(a, cfg) - want).norm();
}

LCHSConfig config(double t, int nodes = 2048, double K = 100.0) {
  LCHSConfig cfg;
  cfg.t = t;
  cfg.nodes = nodes;
  cfg.K = K;
  return cfg;
}

}  // namespace

TEST_CASE("config validation names the field") {
  LCHSConfig cfg;
  cfg.beta = 1.5;
  CHECK_THROWS_WITH_AS(cfg.validate(), "beta must lie in (0, 1)", DomainError);
  cfg.beta = 0.8;
  cfg.nodes = 1;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
}

TEST_CASE("cartesian_decompose") {
  Gen g(1);
  const Eigen::MatrixXcd m = g.complex_matrix(4);
  const auto lh = cartesian_decompose(m);
  CHECK((lh.L + Complex(0, 1) * lh.H - m).norm() <= 1e-14);
  CHECK((lh.L - lh.L.adjoint()).norm() <= 1e-14);
  CHECK((lh.H - lh.H.adjoint()).norm() <= 1e-14);

  const Eigen::MatrixXcd herm = (m + m.adjoint()) / 2.0;
  CHECK(cartesian_decompose(herm).H.norm() == 0.0);
  const Eigen::MatrixXcd anti = (m - m.adjoint()) / 2.0;
  CHECK(cartesian_decompose(anti).L.norm() == 0.0);
  CHECK_THROWS_AS(cartesian_decompose(Eigen::MatrixXcd(2, 3)), DomainError);
}

TEST_CASE("kernel values and decay") {
  CHECK(kernel(0.0, 0.8).real() == doctest::Approx(0.3339460119907067).epsilon(1e-14));
  CHECK(kernel(0.0, 0.8).imag() == doctest::Approx(0.0));
  double prev = INFINITY;
  for (double k : {10.0, 100.0, 1000.0}) {
    const double mag = std::max(std::abs(kernel(k, 0.8)), std::abs(kernel(-k, 0.8)));
    CHECK(mag < prev);
    prev = mag;
  }
  CHECK(prev < 1e-20);
}

TEST_CASE("scalar reconstructions") {
  Eigen::MatrixXcd one(1, 1);
  one(0, 0) = 1.0;
  for (double beta : {0.5, 0.8, 0.9}) {
    LCHSConfig cfg = config(1.0);
    cfg.beta = beta;
    cfg.K = beta == 0.5 ? 400.0 : 100.0;
    cfg.nodes = 8192;
    const Complex r = reconstruct_propagator(one, cfg)(0, 0);
    CHECK(std::abs(r - std::exp(-1.0)) <= 1e-3);
    CHECK(std::abs(r.imag()) <= 1e-10);
  }
  CHECK(reconstruct_propagator(one, config(1.0))(0, 0).real() ==
        doctest::Approx(0.36787944117144233).epsilon(1e-6));
}

TEST_CASE("diagonal PSD reconstruction") {
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(3, 3);
  d(1, 1) = 1.0;
  d(2, 2) = 2.0;
  const Eigen::MatrixXcd r = reconstruct_propagator(d, config(1.0));
  CHECK(std::abs(r(0, 0) - 1.0) <= 1e-3);
  CHECK(std::abs(r(1, 1) - std::exp(-1.0)) <= 1e-3);
  CHECK(std::abs(r(2, 2) - std::exp(-2.0)) <= 1e-3);
  CHECK(std::abs(r(0, 1)) <= 1e-12);
}

TEST_CASE("t = 0 gives the identity") {
  Gen g(2);
  const auto a = dissipative(g, 4);
  const Eigen::MatrixXcd r = reconstruct_propagator(a, config(0.0));
  CHECK((r - Eigen::MatrixXcd::Identity(4, 4)).norm() <= 1e-6);
}

TEST_CASE("PSD violation is refused") {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(2, 2);
  a(1, 1) = -0.5;
  CHECK_THROWS_AS(reconstruct_propagator(a, config(1.0)), StabilityError);
  CHECK_THROWS_AS(reconstruct_propagator(Eigen::MatrixXcd::Identity(65, 65), config(1.0)),
                  ResourceLimitError);
}

TEST_CASE("lcu coefficients") {
  const auto c = lcu_coefficients(config(1.0, 2000));
  CHECK(c.k.size() == 2000);
  CHECK(c.k.front() > -100.0);
  CHECK(c.k.back() < 100.0);
  // nodes are symmetric about 0 and coefficients conjugate-symmetric
  const std::size_t n = c.k.size();
  for (std::size_t j = 0; j < n; ++j) {
    CHECK(c.k[j] == doctest::Approx(-c.k[n - 1 - j]).epsilon(1e-12));
    CHECK(std::abs(c.c[j] - std::conj(c.c[n - 1 - j])) <= 1e-15);
  }
  double prev = 0.0;
  for (double K : {50.0, 100.0, 200.0}) {
    const double norm = lcu_coefficients(config(1.0, 4096, K)).one_norm;
    CHECK(std::isfinite(norm));
    if (prev > 0.0) CHECK(std::abs(norm - prev) <= 0.05 * prev);
    prev = norm;
  }
  CHECK(lcu_coefficients(config(1.0, 13)).k.size() == 16);
}

TEST_CASE("default truncation") {
  CHECK(default_truncation(1.0, std::exp(-1.0), 1.0) == doctest::Approx(1.0));
  CHECK(default_truncation(std::exp(1.0), std::exp(-1.0), 0.5) == doctest::Approx(4.0));
  CHECK_THROWS_AS(default_truncation(0.5, 0.1, 0.8), DomainError);
}

TEST_CASE("random reconstructions: accuracy, contractivity, convergence") {
  Gen g(808);
  for (int trial = 0; trial < 8; ++trial) {
    const int n = g.integer(1, 8);
    const auto a = dissipative(g, n);
    const double t = g.uniform(0.1, 2.0);
    const auto cfg = config(t);
    const Eigen::MatrixXcd r = reconstruct_propagator(a, cfg);
    CHECK((r - (-a * t).exp()).norm() <= 1e-3);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(r);
    CHECK(svd.singularValues()(0) <= 1.0 + 1e-6);
    const double e1 = fro_error(a, config(t, 512));
    const double e2 = fro_error(a, config(t, 1024));
    const double e3 = fro_error(a, config(t, 2048));
    CHECK(e2 <= e1);
    CHECK((e3 <= e2 || e3 <= 1e-6));
  }
}

TEST_CASE("reconstruction commutes with a normal matrix") {
  Gen g(5);
  const int n = 5;
  Eigen::MatrixXcd q = g.complex_matrix(n).householderQr().householderQ();
  Eigen::VectorXcd lambda(n);
  for (int i = 0; i < n; ++i) lambda[i] = Complex(g.uniform(0, 2), g.uniform(-2, 2));
  const Eigen::MatrixXcd a = q * lambda.asDiagonal() * q.adjoint();
  const Eigen::MatrixXcd r = reconstruct_propagator(a, config(1.0));
  CHECK((r * a - a * r).norm() <= 1e-6);
}

TEST_CASE("inhomogeneous solve") {
  Eigen::MatrixXcd one(1, 1);
  one(0, 0) = 1.0;
  Eigen::VectorXcd b(1), z0(1);
  b(0) = 1.0;
  z0(0) = 0.0;
  const auto z = solve_inhomogeneous(one, b, z0, config(1.0));
  CHECK(std::abs(z(0) - 0.6321205588285577) <= 5e-3);

  Gen g(9);
  const auto a = dissipative(g, 4);
  Eigen::VectorXcd start = g.complex_matrix(4).col(0);
  const auto cfg = config(1.0);
  const Eigen::VectorXcd zero = Eigen::VectorXcd::Zero(4);
  CHECK((solve_inhomogeneous(a, zero, start, cfg) - reconstruct_propagator(a, cfg) * start)
            .norm() <= 1e-12);
  CHECK_THROWS_AS(solve_inhomogeneous(a, Eigen::VectorXcd::Zero(3), start, cfg), DomainError);
}

TEST_CASE("shifted GM Carleman matrix against the linear RK4 solve") {
  GMParams p;
  p.D1 = 0.01;
  p.D2 = 0.005;
  p.mu1 = 1.0;
  p.mu2 = 1.0;
  p.c1 = 0.5;
  p.b1 = 0.2;
  const auto grid = SpatialGrid::make(4, 1);
  const auto cs = assemble(gm_system(p, grid), 2, Representation::grouped);
  const Index n = cs.dim();
  const Eigen::MatrixXd m = crd::testing::dense(cs.M);
  // shift so that the Hermitian part of A = -M + shift I is PSD
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es((m + m.transpose()) / 2.0);
  const double shift = std::max(0.0, es.eigenvalues().maxCoeff()) + 0.1;
  const Eigen::MatrixXcd a = (-m + shift * Eigen::MatrixXd::Identity(n, n)).cast<Complex>();

  CarlemanSystem shifted = cs;
  shifted.M = (m - shift * Eigen::MatrixXd::Identity(n, n)).sparseView();
  const auto z0 = embed(fig2_initial_condition(grid), 2, grid.nodes(), 2,
                        Representation::grouped);
  const double t = 0.5;
  const auto rk = solve_linear(shifted, z0, SolverConfig{1e-3, t, 500}, true);

  LCHSConfig cfg = config(t);
  Eigen::VectorXcd b(n), start(n);
  for (Index i = 0; i < n; ++i) {
    b(i) = cs.b[i];
    start(i) = z0[i];
  }
  const Eigen::VectorXcd z = solve_inhomogeneous(a, b, start, cfg);
  double num = 0.0, den = 0.0;
  for (Index i = 0; i < n; ++i) {
    num += std::norm(z(i) - rk.states.back()[i]);
    den += rk.states.back()[i] * rk.states.back()[i];
  }
  CHECK(std::sqrt(num / den) <= 1e-2);
}
