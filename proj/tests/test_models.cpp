#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "support.hpp"

#include "crd/models.hpp"

using namespace crd;
using crd::testing::Gen;

namespace {

SweepSpec small_sweep() {
  SweepSpec spec;
  spec.fixed = GMParams{3e-4, 2e-5, 1, 1, 1, 1, 1};
  spec.axes = {SweepAxis{GMField::c1, log_grid(1e-3, 3e-2, 4)}};
  spec.grid = SpatialGrid::make(10, 1);
  spec.solver = SolverConfig{1e-3, 0.2, 10};
  return spec;
}

}  // namespace

TEST_CASE("GM tensors") {
  GMParams p;
  p.c1 = 0.7;
  p.b1 = 0.0;
  p.b2 = 0.0;
  const auto t = gm_tensors(p);
  CHECK(t.source == std::vector<double>{0.0, 0.0});
  REQUIRE(t.max_order() == 3);
  CHECK(t.order(2)->empty());
  const auto& f3 = t.order(3)->entries;
  REQUIRE(f3.size() == 2);
  CHECK(f3[0].row == 0);
  CHECK(f3[0].col == 1);
  CHECK(f3[0].value == 0.7);
  CHECK(f3[1].row == 1);
  CHECK(f3[1].col == 1);
  CHECK(f3[1].value == -0.7);
  const auto& f1 = t.order(1)->entries;
  REQUIRE(f1.size() == 2);
  CHECK(f1[0].value == -p.mu1);
  CHECK(f1[1].value == -p.mu2);
}

TEST_CASE("GM sign handling") {
  GMParams p;
  p.mu1 = -2.0;
  p.c1 = -0.5;
  const auto f = rhs_eval(gm_tensors(p), std::vector<double>{2.0, 3.0});
  CHECK(f[0] == doctest::Approx(p.b1 + 2.0 * 2 + p.c1 * 4 * 3).epsilon(1e-15));
  CHECK(f[1] == doctest::Approx(p.b2 - p.mu2 * 3 - p.c1 * 4 * 3).epsilon(1e-15));
  p.mu2 = 0.0;
  p.c1 = 0.0;
  CHECK(gm_network(p).reactions().size() == 1);
  p.D1 = 0.0;
  CHECK_THROWS_AS(gm_network(p), DomainError);
}

TEST_CASE("rescaled GM") {
  const auto r = rescaled_gm(0.3, 0.01, 1e-4, 5e-5);
  const GMParams want{1e-4, 5e-5, 0.3, 1.0, 1.0, 0.0, 0.01};
  CHECK(r.D1 == want.D1);
  CHECK(r.D2 == want.D2);
  CHECK(r.mu1 == want.mu1);
  CHECK(r.mu2 == 1.0);
  CHECK(r.c1 == 1.0);
  CHECK(r.b1 == 0.0);
  CHECK(r.b2 == want.b2);
  CHECK_FALSE(has_two_equilibria(50, 0.01));
  CHECK(has_two_equilibria(0.01, 0.01));
}

TEST_CASE("has_two_equilibria") {
  CHECK(has_two_equilibria(1, 1));
  CHECK_FALSE(has_two_equilibria(50, 0.01));
  CHECK_FALSE(has_two_equilibria(-1, 1));
  CHECK_FALSE(has_two_equilibria(2, 1));
  CHECK_THROWS_AS(has_two_equilibria(1, 0), DomainError);
}

TEST_CASE("discretised GM matches the direct formula at random states") {
  Gen g(100);
  for (int trial = 0; trial < 100; ++trial) {
    GMParams p{g.uniform(1e-5, 1e-2), g.uniform(1e-5, 1e-2), g.uniform(-2, 6),
               g.uniform(-2, 6), g.uniform(-2, 2), g.uniform(-1, 1), g.uniform(-1, 1)};
    const auto grid = SpatialGrid::make(g.integer(3, 8), 1);
    const auto sys = gm_system(p, grid);
    const Index n = grid.nodes();
    const auto y = g.vec(2 * n, 0.0, 2.0);
    std::vector<double> dy(2 * n);
    sys.rhs(y, dy);
    const double n2 = static_cast<double>(grid.n) * grid.n;
    for (Index i = 0; i < n; ++i) {
      const Index l = (i + n - 1) % n, r = (i + 1) % n;
      const double y1 = y[i], y2 = y[n + i];
      const double lap1 = n2 * (y[l] - 2 * y1 + y[r]);
      const double lap2 = n2 * (y[n + l] - 2 * y2 + y[n + r]);
      const double cubic = p.c1 * y1 * y1 * y2;
      CHECK(dy[i] == doctest::Approx(p.D1 * lap1 - p.mu1 * y1 + cubic + p.b1).epsilon(1e-12).scale(1.0));
      CHECK(dy[n + i] == doctest::Approx(p.D2 * lap2 - p.mu2 * y2 - cubic + p.b2).epsilon(1e-12).scale(1.0));
    }
  }
}

TEST_CASE("fig2 initial condition and setup") {
  const auto grid = SpatialGrid::make(4, 1);
  const auto y0 = fig2_initial_condition(grid);
  REQUIRE(y0.size() == 8);
  for (int i = 0; i < 4; ++i) {
    const double x = i / 4.0;
    CHECK(y0[i] == doctest::Approx(1 + std::sin(2 * std::numbers::pi * x)).scale(1.0));
    CHECK(y0[4 + i] == doctest::Approx(1 + std::cos(4 * std::numbers::pi * x)).scale(1.0));
  }
  const auto s = fig2_setup();
  CHECK(s.params.D1 == 1e-4);
  CHECK(s.params.D2 == s.params.D1 / 2);
  CHECK(s.params.mu1 == 5.0);
  CHECK(s.params.mu2 == 5.0);
  CHECK(s.params.c1 == 1.0);
  CHECK(s.params.b1 == 1.0);
  CHECK(s.params.b2 == 0.0);
  CHECK(s.grid.n == 50);
  CHECK(s.solver.dt == 1e-3);
  CHECK(s.k_orders == std::vector<int>{2, 3});
}

TEST_CASE("fig2 experiment: k = 3 beats k = 2 after the start") {
  const auto res = fig2_experiment();
  REQUIRE(res.metrics.size() == 2);
  const auto& m2 = res.metrics[0];
  const auto& m3 = res.metrics[1];
  for (int s = 0; s < 2; ++s) {
    std::size_t better = 0;
    for (std::size_t t = 1; t < m2.times.size(); ++t)
      if (m3.abs_inf[t][s] < m2.abs_inf[t][s]) ++better;
    CHECK(better == m2.times.size() - 1);
  }
}

TEST_CASE("linear GM is reproduced exactly for every k") {
  auto setup = fig2_setup();
  setup.params.c1 = 0.0;
  setup.grid = SpatialGrid::make(20, 1);
  setup.solver.t_final = 0.5;
  setup.k_orders = {1, 2, 3};
  const auto res = fig2_experiment(setup);
  for (const auto& m : res.metrics)
    for (const auto& row : m.rel_mean)
      for (double v : row) CHECK(v <= 1e-10);
}

TEST_CASE("y2 decays in L2 without sources or coupling") {
  GMParams p;
  p.c1 = 0.0;
  p.b2 = 0.0;
  const auto grid = SpatialGrid::make(16, 1);
  const auto traj = solve_nonlinear(gm_system(p, grid), fig2_initial_condition(grid),
                                    SolverConfig{1e-3, 0.5, 10});
  double prev = INFINITY;
  for (const auto& s : traj.states) {
    double l2 = 0.0;
    for (Index i = 16; i < 32; ++i) l2 += s[i] * s[i];
    CHECK(l2 < prev);
    prev = l2;
  }
}

TEST_CASE("GM field names") {
  for (auto f : {GMField::D1, GMField::D2, GMField::mu1, GMField::mu2, GMField::c1,
                 GMField::b1, GMField::b2})
    CHECK(parse_gm_field(to_string(f)) == f);
  CHECK_THROWS_AS(parse_gm_field("mu3"), DomainError);
  GMParams p;
  set_field(p, GMField::b2, 0.25);
  CHECK(p.b2 == 0.25);
}

TEST_CASE("log_grid") {
  const auto v = log_grid(1e-3, 1e-1, 3);
  REQUIRE(v.size() == 3);
  CHECK(v[0] == doctest::Approx(1e-3));
  CHECK(v[1] == doctest::Approx(1e-2));
  CHECK(v[2] == doctest::Approx(1e-1));
  CHECK(log_grid(2.0, 5.0, 1) == std::vector<double>{2.0});
  CHECK_THROWS_AS(log_grid(0.0, 1.0, 3), DomainError);
}

TEST_CASE("single-cell sweep equals a direct compare") {
  auto spec = small_sweep();
  spec.axes[0].values = {0.02};
  const auto rows = sweep(spec);
  REQUIRE(rows.size() == 2);
  GMParams p = spec.fixed;
  p.c1 = 0.02;
  const auto direct = compare(gm_system(p, spec.grid), fig2_initial_condition(spec.grid),
                              spec.solver, {spec.k});
  CHECK(rows[0].mean_rel_err == direct.metrics[0].averaged_rel[0]);
  CHECK(rows[1].mean_rel_err == direct.metrics[0].averaged_rel[1]);
  CHECK_FALSE(rows[0].param2.has_value());
  CHECK(rows[0].species == 1);
  CHECK(rows[1].species == 2);
  CHECK(rows[0].two_equilibria == has_two_equilibria(1, 1));
}

TEST_CASE("sweep output does not depend on the thread count") {
  auto spec = small_sweep();
  spec.axes.push_back(SweepAxis{GMField::mu1, {0.5, 1.0, 2.0}});
  const auto one = sweep(spec, 1);
  const auto four = sweep(spec, 4);
  REQUIRE(one.size() == 4 * 3 * 2);
  std::ostringstream a, b;
  write_sweep_csv(a, one);
  write_sweep_csv(b, four);
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("param1,param2,species,mean_rel_err,excluded_nodes,two_equilibria,blowup\n", 0) == 0);
}

TEST_CASE("larger mu1 suppresses the y1 error along a slice") {
  SweepSpec spec;
  spec.fixed = rescaled_gm(1.0, 0.01, 1e-4, 5e-5);
  spec.d2_half_d1 = true;
  spec.axes = {SweepAxis{GMField::mu1, {5.0, 10.0, 20.0, 50.0}}};
  spec.grid = SpatialGrid::make(10, 1);
  spec.solver = SolverConfig{1e-3, 0.5, 10};
  const auto rows = sweep(spec);
  double prev = INFINITY;
  for (const auto& r : rows) {
    if (r.species != 1) continue;
    CHECK_FALSE(r.blowup);
    CHECK(r.mean_rel_err < prev);
    prev = r.mean_rel_err;
  }
}

TEST_CASE("sweep flags") {
  auto spec = small_sweep();
  spec.fixed.b2 = 0.0;
  spec.axes[0].values = {0.01};
  for (const auto& r : sweep(spec)) CHECK_FALSE(r.two_equilibria);

  auto unstable = small_sweep();
  unstable.fixed.mu1 = -40.0;
  unstable.axes[0].values = {5.0};
  unstable.solver = SolverConfig{1e-3, 1.0, 10};
  unstable.solver.blowup_cap = 1e3;
  for (const auto& r : sweep(unstable)) {
    CHECK(r.blowup);
    CHECK(std::isnan(r.mean_rel_err));
  }

  auto bad = small_sweep();
  bad.axes.clear();
  CHECK_THROWS_AS(sweep(bad), DomainError);
}
