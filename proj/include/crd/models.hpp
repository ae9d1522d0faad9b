#pragma once

// Gierer-Meinhardt activator-inhibitor model and the experiment harness
// comparing RK4 on the RDE with RK4 on truncated Carleman systems.
//
//   dy1/dt = D1 Lap y1 - mu1 y1 + c1 y1^2 y2 + b1
//   dy2/dt = D2 Lap y2 - mu2 y2 - c1 y1^2 y2 + b2

#include <optional>
#include <string>
#include <vector>

#include "crd/carleman.hpp"
#include "crd/integrators.hpp"
#include "crd/reaction_network.hpp"
#include "crd/spatial.hpp"

namespace crd {

struct GMParams {
  double D1 = 1e-4;
  double D2 = 5e-5;
  double mu1 = 5.0;
  double mu2 = 5.0;
  double c1 = 1.0;
  double b1 = 1.0;
  double b2 = 0.0;

  void validate() const;
};

/// Decay y_i -> 0 at mu_i (y_i -> 2 y_i when mu_i < 0) and the cubic
/// 2 y1 + y2 -> 3 y1 at c1 (2 y1 + y2 -> y1 + 2 y2 at |c1| when c1 < 0).
ReactionNetwork gm_network(const GMParams& p);
CoefficientTensors gm_tensors(const GMParams& p);
DiscretizedSystem gm_system(const GMParams& p, const SpatialGrid& grid);

/// mu2 = c1 = 1, b1 = 0.
GMParams rescaled_gm(double mu1, double b2, double D1, double D2);

bool has_two_equilibria(double mu1, double b2);

/// [1 + sin(2 pi x), 1 + cos(4 pi x)] on the first axis coordinate.
std::vector<double> fig2_initial_condition(const SpatialGrid& grid);

struct CompareResult {
  Trajectory reference;
  std::vector<int> k_orders;
  std::vector<Trajectory> carleman;  // first block only, per k
  std::vector<ErrorMetrics> metrics;
};

CompareResult compare(const DiscretizedSystem& system, std::span<const double> y0,
                      const SolverConfig& solver, const std::vector<int>& k_orders,
                      Representation repr = Representation::grouped,
                      const CarlemanLimits& limits = {});

struct Fig2Setup {
  GMParams params;
  SpatialGrid grid{50, 1};
  SolverConfig solver{1e-3, 1.0, 1};
  std::vector<int> k_orders{2, 3};
};

Fig2Setup fig2_setup();
CompareResult fig2_experiment(const Fig2Setup& setup = fig2_setup());

enum class GMField { D1, D2, mu1, mu2, c1, b1, b2 };

GMField parse_gm_field(const std::string& name);
const char* to_string(GMField field);
void set_field(GMParams& p, GMField field, double value);

struct SweepAxis {
  GMField field = GMField::c1;
  std::vector<double> values;
};

struct SweepSpec {
  std::vector<SweepAxis> axes;  // one or two
  GMParams fixed;
  bool d2_half_d1 = false;      // D2 follows D1 / 2 in every cell
  int k = 3;
  Representation repr = Representation::grouped;
  SpatialGrid grid{50, 1};
  SolverConfig solver{1e-3, 1.0, 1};
  std::vector<double> y0;       // empty: the fig2 initial condition

  void validate() const;
};

struct SweepRow {
  double param1 = 0.0;
  std::optional<double> param2;
  int species = 1;
  double mean_rel_err = 0.0;
  Index excluded_nodes = 0;
  bool two_equilibria = false;
  bool blowup = false;
};

/// n log-spaced values from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, int n);

/// Rows ordered by cell (first axis outer) then species, independent of the
/// thread count.
std::vector<SweepRow> sweep(const SweepSpec& spec, int threads = 1);

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

}  // namespace crd
