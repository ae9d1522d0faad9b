#pragma once

// Fixed-step classical RK4 for the discretised RDE and for the linear
// Carleman system dZ/dt = M Z + b, plus trajectory error metrics.

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "crd/carleman.hpp"
#include "crd/common.hpp"
#include "crd/spatial.hpp"

namespace crd {

struct SolverConfig {
  double dt = 1e-3;
  double t_final = 1.0;
  int record_every = 1;
  double blowup_cap = 1e12;  // on the state infinity norm

  void validate() const;
  Index steps() const;
};

/// dt * 4 d n^2 max D; values above 1 deserve a warning.
double cfl_indicator(const SolverConfig& cfg, const SpatialGrid& grid,
                     double max_diffusion);

struct Trajectory {
  std::vector<double> times;
  std::vector<std::vector<double>> states;
  int species = 1;
  Index nodes = 0;
  bool blowup = false;
  std::string meta;
};

using Rhs = std::function<void(double, std::span<const double>, std::span<double>)>;

/// One classical RK4 step. Throws SolverError when a stage is not finite.
std::vector<double> rk4_step(const Rhs& f, double t, std::span<const double> y,
                             double h);

/// Fixed-step integration recording t = i dt for i a multiple of
/// record_every (and the final step). Stops with blowup = true once the state
/// leaves the cap or turns non-finite.
Trajectory integrate(const Rhs& f, std::span<const double> y0,
                     const SolverConfig& cfg,
                     const std::function<std::vector<double>(std::span<const double>)>&
                         observe = {});

Trajectory solve_nonlinear(const DiscretizedSystem& system,
                           std::span<const double> y0, const SolverConfig& cfg);

/// Records only the first Carleman block unless record_full is set.
Trajectory solve_linear(const CarlemanSystem& system, std::span<const double> z0,
                        const SolverConfig& cfg, bool record_full = false);

// Errors of `a` against the reference `b`. abs_inf is symmetric, rel is not.
struct ErrorMetrics {
  int species = 1;
  std::vector<double> times;
  std::vector<std::vector<double>> abs_inf;   // [time][species]
  std::vector<std::vector<double>> rel_mean;  // [time][species], mean |rel| over nodes
  std::vector<double> averaged_rel;           // per species over nodes and times
  std::vector<Index> excluded;                // per species, |reference| < guard
};

inline constexpr double kRelativeGuard = 1e-12;

ErrorMetrics error_metrics(const Trajectory& a, const Trajectory& b);

void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
void write_metrics_csv(std::ostream& os, const ErrorMetrics& m);

/// Shortest round-trip decimal form.
std::string format_double(double x);

}  // namespace crd
