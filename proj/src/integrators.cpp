#include "crd/integrators.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>

namespace crd {

namespace {

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

double inf_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

void SolverConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("solver: dt must be > 0");
  if (!(t_final >= dt)) throw DomainError("solver: t_final must be >= dt");
  if (record_every < 1) throw DomainError("solver: record_every must be >= 1");
  if (!(blowup_cap > 0.0)) throw DomainError("solver: blowup_cap must be > 0");
}

Index SolverConfig::steps() const {
  validate();
  return static_cast<Index>(std::llround(t_final / dt));
}

double cfl_indicator(const SolverConfig& cfg, const SpatialGrid& grid,
                     double max_diffusion) {
  return cfg.dt * 4.0 * grid.d * static_cast<double>(grid.n) * grid.n * max_diffusion;
}

std::vector<double> rk4_step(const Rhs& f, double t, std::span<const double> y,
                             double h) {
  if (!(h > 0.0)) throw DomainError("rk4_step: step must be > 0");
  const std::size_t n = y.size();
  std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
  auto stage = [&](std::vector<double>& k, double tt) {
    f(tt, tmp, k);
    if (!all_finite(k))
      throw SolverError("rk4_step: non-finite right-hand side at t = " +
                        format_double(tt));
  };
  f(t, y, k1);
  if (!all_finite(k1))
    throw SolverError("rk4_step: non-finite right-hand side at t = " + format_double(t));
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
  stage(k2, t + 0.5 * h);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
  stage(k3, t + 0.5 * h);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
  stage(k4, t + h);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

Trajectory integrate(const Rhs& f, std::span<const double> y0,
                     const SolverConfig& cfg,
                     const std::function<std::vector<double>(std::span<const double>)>&
                         observe) {
  const Index steps = cfg.steps();
  Trajectory traj;
  auto record = [&](Index step, std::span<const double> y) {
    traj.times.push_back(static_cast<double>(step) * cfg.dt);
    traj.states.push_back(observe ? observe(y) : std::vector<double>(y.begin(), y.end()));
  };
  std::vector<double> y(y0.begin(), y0.end());
  record(0, y);
  for (Index s = 1; s <= steps; ++s) {
    try {
      y = rk4_step(f, static_cast<double>(s - 1) * cfg.dt, y, cfg.dt);
    } catch (const SolverError& e) {
      traj.blowup = true;
      traj.meta = e.what();
      break;
    }
    if (!all_finite(y) || inf_norm(y) > cfg.blowup_cap) {
      traj.blowup = true;
      traj.meta = "state left the blow-up cap at t = " +
                  format_double(static_cast<double>(s) * cfg.dt);
      break;
    }
    if (s % cfg.record_every == 0 || s == steps) record(s, y);
  }
  return traj;
}

Trajectory solve_nonlinear(const DiscretizedSystem& system,
                           std::span<const double> y0, const SolverConfig& cfg) {
  if (static_cast<Index>(y0.size()) != system.dim())
    throw DomainError("solve_nonlinear: initial state has wrong length");
  Rhs f = [&system](double, std::span<const double> y, std::span<double> dy) {
    system.rhs(y, dy);
  };
  auto traj = integrate(f, y0, cfg);
  traj.species = system.species();
  traj.nodes = system.nodes();
  return traj;
}

Trajectory solve_linear(const CarlemanSystem& system, std::span<const double> z0,
                        const SolverConfig& cfg, bool record_full) {
  const Index n = system.dim();
  if (static_cast<Index>(z0.size()) != n)
    throw DomainError("solve_linear: initial state has wrong length");
  Eigen::Map<const Eigen::VectorXd> b(system.b.data(), n);
  Rhs f = [&](double, std::span<const double> z, std::span<double> dz) {
    Eigen::Map<const Eigen::VectorXd> zv(z.data(), n);
    Eigen::Map<Eigen::VectorXd> dv(dz.data(), n);
    dv.noalias() = system.M * zv;
    dv += b;
  };
  const Index first = system.block_dim(1);
  std::function<std::vector<double>(std::span<const double>)> observe;
  if (!record_full)
    observe = [first](std::span<const double> z) {
      return std::vector<double>(z.begin(), z.begin() + first);
    };
  auto traj = integrate(f, z0, cfg, observe);
  traj.species = system.species;
  traj.nodes = record_full ? n / system.species : system.nodes;
  return traj;
}

ErrorMetrics error_metrics(const Trajectory& a, const Trajectory& b) {
  if (a.times.size() != b.times.size())
    throw DomainError("error_metrics: trajectories have different lengths");
  if (a.species != b.species || a.species < 1)
    throw DomainError("error_metrics: species counts differ");
  ErrorMetrics m;
  m.species = a.species;
  m.times = a.times;
  m.averaged_rel.assign(a.species, 0.0);
  m.excluded.assign(a.species, 0);
  std::vector<Index> counted(a.species, 0);
  for (std::size_t t = 0; t < a.times.size(); ++t) {
    if (std::abs(a.times[t] - b.times[t]) > 1e-12 * std::max(1.0, std::abs(b.times[t])))
      throw DomainError("error_metrics: time grids differ");
    const auto& x = a.states[t];
    const auto& r = b.states[t];
    if (x.size() != r.size() || x.size() % a.species != 0)
      throw DomainError("error_metrics: state dimensions differ");
    const std::size_t nodes = x.size() / a.species;
    std::vector<double> abs_row(a.species, 0.0), rel_row(a.species, 0.0);
    for (int s = 0; s < a.species; ++s) {
      Index used = 0;
      double rel_sum = 0.0;
      for (std::size_t p = 0; p < nodes; ++p) {
        const std::size_t i = s * nodes + p;
        const double diff = x[i] - r[i];
        abs_row[s] = std::max(abs_row[s], std::abs(diff));
        if (std::abs(r[i]) < kRelativeGuard) {
          ++m.excluded[s];
          continue;
        }
        const double rel = std::abs(diff / r[i]);
        rel_sum += rel;
        m.averaged_rel[s] += rel;
        ++used;
      }
      rel_row[s] = used > 0 ? rel_sum / used : 0.0;
      counted[s] += used;
    }
    m.abs_inf.push_back(std::move(abs_row));
    m.rel_mean.push_back(std::move(rel_row));
  }
  for (int s = 0; s < a.species; ++s)
    if (counted[s] > 0) m.averaged_rel[s] /= counted[s];
  return m;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << "t,species,node,value\n";
  for (std::size_t t = 0; t < traj.times.size(); ++t) {
    const auto& y = traj.states[t];
    const std::size_t nodes = y.size() / traj.species;
    for (int s = 0; s < traj.species; ++s)
      for (std::size_t p = 0; p < nodes; ++p)
        os << format_double(traj.times[t]) << ',' << s + 1 << ',' << p << ','
           << format_double(y[s * nodes + p]) << '\n';
  }
}

void write_metrics_csv(std::ostream& os, const ErrorMetrics& m) {
  os << "t,species,err_abs_inf,err_rel_mean\n";
  for (std::size_t t = 0; t < m.times.size(); ++t)
    for (int s = 0; s < m.species; ++s)
      os << format_double(m.times[t]) << ',' << s + 1 << ','
         << format_double(m.abs_inf[t][s]) << ',' << format_double(m.rel_mean[t][s])
         << '\n';
}

}  // namespace crd
