#include "crd/models.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <ostream>
#include <thread>

namespace crd {

void GMParams::validate() const {
  const double all[] = {D1, D2, mu1, mu2, c1, b1, b2};
  for (double v : all)
    if (!std::isfinite(v)) throw DomainError("gm: parameters must be finite");
  if (!(D1 > 0.0) || !(D2 > 0.0)) throw DomainError("gm: D1 and D2 must be > 0");
}

ReactionNetwork gm_network(const GMParams& p) {
  p.validate();
  std::vector<Reaction> reactions;
  const double mu[2] = {p.mu1, p.mu2};
  for (int i = 0; i < 2; ++i) {
    if (mu[i] == 0.0) continue;
    Reaction r;
    r.alpha = {0, 0};
    r.beta = {0, 0};
    r.alpha[i] = 1;
    r.beta[i] = mu[i] > 0.0 ? 0 : 2;
    r.rate = std::abs(mu[i]);
    reactions.push_back(r);
  }
  if (p.c1 != 0.0) {
    Reaction r;
    r.alpha = {2, 1};
    r.beta = p.c1 > 0.0 ? std::vector<int>{3, 0} : std::vector<int>{1, 2};
    r.rate = std::abs(p.c1);
    reactions.push_back(r);
  }
  return ReactionNetwork(2, std::move(reactions));
}

CoefficientTensors gm_tensors(const GMParams& p) {
  return build_tensors(gm_network(p), {p.b1, p.b2});
}

DiscretizedSystem gm_system(const GMParams& p, const SpatialGrid& grid) {
  return DiscretizedSystem(gm_tensors(p), {p.D1, p.D2}, grid);
}

GMParams rescaled_gm(double mu1, double b2, double D1, double D2) {
  return GMParams{D1, D2, mu1, 1.0, 1.0, 0.0, b2};
}

bool has_two_equilibria(double mu1, double b2) {
  if (b2 == 0.0) throw DomainError("has_two_equilibria: b2 must be non-zero");
  const double ratio = mu1 / b2;
  return ratio > 0.0 && ratio < 2.0;
}

std::vector<double> fig2_initial_condition(const SpatialGrid& grid) {
  const Index nd = grid.nodes();
  std::vector<double> y(2 * nd);
  for (Index p = 0; p < nd; ++p) {
    const double x = grid.coordinates(p)[0];
    y[p] = 1.0 + std::sin(2.0 * std::numbers::pi * x);
    y[nd + p] = 1.0 + std::cos(4.0 * std::numbers::pi * x);
  }
  return y;
}

CompareResult compare(const DiscretizedSystem& system, std::span<const double> y0,
                      const SolverConfig& solver, const std::vector<int>& k_orders,
                      Representation repr, const CarlemanLimits& limits) {
  if (k_orders.empty()) throw DomainError("compare: no truncation orders given");
  CompareResult out;
  out.k_orders = k_orders;
  out.reference = solve_nonlinear(system, y0, solver);
  for (int k : k_orders) {
    const auto cs = assemble(system, k, repr, limits);
    const auto z0 = embed(y0, system.species(), system.nodes(), k, repr);
    auto traj = solve_linear(cs, z0, solver);
    // Metrics only over the common prefix when either run blew up.
    Trajectory ref = out.reference;
    const std::size_t n = std::min(ref.times.size(), traj.times.size());
    ref.times.resize(n);
    ref.states.resize(n);
    Trajectory cut = traj;
    cut.times.resize(n);
    cut.states.resize(n);
    out.metrics.push_back(error_metrics(cut, ref));
    out.carleman.push_back(std::move(traj));
  }
  return out;
}

Fig2Setup fig2_setup() {
  Fig2Setup s;
  s.params = GMParams{1e-4, 1e-4 / 2.0, 5.0, 5.0, 1.0, 1.0, 0.0};
  return s;
}

CompareResult fig2_experiment(const Fig2Setup& setup) {
  const auto system = gm_system(setup.params, setup.grid);
  const auto y0 = fig2_initial_condition(setup.grid);
  return compare(system, y0, setup.solver, setup.k_orders, Representation::grouped);
}

GMField parse_gm_field(const std::string& name) {
  static const std::pair<const char*, GMField> names[] = {
      {"D1", GMField::D1},   {"D2", GMField::D2}, {"mu1", GMField::mu1},
      {"mu2", GMField::mu2}, {"c1", GMField::c1}, {"b1", GMField::b1},
      {"b2", GMField::b2}};
  for (const auto& [n, f] : names)
    if (name == n) return f;
  throw DomainError("unknown GM parameter '" + name + "'");
}

const char* to_string(GMField field) {
  switch (field) {
    case GMField::D1: return "D1";
    case GMField::D2: return "D2";
    case GMField::mu1: return "mu1";
    case GMField::mu2: return "mu2";
    case GMField::c1: return "c1";
    case GMField::b1: return "b1";
    case GMField::b2: return "b2";
  }
  return "?";
}

void set_field(GMParams& p, GMField field, double value) {
  switch (field) {
    case GMField::D1: p.D1 = value; break;
    case GMField::D2: p.D2 = value; break;
    case GMField::mu1: p.mu1 = value; break;
    case GMField::mu2: p.mu2 = value; break;
    case GMField::c1: p.c1 = value; break;
    case GMField::b1: p.b1 = value; break;
    case GMField::b2: p.b2 = value; break;
  }
}

void SweepSpec::validate() const {
  if (axes.empty() || axes.size() > 2)
    throw DomainError("sweep: one or two axes are required");
  for (const auto& a : axes) {
    if (a.values.empty()) throw DomainError("sweep: empty grid for axis " +
                                            std::string(to_string(a.field)));
    for (double v : a.values)
      if (!std::isfinite(v)) throw DomainError("sweep: grid values must be finite");
  }
  if (axes.size() == 2 && axes[0].field == axes[1].field)
    throw DomainError("sweep: the two axes must differ");
  if (k < 1) throw DomainError("sweep: k must be >= 1");
  solver.validate();
}

std::vector<double> log_grid(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi > 0.0) || n < 1)
    throw DomainError("log_grid: bounds must be positive and n >= 1");
  if (n == 1) return {lo};
  std::vector<double> out(n);
  const double a = std::log10(lo), b = std::log10(hi);
  for (int i = 0; i < n; ++i) out[i] = std::pow(10.0, a + (b - a) * i / (n - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

namespace {

std::vector<SweepRow> run_cell(const SweepSpec& spec, double v1,
                               std::optional<double> v2) {
  GMParams p = spec.fixed;
  set_field(p, spec.axes[0].field, v1);
  if (v2) set_field(p, spec.axes[1].field, *v2);
  if (spec.d2_half_d1) p.D2 = p.D1 / 2.0;

  const auto system = gm_system(p, spec.grid);
  const auto y0 = spec.y0.empty() ? fig2_initial_condition(spec.grid) : spec.y0;
  const auto res = compare(system, y0, spec.solver, {spec.k}, spec.repr);
  const bool blowup = res.reference.blowup || res.carleman[0].blowup;
  const bool two_eq = p.b2 != 0.0 && has_two_equilibria(p.mu1, p.b2);

  std::vector<SweepRow> rows;
  for (int s = 0; s < 2; ++s) {
    SweepRow r;
    r.param1 = v1;
    r.param2 = v2;
    r.species = s + 1;
    r.mean_rel_err = blowup ? std::numeric_limits<double>::quiet_NaN()
                            : res.metrics[0].averaged_rel[s];
    r.excluded_nodes = res.metrics[0].excluded[s];
    r.two_equilibria = two_eq;
    r.blowup = blowup;
    rows.push_back(r);
  }
  return rows;
}

}  // namespace

std::vector<SweepRow> sweep(const SweepSpec& spec, int threads) {
  spec.validate();
  if (static_cast<Index>(spec.y0.size()) != 0 &&
      static_cast<Index>(spec.y0.size()) != 2 * spec.grid.nodes())
    throw DomainError("sweep: y0 has wrong length");
  const auto& a1 = spec.axes[0].values;
  const std::size_t n2 = spec.axes.size() == 2 ? spec.axes[1].values.size() : 1;
  const std::size_t cells = a1.size() * n2;

  std::vector<std::vector<SweepRow>> results(cells);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t c = next++; c < cells; c = next++) {
      try {
        std::optional<double> v2;
        if (spec.axes.size() == 2) v2 = spec.axes[1].values[c % n2];
        results[c] = run_cell(spec, a1[c / n2], v2);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int n_threads = std::max(1, std::min<int>(threads, static_cast<int>(cells)));
  std::vector<std::thread> pool;
  for (int t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  std::vector<SweepRow> rows;
  for (auto& r : results) rows.insert(rows.end(), r.begin(), r.end());
  return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "param1,param2,species,mean_rel_err,excluded_nodes,two_equilibria,blowup\n";
  for (const auto& r : rows)
    os << format_double(r.param1) << ','
       << (r.param2 ? format_double(*r.param2) : std::string()) << ',' << r.species
       << ',' << format_double(r.mean_rel_err) << ',' << r.excluded_nodes << ','
       << (r.two_equilibria ? 1 : 0) << ',' << (r.blowup ? 1 : 0) << '\n';
}

}  // namespace crd
