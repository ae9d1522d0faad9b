#include "crd/cli.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include "crd/estimator.hpp"
#include "crd/lchs.hpp"
#include "crd/linalg.hpp"
#include "crd/rates.hpp"

namespace crd {

namespace {

namespace fs = std::filesystem;

// ----- config -------------------------------------------------------------

const std::set<std::string> kSections = {"network", "gm",      "reaction", "grid",
                                         "solver",  "carleman", "initial", "sweep",
                                         "lchs",    "scenario", "estimate"};

void load_gm(const Config& cfg, RunConfig& rc) {
  const auto* gm = cfg.section("gm");
  if (rc.model == "gm") {
    if (gm != nullptr) {
      gm->require_keys({"D1", "D2", "mu1", "mu2", "c1", "b1", "b2"});
      GMParams& p = rc.gm;
      p.D1 = gm->number("D1", p.D1);
      p.D2 = gm->number("D2", p.D2);
      p.mu1 = gm->number("mu1", p.mu1);
      p.mu2 = gm->number("mu2", p.mu2);
      p.c1 = gm->number("c1", p.c1);
      p.b1 = gm->number("b1", p.b1);
      p.b2 = gm->number("b2", p.b2);
    }
  } else {
    if (gm == nullptr) throw ConfigError("[gm] is required for model gm-rescaled");
    gm->require_keys({"D1", "D2", "mu1", "b2"});
    rc.gm = rescaled_gm(gm->number("mu1"), gm->number("b2"), gm->number("D1"),
                        gm->number("D2"));
  }
  try {
    rc.gm.validate();
  } catch (const DomainError& e) {
    throw ConfigError(std::string("[gm] ") + e.what());
  }
  rc.species = 2;
  rc.diffusion = {rc.gm.D1, rc.gm.D2};
  rc.source = {rc.gm.b1, rc.gm.b2};
}

void load_custom(const Config& cfg, const ConfigTable& net, RunConfig& rc) {
  rc.species = net.integer("species");
  if (rc.species < 1) throw ConfigError("[network] species must be >= 1");
  rc.diffusion = net.numbers("diffusion");
  if (static_cast<int>(rc.diffusion.size()) != rc.species)
    throw ConfigError("[network] diffusion needs one entry per species");
  rc.source = net.has("source") ? net.numbers("source") : std::vector<double>(rc.species, 0.0);
  if (static_cast<int>(rc.source.size()) != rc.species)
    throw ConfigError("[network] source needs one entry per species");
  if (cfg.section("gm") != nullptr) throw ConfigError("[gm] is only valid for GM models");
  for (const auto& t : cfg.array("reaction")) {
    t.require_keys({"alpha", "beta", "rate", "order"});
    Reaction r;
    r.alpha = t.integers("alpha");
    r.beta = t.integers("beta");
    r.rate = t.number("rate");
    if (t.has("order")) r.reactant_order = t.integers("order");
    rc.reactions.push_back(std::move(r));
  }
  try {
    ReactionNetwork(rc.species, rc.reactions);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("[[reaction]] ") + e.what());
  }
}

std::vector<double> axis_values(const ConfigTable& t, const std::string& suffix) {
  const std::string vk = "values" + suffix, rk = "range" + suffix;
  if (t.has(vk) == t.has(rk))
    throw ConfigError("[sweep] give exactly one of " + vk + " or " + rk);
  if (t.has(vk)) return t.numbers(vk);
  const auto r = t.numbers(rk);
  if (r.size() != 3 || r[2] != std::floor(r[2]))
    throw ConfigError("[sweep] " + rk + " must be [lo, hi, count]");
  try {
    return log_grid(r[0], r[1], static_cast<int>(r[2]));
  } catch (const DomainError& e) {
    throw ConfigError("[sweep] " + rk + ": " + e.what());
  }
}

void load_sweep(const ConfigTable& t, RunConfig& rc) {
  t.require_keys({"axis1", "values1", "range1", "axis2", "values2", "range2", "k",
                  "d2_half_d1"});
  if (rc.model == "custom") throw ConfigError("[sweep] needs a GM model");
  SweepSpec& s = rc.sweep;
  try {
    s.axes.push_back({parse_gm_field(t.string("axis1")), axis_values(t, "1")});
    if (t.has("axis2"))
      s.axes.push_back({parse_gm_field(t.string("axis2")), axis_values(t, "2")});
    else if (t.has("values2") || t.has("range2"))
      throw ConfigError("[sweep] values2/range2 given without axis2");
  } catch (const ConfigError&) {
    throw;
  } catch (const DomainError& e) {
    throw ConfigError(std::string("[sweep] ") + e.what());
  }
  const auto ks = t.has("k") ? t.integers("k") : std::vector<int>{3};
  if (ks.size() != 1) throw ConfigError("[sweep] k takes a single truncation order");
  s.k = ks[0];
  s.d2_half_d1 = t.boolean("d2_half_d1", false);
  s.fixed = rc.gm;
  s.grid = rc.grid;
  s.solver = rc.solver;
  s.repr = rc.repr;
  s.y0 = rc.initial.mode == "fig2" ? std::vector<double>{} : rc.initial_state();
  try {
    s.validate();
  } catch (const DomainError& e) {
    throw ConfigError(std::string("[sweep] ") + e.what());
  }
  rc.has_sweep = true;
}

// ----- output -------------------------------------------------------------

struct OutputFile {
  fs::path path;
  std::vector<std::string> meta;
  std::string body;
};

// Set when run_cli starts so the reported wall time covers the whole command.
std::chrono::steady_clock::time_point command_start = std::chrono::steady_clock::now();

class Session {
 public:
  Session(std::string command, std::vector<std::string> echo)
      : command_(std::move(command)),
        echo_(std::move(echo)),
        start_(command_start) {}

  void add(fs::path path, std::string body, std::vector<std::string> meta = {}) {
    files_.push_back({std::move(path), std::move(meta), std::move(body)});
  }

  void flush() const {
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    for (const auto& f : files_) {
      if (f.path.has_parent_path()) fs::create_directories(f.path.parent_path());
      std::ofstream os(f.path);
      if (!os) throw std::runtime_error("cannot write " + f.path.string());
      os << "# crdkit " << kVersion << '\n' << "# command: " << command_ << '\n';
      for (const auto& e : echo_) os << "# param: " << e << '\n';
      for (const auto& m : f.meta) os << "# " << m << '\n';
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.3f", wall);
      os << "# wall_time_s: " << buf << '\n' << f.body;
    }
  }

 private:
  std::string command_;
  std::vector<std::string> echo_;
  std::chrono::steady_clock::time_point start_;
  std::vector<OutputFile> files_;
};

RunConfig load_file(const std::string& path) {
  return load_run_config(parse_config_file(path));
}

// Uniform in [-1, 1) from the raw generator so outputs do not depend on the
// standard library's distributions.
double uniform(std::mt19937_64& rng) {
  return 2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0;
}

// ----- commands -----------------------------------------------------------

int cmd_simulate(const std::string& config, const fs::path& out) {
  const auto rc = load_file(config);
  const auto system = rc.system();
  const double dmax = *std::max_element(rc.diffusion.begin(), rc.diffusion.end());
  const double cfl = cfl_indicator(rc.solver, rc.grid, dmax);
  if (cfl > 1.0) std::cerr << "warning: CFL indicator " << cfl << " exceeds 1\n";
  const auto traj = solve_nonlinear(system, rc.initial_state(), rc.solver);
  Session session("simulate", rc.echo);
  std::ostringstream body;
  write_trajectory_csv(body, traj);
  session.add(out / "trajectory.csv", body.str(),
              {"cfl_indicator: " + format_double(cfl),
               std::string("blowup: ") + (traj.blowup ? "true" : "false")});
  session.flush();
  if (traj.blowup) {
    std::cerr << "blow-up: " << traj.meta << '\n';
    return kExitBlowup;
  }
  return kExitOk;
}

struct CarlemanArgs {
  std::vector<int> k;
  std::string repr;
  std::string dump_pattern;
};

int cmd_carleman(const std::string& config, const CarlemanArgs& a, const fs::path& out) {
  auto rc = load_file(config);
  if (!a.k.empty()) rc.k_orders = a.k;
  if (!a.repr.empty()) rc.repr = parse_representation(a.repr);
  for (int k : rc.k_orders)
    if (k < 1) throw DomainError("k must be >= 1");
  if (!a.dump_pattern.empty() && rc.k_orders.size() != 1)
    throw DomainError("--dump-pattern needs a single k");
  const auto system = rc.system();
  Session session("carleman", rc.echo);
  std::ostringstream summary;
  summary << "k,repr,dim,nnz,norm_power,bound_general,bound_autocatalytic\n";
  for (int k : rc.k_orders) {
    const auto cs = assemble(system, k, rc.repr, rc.limits);
    const auto offsets = pattern_offsets(cs);
    std::ostringstream pat;
    pat << "block_row,block_col,nnz\n";
    for (const auto& e : block_pattern(cs.M, offsets))
      pat << e.block_row << ',' << e.block_col << ',' << e.nnz << '\n';
    session.add(a.dump_pattern.empty() ? out / ("pattern_k" + std::to_string(k) + ".csv")
                                       : fs::path(a.dump_pattern),
                pat.str(),
                {"block_size: " + std::string(rc.repr == Representation::full
                                                  ? "carleman level"
                                                  : "n_d")});
    summary << k << ',' << to_string(rc.repr) << ',' << cs.dim() << ','
            << cs.M.nonZeros() << ',' << format_double(spectral_norm_power(cs.M)) << ','
            << format_double(norm_bound(system, k, NormBoundVariant::general)) << ','
            << format_double(norm_bound(system, k, NormBoundVariant::autocatalytic))
            << '\n';
  }
  session.add(out / "carleman.csv", summary.str());
  session.flush();
  return kExitOk;
}

int cmd_compare(const std::string& config, const fs::path& out) {
  const auto rc = load_file(config);
  const auto system = rc.system();
  const auto res = compare(system, rc.initial_state(), rc.solver, rc.k_orders, rc.repr,
                           rc.limits);
  bool blowup = res.reference.blowup;
  std::ostringstream err, summary;
  err << "t,species,k,err_abs_inf,err_rel_mean\n";
  summary << "k,species,mean_rel_err,excluded_nodes,blowup\n";
  for (std::size_t i = 0; i < res.k_orders.size(); ++i) {
    const auto& m = res.metrics[i];
    const bool b = res.reference.blowup || res.carleman[i].blowup;
    blowup = blowup || b;
    for (std::size_t t = 0; t < m.times.size(); ++t)
      for (int s = 0; s < m.species; ++s)
        err << format_double(m.times[t]) << ',' << s + 1 << ',' << res.k_orders[i] << ','
            << format_double(m.abs_inf[t][s]) << ',' << format_double(m.rel_mean[t][s])
            << '\n';
    for (int s = 0; s < m.species; ++s)
      summary << res.k_orders[i] << ',' << s + 1 << ',' << format_double(m.averaged_rel[s])
              << ',' << m.excluded[s] << ',' << (b ? 1 : 0) << '\n';
  }
  Session session("compare", rc.echo);
  const std::string flag = std::string("blowup: ") + (blowup ? "true" : "false");
  session.add(out / "err.csv", err.str(), {flag});
  session.add(out / "summary.csv", summary.str(), {flag});
  session.flush();
  return blowup ? kExitBlowup : kExitOk;
}

int cmd_sweep(const std::string& config, const fs::path& out, int threads) {
  const auto rc = load_file(config);
  if (!rc.has_sweep) throw ConfigError("sweep needs a [sweep] section");
  const auto rows = sweep(rc.sweep, threads);
  std::ostringstream body;
  write_sweep_csv(body, rows);
  Session session("sweep", rc.echo);
  session.add(out / "sweep.csv", body.str(),
              {"axes: " + std::string(to_string(rc.sweep.axes[0].field)) +
               (rc.sweep.axes.size() == 2
                    ? "," + std::string(to_string(rc.sweep.axes[1].field))
                    : std::string())});
  session.flush();
  return kExitOk;
}

struct LchsArgs {
  int dim = 4;
  double beta = 0.8;
  double K = 100.0;
  int nodes = 2048;
  int s_nodes = 64;
  double t = 1.0;
  std::uint64_t seed = 1;
};

int cmd_lchs(const LchsArgs& a, const fs::path& out) {
  if (a.dim < 1) throw DomainError("dim must be >= 1");
  if (a.dim > kLchsMaxDim) throw ResourceLimitError("dim above " + std::to_string(kLchsMaxDim));
  LCHSConfig cfg{a.beta, a.K, a.nodes, a.s_nodes, a.t};
  cfg.validate();
  std::mt19937_64 rng(a.seed);
  Eigen::MatrixXcd X(a.dim, a.dim), Y(a.dim, a.dim);
  for (int i = 0; i < a.dim; ++i)
    for (int j = 0; j < a.dim; ++j) {
      X(i, j) = Complex(uniform(rng), uniform(rng));
      Y(i, j) = Complex(uniform(rng), uniform(rng));
    }
  const Eigen::MatrixXcd A = X * X.adjoint() / a.dim + Complex(0.0, 0.5) * (Y + Y.adjoint());
  const Eigen::MatrixXcd exact = (-a.t * A).exp();
  std::vector<int> counts;
  for (int n = a.nodes; n >= 8 && counts.size() < 4; n /= 2) counts.insert(counts.begin(), n);
  std::ostringstream body;
  body << "K,nodes,error_fro\n";
  for (int n : counts) {
    LCHSConfig c = cfg;
    c.nodes = n;
    const double err = (reconstruct_propagator(A, c) - exact).norm();
    body << format_double(a.K) << ',' << n << ',' << format_double(err) << '\n';
  }
  Session session("lchs-verify",
                  {"dim = " + std::to_string(a.dim), "beta = " + format_double(a.beta),
                   "K = " + format_double(a.K), "nodes = " + std::to_string(a.nodes),
                   "s_nodes = " + std::to_string(a.s_nodes), "t = " + format_double(a.t),
                   "seed = " + std::to_string(a.seed)});
  session.add(out / "lchs.csv", body.str());
  session.flush();
  return kExitOk;
}

std::map<RateKey, double> read_deltaG(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open deltaG table '" + path + "'");
  std::map<RateKey, double> table;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty() || line[0] == '#' || line.rfind("i,j", 0) == 0) continue;
    std::stringstream ss(line);
    std::string a, b, c;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c))
      throw ConfigError(path + " line " + std::to_string(n) + ": expected i,j,deltaG");
    try {
      const RateKey key{std::stoi(a), std::stoi(b)};
      const double g = std::stod(c);
      if (!std::isfinite(g)) throw std::invalid_argument("non-finite");
      if (!table.emplace(key, g).second) throw std::invalid_argument("duplicate pair");
    } catch (const std::logic_error& e) {
      throw ConfigError(path + " line " + std::to_string(n) + ": " + e.what());
    }
  }
  return table;
}

struct RatesArgs {
  std::string deltaG;
  double kbt = 1.0;
  bool second_order = false;
  int dim = 4;
  std::uint64_t seed = 1;
};

int cmd_rates(const RatesArgs& a, const fs::path& out) {
  const ThermoContext ctx{a.kbt};
  ctx.validate();
  if (a.deltaG.empty() && !a.second_order)
    throw ConfigError("rates needs --deltaG and/or --second-order");
  Session session("rates", {"deltaG = " + a.deltaG, "kbt = " + format_double(a.kbt),
                            "second_order = " + std::string(a.second_order ? "true" : "false"),
                            "dim = " + std::to_string(a.dim),
                            "seed = " + std::to_string(a.seed)});
  if (!a.deltaG.empty()) {
    std::ostringstream body;
    body << "i,j,rate\n";
    for (const auto& [key, r] : rates_from_table(read_deltaG(a.deltaG), ctx))
      body << key.first << ',' << key.second << ',' << format_double(r) << '\n';
    session.add(out / "rates.csv", body.str());
  }
  if (a.second_order) {
    if (a.dim < 1 || a.dim > 64) throw DomainError("dim must lie in 1..64");
    std::mt19937_64 rng(a.seed);
    Eigen::VectorXd e(a.dim), v(a.dim);
    for (int i = 0; i < a.dim; ++i) {
      e[i] = 2.0 * std::abs(uniform(rng));
      v[i] = uniform(rng);
    }
    std::ostringstream body;
    body << "lambda,exact,second_order,abs_error\n";
    for (double lambda = 0.4; lambda > 0.02; lambda /= 2.0) {
      HamiltonianPair pair{e.cast<Complex>().asDiagonal(),
                           (e + lambda * v).cast<Complex>().asDiagonal()};
      const double exact = zwanzig_exact(pair, ctx);
      const double approx = zwanzig_second_order(pair, ctx);
      body << format_double(lambda) << ',' << format_double(exact) << ','
           << format_double(approx) << ',' << format_double(std::abs(approx - exact)) << '\n';
    }
    session.add(out / "second_order.csv", body.str());
  }
  session.flush();
  return kExitOk;
}

int cmd_laplacian(int n, int d, bool print_norm, const std::string& spectrum_path,
                  const fs::path& out) {
  const auto grid = SpatialGrid::make(n, d);
  if (grid.nodes() > kDefaultMaxNodes)
    throw ResourceLimitError("laplacian: " + std::to_string(grid.nodes()) +
                             " nodes exceed the limit of " + std::to_string(kDefaultMaxNodes));
  const auto norm = laplacian_norm_exact(n, d);
  const auto spectrum = laplacian_spectrum(n, d);
  std::ostringstream body;
  for (int a = 1; a <= d; ++a) body << 'k' << a << ',';
  body << "eigenvalue\n";
  for (const auto& e : spectrum) {
    for (int k : e.k) body << k << ',';
    body << format_double(e.eigenvalue) << '\n';
  }
  Session session("laplacian", {"n = " + std::to_string(n), "d = " + std::to_string(d)});
  if (print_norm)
    std::cout << "norm_exact " << format_double(norm.value) << "\nnorm_bound "
              << format_double(norm.bound) << "\nbound_tight "
              << (norm.bound_tight ? "true" : "false") << '\n';
  session.add(spectrum_path.empty() ? out / "spectrum.csv" : fs::path(spectrum_path),
              body.str(),
              {"norm_exact: " + format_double(norm.value),
               "norm_bound: " + format_double(norm.bound),
               std::string("bound_tight: ") + (norm.bound_tight ? "true" : "false")});
  session.flush();
  return kExitOk;
}

// A scenario value that may be the string "auto".
bool is_auto(const ConfigTable& t, const std::string& key) {
  if (!t.has(key)) return false;
  const auto& v = t.entries.at(key).value;
  if (const auto* s = std::get_if<std::string>(&v)) {
    if (*s != "auto") throw ConfigError("[" + t.name + "] " + key + " must be a number or \"auto\"");
    return true;
  }
  return false;
}

int cmd_estimate(const std::string& config, const fs::path& out) {
  const auto cfg = parse_config_file(config);
  const auto rc = load_run_config(cfg);
  const auto& scenarios = cfg.array("scenario");
  if (scenarios.empty()) throw ConfigError("estimate needs at least one [[scenario]]");
  const bool has_model = cfg.section("network") != nullptr || cfg.section("gm") != nullptr;
  const auto* lchs_cfg = cfg.section("lchs");
  if (lchs_cfg != nullptr) lchs_cfg->require_keys({"K", "nodes"});

  std::vector<std::string> names;
  std::vector<ResourceReport> reports;
  for (const auto& t : scenarios) {
    t.require_keys({"name", "alpha_i", "alpha_j_max", "kBT", "gamma", "delta", "epsilon",
                    "stoich_sum", "Delta", "E0_estimate", "alpha_M", "t", "g", "beta",
                    "c_one_norm", "eps_BE", "k"});
    EncodingInputs enc;
    LchsInputs li;
    enc.alpha_i = t.number("alpha_i", enc.alpha_i);
    enc.alpha_j_max = t.number("alpha_j_max", enc.alpha_j_max);
    enc.kBT = t.number("kBT", enc.kBT);
    enc.gamma = t.number("gamma", enc.gamma);
    enc.delta = t.number("delta", enc.delta);
    enc.epsilon = t.number("epsilon", enc.epsilon);
    enc.Delta = t.number("Delta", enc.Delta);
    enc.E0_estimate = t.number("E0_estimate", enc.E0_estimate);
    li.t = t.number("t", li.t);
    li.beta = t.number("beta", li.beta);
    li.eps_BE = t.number("eps_BE", li.eps_BE);
    const int k = t.integer("k", rc.k_orders.back());

    const bool any_auto = is_auto(t, "stoich_sum") || is_auto(t, "alpha_M") ||
                          is_auto(t, "g") || is_auto(t, "c_one_norm");
    if (any_auto && !has_model && (is_auto(t, "stoich_sum") || is_auto(t, "alpha_M") || is_auto(t, "g")))
      throw ConfigError("[" + t.name + "] \"auto\" values need a [network] or [gm] section");
    std::optional<DiscretizedSystem> system;
    if (has_model) {
      system.emplace(rc.system());
      li.species = system->species();
      li.order = std::max(1, system->reactions().max_order());
      li.nodes = system->nodes();
    }
    if (is_auto(t, "stoich_sum")) {
      enc.stoich_sum = stoichiometric_sum(ReactionNetwork(
          rc.species, rc.model == "custom" ? rc.reactions : gm_network(rc.gm).reactions()));
    } else {
      enc.stoich_sum = t.number("stoich_sum", enc.stoich_sum);
    }
    if (is_auto(t, "alpha_M")) {
      li.alpha_M = norm_bound(*system, k, NormBoundVariant::general);
    } else {
      li.alpha_M = t.number("alpha_M", li.alpha_M);
    }
    if (is_auto(t, "g")) {
      const auto cs = assemble(*system, k, rc.repr, rc.limits);
      const auto z0 = embed(rc.initial_state(), system->species(), system->nodes(), k, rc.repr);
      SolverConfig sc = rc.solver;
      sc.t_final = li.t;
      sc.record_every = static_cast<int>(sc.steps());
      const auto traj = solve_linear(cs, z0, sc, true);
      if (traj.blowup) throw SolverError("g: Carleman solve blew up");
      const auto norm = [](const std::vector<double>& v) {
        return Eigen::Map<const Eigen::VectorXd>(v.data(), v.size()).norm();
      };
      li.g = std::max(1.0, dissipation_parameter(norm(z0), norm(cs.b), li.t,
                                                 norm(traj.states.back())));
    } else {
      li.g = t.number("g", li.g);
    }
    if (is_auto(t, "c_one_norm")) {
      LCHSConfig lc;
      lc.beta = li.beta;
      lc.K = lchs_cfg != nullptr && lchs_cfg->has("K")
                 ? lchs_cfg->number("K")
                 : std::max(1.0, default_truncation(li.g, enc.epsilon, li.beta));
      lc.nodes = lchs_cfg != nullptr ? lchs_cfg->integer("nodes", lc.nodes) : lc.nodes;
      li.c_one_norm = lcu_coefficients(lc).one_norm;
    } else {
      li.c_one_norm = t.number("c_one_norm", li.c_one_norm);
    }
    try {
      reports.push_back(total_queries(enc, li));
    } catch (const DomainError& e) {
      throw ConfigError("[" + t.name + "] " + e.what());
    }
    names.push_back(t.string("name", t.name));
  }
  std::ostringstream body;
  write_report_csv(body, names, reports);
  Session session("estimate", cfg.echo());
  session.add(out, body.str(), {std::string("tag: ") + kEstimatorTag});
  session.flush();
  return kExitOk;
}

}  // namespace

DiscretizedSystem RunConfig::system() const {
  if (model == "custom")
    return DiscretizedSystem(build_tensors(ReactionNetwork(species, reactions), source),
                             diffusion, grid);
  return gm_system(gm, grid);
}

std::vector<double> RunConfig::initial_state() const {
  if (initial.mode == "fig2") {
    if (species != 2) throw ConfigError("[initial] mode fig2 needs two species");
    return fig2_initial_condition(grid);
  }
  const Index nd = grid.nodes();
  std::vector<double> y(species * nd);
  for (int s = 0; s < species; ++s)
    std::fill_n(y.begin() + s * nd, nd, initial.values[s]);
  return y;
}

RunConfig load_run_config(const Config& cfg) {
  cfg.require_sections(kSections);
  RunConfig rc;
  rc.echo = cfg.echo();
  if (const auto* net = cfg.section("network")) {
    net->require_keys({"model", "species", "source", "diffusion"});
    rc.model = net->string("model", "gm");
    if (rc.model != "gm" && rc.model != "gm-rescaled" && rc.model != "custom")
      throw ConfigError("[network] model must be gm, gm-rescaled or custom");
    if (rc.model == "custom") {
      load_custom(cfg, *net, rc);
    } else {
      if (net->has("species") || net->has("source") || net->has("diffusion"))
        throw ConfigError("[network] species/source/diffusion are only valid for model custom");
      if (!cfg.array("reaction").empty())
        throw ConfigError("[[reaction]] is only valid for model custom");
      load_gm(cfg, rc);
    }
  } else {
    if (!cfg.array("reaction").empty())
      throw ConfigError("[[reaction]] needs [network] model = \"custom\"");
    load_gm(cfg, rc);
  }
  if (const auto* g = cfg.section("grid")) {
    g->require_keys({"n", "d"});
    try {
      rc.grid = SpatialGrid::make(g->integer("n", rc.grid.n), g->integer("d", rc.grid.d));
    } catch (const DomainError& e) {
      throw ConfigError(std::string("[grid] ") + e.what());
    }
  }
  if (const auto* s = cfg.section("solver")) {
    s->require_keys({"dt", "t_final", "record_every", "blowup_cap"});
    rc.solver.dt = s->number("dt", rc.solver.dt);
    rc.solver.t_final = s->number("t_final", rc.solver.t_final);
    rc.solver.record_every = s->integer("record_every", rc.solver.record_every);
    rc.solver.blowup_cap = s->number("blowup_cap", rc.solver.blowup_cap);
  }
  try {
    rc.solver.validate();
  } catch (const DomainError& e) {
    throw ConfigError(std::string("[solver] ") + e.what());
  }
  if (const auto* c = cfg.section("carleman")) {
    c->require_keys({"k", "repr", "max_dim"});
    if (c->has("k")) rc.k_orders = c->integers("k");
    if (rc.k_orders.empty()) throw ConfigError("[carleman] k must not be empty");
    for (int k : rc.k_orders)
      if (k < 1) throw ConfigError("[carleman] k must be >= 1");
    try {
      rc.repr = parse_representation(c->string("repr", "grouped"));
    } catch (const DomainError& e) {
      throw ConfigError(std::string("[carleman] ") + e.what());
    }
    if (c->has("max_dim")) {
      const double m = c->number("max_dim");
      if (!(m >= 1.0)) throw ConfigError("[carleman] max_dim must be >= 1");
      rc.limits.max_dim = static_cast<Index>(m);
    }
  }
  if (const auto* ic = cfg.section("initial")) {
    ic->require_keys({"mode", "values"});
    rc.initial.mode = ic->string("mode", "fig2");
    if (rc.initial.mode == "constant") {
      rc.initial.values = ic->numbers("values");
      if (static_cast<int>(rc.initial.values.size()) != rc.species)
        throw ConfigError("[initial] values needs one entry per species");
    } else if (rc.initial.mode != "fig2") {
      throw ConfigError("[initial] mode must be fig2 or constant");
    } else if (ic->has("values")) {
      throw ConfigError("[initial] values is only valid with mode constant");
    }
  }
  if (rc.initial.mode == "fig2" && rc.species != 2)
    throw ConfigError("[initial] mode fig2 needs two species; use mode constant");
  if (const auto* sw = cfg.section("sweep")) load_sweep(*sw, rc);
  return rc;
}

int run_cli(const std::vector<std::string>& args) {
  command_start = std::chrono::steady_clock::now();
  CLI::App app{"Carleman linearisation toolkit for reaction-diffusion systems", "crdkit"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  app.add_option("--threads", threads, "worker threads for sweeps")
      ->check(CLI::PositiveNumber);

  std::string config;
  std::string out = ".";
  auto with_config = [&](CLI::App* sub) {
    sub->add_option("-c,--config", config, "config file")->required();
    sub->add_option("-o,--out", out, "output directory");
  };
  auto* simulate = app.add_subcommand("simulate", "RK4 on the discretised RDE");
  with_config(simulate);
  CarlemanArgs ca;
  auto* carleman = app.add_subcommand("carleman", "assemble Carleman matrices");
  with_config(carleman);
  carleman->add_option("-k", ca.k, "truncation order(s), overrides the config");
  carleman->add_option("--repr", ca.repr, "full or grouped, overrides the config");
  carleman->add_option("--dump-pattern", ca.dump_pattern, "block pattern CSV path");
  auto* cmp = app.add_subcommand("compare", "Carleman versus direct RK4");
  with_config(cmp);
  auto* sw = app.add_subcommand("sweep", "parameter sweep of the Carleman error");
  with_config(sw);

  LchsArgs la;
  auto* lchs = app.add_subcommand("lchs-verify", "check the LCHS identity on a random matrix");
  lchs->add_option("--dim", la.dim);
  lchs->add_option("--beta", la.beta);
  lchs->add_option("--K", la.K);
  lchs->add_option("--nodes", la.nodes);
  lchs->add_option("--s-nodes", la.s_nodes);
  lchs->add_option("-t,--time", la.t);
  lchs->add_option("--seed", la.seed);
  lchs->add_option("-o,--out", out);

  RatesArgs ra;
  auto* rates = app.add_subcommand("rates", "Eyring rates and Zwanzig estimates");
  rates->add_option("--deltaG", ra.deltaG, "CSV with columns i,j,deltaG");
  rates->add_option("--kbt", ra.kbt);
  rates->add_flag("--second-order", ra.second_order);
  rates->add_option("--dim", ra.dim);
  rates->add_option("--seed", ra.seed);
  rates->add_option("-o,--out", out);

  std::string report = "report.csv";
  auto* estimate = app.add_subcommand("estimate", "resource report");
  estimate->add_option("-c,--config", config)->required();
  estimate->add_option("-o,--out", report, "report CSV path");

  int lap_n = 8, lap_d = 1;
  bool lap_norm = false;
  std::string lap_spectrum;
  auto* lap = app.add_subcommand("laplacian", "spectrum of the periodic Laplacian");
  lap->add_option("--n", lap_n);
  lap->add_option("--d", lap_d);
  lap->add_flag("--norm", lap_norm, "print the spectral norm");
  lap->add_option("--spectrum", lap_spectrum, "spectrum CSV path");
  lap->add_option("-o,--out", out);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(config, out);
    if (carleman->parsed()) return cmd_carleman(config, ca, out);
    if (cmp->parsed()) return cmd_compare(config, out);
    if (sw->parsed()) return cmd_sweep(config, out, threads);
    if (lchs->parsed()) return cmd_lchs(la, out);
    if (rates->parsed()) return cmd_rates(ra, out);
    if (estimate->parsed()) return cmd_estimate(config, report);
    if (lap->parsed()) return cmd_laplacian(lap_n, lap_d, lap_norm, lap_spectrum, out);
  } catch (const ResourceLimitError& e) {
    std::cerr << "resource limit: " << e.what() << '\n';
    return kExitResource;
  } catch (const SolverError& e) {
    std::cerr << "solver: " << e.what() << '\n';
    return kExitBlowup;
  } catch (const DomainError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitInvalid;
}

}  // namespace crd
