#include "crd/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "crd/integrators.hpp"

namespace crd {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw DomainError(std::string(name) + " must be a finite positive number");
}

}  // namespace

void EncodingInputs::validate() const {
  require_positive(kBT, "kBT");
  require_positive(gamma, "gamma");
  require_positive(delta, "delta");
  require_positive(epsilon, "epsilon");
  require_positive(stoich_sum, "stoich_sum");
  if (delta > 1.0) throw DomainError("delta must be <= 1");
  if (epsilon >= 1.0) throw DomainError("epsilon must be < 1");
  if (!(alpha_i >= 0.0) || !(alpha_j_max >= 0.0))
    throw DomainError("alpha values must be >= 0");
}

void LchsInputs::validate() const {
  if (!(alpha_M >= 0.0)) throw DomainError("alpha_M must be >= 0");
  if (!(t >= 0.0)) throw DomainError("t must be >= 0");
  if (!(g >= 1.0)) throw DomainError("g must be >= 1");
  if (!(beta > 0.0 && beta <= 1.0)) throw DomainError("beta must lie in (0, 1]");
  require_positive(c_one_norm, "c_one_norm");
  if (!(eps_BE >= 0.0)) throw DomainError("eps_BE must be >= 0");
  if (species < 1 || order < 1 || nodes < 1)
    throw DomainError("species, order and nodes must be >= 1");
}

double alpha_deltaG(const EncodingInputs& in) {
  in.validate();
  return in.alpha_j_max * (1.0 + in.alpha_i / in.kBT);
}

double queries_deltaG(const EncodingInputs& in) {
  return alpha_deltaG(in) * std::log(1.0 / in.epsilon) / (in.gamma * in.delta);
}

UCQueries uc_queries(const EncodingInputs& in) {
  const double a = alpha_deltaG(in);
  const double x = a / in.kBT;
  UCQueries out;
  out.alpha_exp = std::exp(x);
  // ln x / ln ln x, with the denominator floored at 1 so the count stays
  // monotone in x.
  if (x <= std::numbers::e) {
    out.K_taylor = 1.0;
  } else {
    const double u = std::log(x);
    out.K_taylor = std::max(1.0, std::ceil(u / std::max(1.0, std::log(u))));
  }
  const double l = std::log(1.0 / in.epsilon);
  out.queries = a * l * l / (in.gamma * in.delta);
  return out;
}

FEncoding f_encoding(const EncodingInputs& in) {
  const double a = alpha_deltaG(in);
  const auto uc = uc_queries(in);
  FEncoding out;
  out.alpha_F = in.stoich_sum * uc.alpha_exp;
  const double l1 = std::max(1.0, std::log(a / in.kBT));
  const double l2 = std::max(1.0, std::log(in.stoich_sum / in.epsilon));
  out.queries_F = a * l1 * l2 * l2 / (in.gamma * in.delta);
  out.error_rescale = in.epsilon / in.stoich_sum;
  return out;
}

double hamsim_queries(double alpha, double t, double eps) {
  if (!(eps > 0.0 && eps < 12.0)) throw DomainError("hamsim_queries: eps must lie in (0, 12)");
  return 6.0 * alpha * std::abs(t) + 9.0 * std::log(12.0 / eps);
}

LchsQueries lchs_queries(double alpha_M, double t, double g, double eps,
                         double beta, double c_one_norm) {
  if (!(g >= 1.0)) throw DomainError("lchs_queries: g must be >= 1");
  if (!(beta > 0.0 && beta <= 1.0)) throw DomainError("lchs_queries: beta must lie in (0, 1]");
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("lchs_queries: eps must lie in (0, 1)");
  require_positive(c_one_norm, "c_one_norm");
  LchsQueries out;
  out.K = std::pow(std::log(g / eps), 1.0 / beta);
  out.eps1 = eps / (8.0 * c_one_norm * g);
  out.queries = g * alpha_M * t * std::pow(std::log(1.0 / eps), 1.0 / beta);
  return out;
}

double dissipation_parameter(double z0_norm, double b_norm, double t, double zt_norm) {
  require_positive(zt_norm, "||Z(t)||");
  return (z0_norm + t * b_norm) / zt_norm;
}

ResourceReport total_queries(const EncodingInputs& enc, const LchsInputs& lchs) {
  enc.validate();
  lchs.validate();
  ResourceReport r;
  r.alpha_DeltaG = alpha_deltaG(enc);
  r.queries_DeltaG = queries_deltaG(enc);
  const auto uc = uc_queries(enc);
  r.alpha_exp = uc.alpha_exp;
  r.K_taylor = uc.K_taylor;
  r.queries_UC = uc.queries;
  const auto f = f_encoding(enc);
  r.alpha_F = f.alpha_F;
  r.queries_F = f.queries_F;
  r.error_rescale = f.error_rescale;
  const auto l = lchs_queries(lchs.alpha_M, lchs.t, lchs.g, enc.epsilon, lchs.beta,
                              lchs.c_one_norm);
  r.alpha_M = lchs.alpha_M;
  r.g = lchs.g;
  r.K_lchs = l.K;
  r.eps1 = l.eps1;
  r.queries_lchs = l.queries;
  r.queries_total = r.queries_F * r.queries_lchs;
  r.combined_error = lchs.alpha_M * lchs.eps_BE + r.alpha_F * enc.epsilon;
  r.classical_cost_log10 = static_cast<double>(lchs.order) * static_cast<double>(lchs.nodes) *
                           std::log10(static_cast<double>(lchs.species));
  return r;
}

std::vector<std::string> report_columns() {
  return {"alpha_DeltaG", "alpha_exp",   "alpha_F",      "K_taylor",
          "queries_DeltaG", "queries_UC", "queries_F",   "error_rescale",
          "alpha_M",      "g",           "K_lchs",       "eps1",
          "queries_lchs", "queries_total", "combined_error",
          "classical_cost_log10"};
}

std::vector<double> report_values(const ResourceReport& r) {
  return {r.alpha_DeltaG, r.alpha_exp,   r.alpha_F,      r.K_taylor,
          r.queries_DeltaG, r.queries_UC, r.queries_F,   r.error_rescale,
          r.alpha_M,      r.g,           r.K_lchs,       r.eps1,
          r.queries_lchs, r.queries_total, r.combined_error,
          r.classical_cost_log10};
}

void write_report_csv(std::ostream& os, const std::vector<std::string>& scenarios,
                      const std::vector<ResourceReport>& reports) {
  if (scenarios.size() != reports.size())
    throw DomainError("write_report_csv: one scenario name per report");
  os << "scenario,tag";
  for (const auto& c : report_columns()) os << ',' << c;
  os << '\n';
  for (std::size_t i = 0; i < reports.size(); ++i) {
    os << scenarios[i] << ',' << reports[i].tag;
    for (double v : report_values(reports[i])) os << ',' << format_double(v);
    os << '\n';
  }
}

}  // namespace crd
