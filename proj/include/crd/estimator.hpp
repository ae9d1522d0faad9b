#pragma once

// Resource formulas for the block encodings and query counts, evaluated with
// unit constants and natural logarithms. Values describe the asymptotic shape
// only; they are not gate counts.

#include <iosfwd>
#include <string>
#include <vector>

#include "crd/common.hpp"

namespace crd {

inline constexpr const char* kEstimatorTag = "asymptotic-shape";

struct EncodingInputs {
  double alpha_i = 1.0;      // max_i alpha(i)
  double alpha_j_max = 1.0;  // max_j alpha(j)
  double kBT = 1.0;
  double gamma = 1.0;
  double delta = 1.0;
  double epsilon = 1e-3;
  double stoich_sum = 1.0;
  double Delta = 1.0;        // carried for the record, unused by the formulas
  double E0_estimate = 0.0;  // carried for the record, unused by the formulas

  void validate() const;
};

struct LchsInputs {
  double alpha_M = 1.0;
  double t = 1.0;
  double g = 1.0;
  double beta = 0.8;
  double c_one_norm = 1.0;  // ||c||_1 of the LCU coefficients
  double eps_BE = 1e-3;
  int species = 2;
  int order = 3;
  Index nodes = 50;

  void validate() const;
};

double alpha_deltaG(const EncodingInputs& in);
double queries_deltaG(const EncodingInputs& in);

struct UCQueries {
  double alpha_exp = 0.0;
  double K_taylor = 0.0;
  double queries = 0.0;
};

UCQueries uc_queries(const EncodingInputs& in);

struct FEncoding {
  double alpha_F = 0.0;
  double queries_F = 0.0;
  double error_rescale = 0.0;
};

FEncoding f_encoding(const EncodingInputs& in);

/// 6 alpha |t| + 9 ln(12 / eps).
double hamsim_queries(double alpha, double t, double eps);

struct LchsQueries {
  double K = 0.0;
  double eps1 = 0.0;
  double queries = 0.0;
};

LchsQueries lchs_queries(double alpha_M, double t, double g, double eps,
                         double beta, double c_one_norm);

/// (||Z(0)|| + t ||b||) / ||Z(t)||.
double dissipation_parameter(double z0_norm, double b_norm, double t, double zt_norm);

struct ResourceReport {
  std::string tag = kEstimatorTag;
  double alpha_DeltaG = 0.0;
  double alpha_exp = 0.0;
  double alpha_F = 0.0;
  double K_taylor = 0.0;
  double queries_DeltaG = 0.0;
  double queries_UC = 0.0;
  double queries_F = 0.0;
  double error_rescale = 0.0;
  double alpha_M = 0.0;
  double g = 0.0;
  double K_lchs = 0.0;
  double eps1 = 0.0;
  double queries_lchs = 0.0;
  double queries_total = 0.0;
  double combined_error = 0.0;
  double classical_cost_log10 = 0.0;  // log10 S^(order n_d)
};

ResourceReport total_queries(const EncodingInputs& enc, const LchsInputs& lchs);

std::vector<std::string> report_columns();
std::vector<double> report_values(const ResourceReport& r);
void write_report_csv(std::ostream& os, const std::vector<std::string>& scenarios,
                      const std::vector<ResourceReport>& reports);

}  // namespace crd
