#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "aapicard/anderson.hpp"
#include "aapicard/norms.hpp"

namespace aapicard {

// Both optimal coefficient sets on one history window: alpha (H^1_0-optimal)
// and alpha_hat (L^2-optimal), each with its own gain.
struct DualGains {
  AlphaSolution h10;
  AlphaSolution l2;
};

DualGains dual_gains(const AAState& state, const NormOperator& h10, const NormOperator& l2,
                     double regularization = 1e-12);

struct FirstOrderFactors {
  double factor_h10 = 0.0;
  double factor_l2 = 0.0;
  double ratio_l2_h10 = 0.0;  // ||w||_{L2} / ||grad w|| of the latest residual
  // Cross norms of the two combined residuals.
  double alpha_l2 = 0.0;      // ||sum alpha w||_{L2}
  double alphahat_l2 = 0.0;   // ||sum alpha_hat w||_{L2}
  double alpha_h10 = 0.0;     // ||grad sum alpha w||
  double alphahat_h10 = 0.0;  // ||grad sum alpha_hat w||
};

// First-order residual coefficients with the Poincare and Lipschitz constants
// left out:
//   factor_h10 = (theta_H10 theta_L2)^{1/2} (||sum a w|| / ||sum a^ w||)^{1/2} (||w|| / ||grad w||)^{1/2}
//   factor_l2  = (theta_H10 theta_L2)^{1/2} (||grad sum a^ w|| / ||grad sum a w||)^{1/2} (||w|| / ||grad w||)^{1/2}
// Zero denominators give NaN.
FirstOrderFactors first_order_factors(const AAState& state, const DualGains& gains, const NormOperator& h10,
                                      const NormOperator& l2);

enum class Outcome { converged, max_iterations, diverged, solver_failure };

std::string_view to_string(Outcome outcome);
Outcome parse_outcome(std::string_view text);
int exit_code(Outcome outcome);

struct IterationRecord {
  int k = 0;
  double res_l2 = 0.0;  // ell^2
  double res_L2 = 0.0;
  double res_lumped_L2 = 0.0;
  double res_H10 = 0.0;
  double res_Hm1 = 0.0;
  double theta_H10 = 0.0;
  double theta_L2 = 0.0;
  double factor_H10 = 0.0;
  double factor_L2 = 0.0;
  double ratio_L2_H10 = 0.0;
  double identity_residual = 0.0;
  std::vector<double> alpha;
  std::vector<double> alphahat;
  double step_seconds = 0.0;

  // In-memory only.
  double theta_driving = 0.0;
  std::vector<double> alpha_driving;
  FirstOrderFactors cross;
  bool rank_deficient = false;
  double grad_norm_proposal = 0.0;
};

struct RunReport {
  std::map<std::string, std::string> config;
  std::vector<IterationRecord> records;
  Outcome outcome = Outcome::max_iterations;
  int iterations = 0;
  double final_residual = 0.0;
  std::string message;
};

inline constexpr std::string_view kCsvHeader =
    "k,res_l2,res_L2,res_lumpedL2,res_H10,res_Hm1,theta_H10,theta_L2,factor_H10,factor_L2,"
    "ratio_L2_H10,identity_residual,alpha_json,alphahat_json,step_seconds";

// CSV with the header above, one row per record (17 significant digits), then
// '#'-prefixed footer lines. With include_timing = false step_seconds is
// written as 0 so that reruns are byte-identical.
void write_report(const RunReport& report, std::ostream& out, bool include_timing = true);
void write_report(const RunReport& report, const std::filesystem::path& path, bool include_timing = true);

// Parses a CSV written by write_report (records, outcome, iterations, final residual).
RunReport read_report(std::istream& in);

}  // namespace aapicard
