#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aapicard/anderson.hpp"
#include "aapicard/diagnostics.hpp"
#include "aapicard/norms.hpp"
#include "aapicard/picard.hpp"

namespace aapicard {

enum class ProblemKind { cavity, channel, manufactured };

std::string_view to_string(ProblemKind kind);
std::optional<ProblemKind> parse_problem_kind(std::string_view text);

struct RunConfig {
  ProblemKind problem = ProblemKind::cavity;
  double re = 100.0;  // nu = 1 / re
  int n = 16;         // cells per side for the built-in unit-square problems
  std::string mesh_path;
  bool barycentric = false;
  int depth = 0;
  double damping = 1.0;
  NormKind norm = NormKind::h10;
  int max_iterations = 200;
  double tolerance = 1e-8;  // on ||grad w_k||
  std::string output;
  bool fast = false;  // skip the non-driving gain solve
  bool include_timing = true;
  double divergence_factor = 1e8;

  void validate() const;
  std::map<std::string, std::string> snapshot() const;
};

// Builds mesh, space, boundary data and body force for a configuration.
PicardProblem make_problem(const RunConfig& config);

struct StepView {
  const IterationRecord& record;
  const AAState& state;
  const AlphaSolution& driving;
  const DualGains* gains;  // null in fast mode
  const NormSet& norms;
  const PicardProblem& problem;
  bool updated;  // false on the final (converged / stopped) row
};

using StepObserver = std::function<void(const StepView&)>;

// AA-Picard loop: g(u_k), residual, coefficient solve, update, diagnostics;
// stops on tolerance, iteration cap, divergence or solver failure.
RunReport run(PicardProblem& problem, const RunConfig& config, const StepObserver& observer = {});
RunReport run(const RunConfig& config, const StepObserver& observer = {});

struct NormComparison {
  std::vector<std::pair<NormKind, RunReport>> runs;
};

// Runs every optimization norm on the same configuration, in kAllNorms order.
NormComparison compare_norms(const RunConfig& base);
std::string comparison_table(const NormComparison& comparison);

}  // namespace aapicard
