// aapicard: Anderson-accelerated Picard solver for steady Navier-Stokes.
//
//   aapicard solve   --problem cavity --re 1000 --n 32 --barycentric --m 5 --norm h10 --out run.csv
//   aapicard compare --problem cavity --re 1000 --n 32 --barycentric --m 5 --out cmp.csv
//   aapicard verify
//
// --config FILE reads key=value lines (keys are long option names); command
// line flags take precedence.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "aapicard/driver.hpp"
#include "aapicard/verify.hpp"

namespace {

using namespace aapicard;

constexpr int kUsageError = 1;

struct Options {
  std::string problem = "cavity";
  std::string norm = "h10";
  bool no_timing = false;
  std::string config_file;
  RunConfig run;
};

void add_run_options(CLI::App* cmd, Options& o, bool with_norm) {
  cmd->add_option("--problem", o.problem, "cavity | channel | manufactured")
      ->check(CLI::IsMember({"cavity", "channel", "imported-mesh-channel", "manufactured"}));
  cmd->add_option("--re", o.run.re, "Reynolds number (nu = 1/Re)");
  cmd->add_option("--n", o.run.n, "cells per side of the unit-square mesh");
  cmd->add_option("--mesh", o.run.mesh_path, "trimesh file for the channel problem");
  cmd->add_flag("--barycentric", o.run.barycentric, "barycentric refinement of every triangle");
  cmd->add_option("--m", o.run.depth, "Anderson depth (0 = Picard)");
  cmd->add_option("--beta", o.run.damping, "damping in (0, 1]");
  if (with_norm) {
    cmd->add_option("--norm", o.norm, "optimization norm")
        ->check(CLI::IsMember({"h10", "l2", "lumped-l2", "ell2", "hminus1"}));
  }
  cmd->add_option("--tol", o.run.tolerance, "stopping tolerance on the H1_0 residual");
  cmd->add_option("--max-iters", o.run.max_iterations, "iteration cap");
  cmd->add_option("--out", o.run.output, "CSV output path");
  cmd->add_flag("--fast", o.run.fast, "skip the non-driving coefficient solve");
  cmd->add_flag("--no-timing", o.no_timing, "write step_seconds as 0");
  cmd->add_option("--config", o.config_file, "key=value configuration file");
  for (auto* opt : cmd->get_options()) opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
}

bool truthy(const std::string& v) { return v == "1" || v == "true" || v == "yes" || v == "on"; }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Turns a key=value file into option tokens placed ahead of the user's flags.
std::vector<std::string> config_tokens(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--config", "cannot read " + path);
  std::vector<std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw CLI::ValidationError("--config", path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    std::replace(key.begin(), key.end(), '_', '-');
    if (key == "barycentric" || key == "fast" || key == "no-timing") {
      if (truthy(value)) out.push_back("--" + key);
    } else {
      out.push_back("--" + key);
      out.push_back(value);
    }
  }
  return out;
}

std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  for (std::size_t i = 0; i + 1 < args.size(); ++i) {
    if (args[i] == "--config") {
      const auto extra = config_tokens(args[i + 1]);
      if (!args.empty()) args.insert(args.begin() + 1, extra.begin(), extra.end());
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      const auto extra = config_tokens(args[i].substr(9));
      args.insert(args.begin() + 1, extra.begin(), extra.end());
      break;
    }
  }
  std::reverse(args.begin(), args.end());
  return args;
}

void finish_config(Options& o) {
  o.run.problem = *parse_problem_kind(o.problem);
  o.run.norm = *parse_norm_kind(o.norm);
  o.run.include_timing = !o.no_timing;
}

int run_solve(const Options& o) {
  const RunReport report = run(o.run);
  if (!o.run.output.empty()) write_report(report, o.run.output, o.run.include_timing);
  std::printf("%s after %d iterations, ||grad w|| = %.6e\n", std::string(to_string(report.outcome)).c_str(),
              report.iterations, report.final_residual);
  if (!report.message.empty()) std::printf("%s\n", report.message.c_str());
  return exit_code(report.outcome);
}

std::string per_norm_path(const std::string& out, NormKind kind) {
  std::filesystem::path p(out);
  const std::string stem = p.stem().string() + "_" + std::string(to_string(kind));
  return (p.parent_path() / (stem + p.extension().string())).string();
}

int run_compare(const Options& o) {
  const NormComparison cmp = compare_norms(o.run);
  std::fputs(comparison_table(cmp).c_str(), stdout);
  int worst = 0;
  for (const auto& [kind, report] : cmp.runs) {
    if (!o.run.output.empty()) write_report(report, per_norm_path(o.run.output, kind), o.run.include_timing);
    worst = std::max(worst, exit_code(report.outcome));
  }
  return worst;
}

int run_verify() {
  const auto results = verify::run_suite();
  bool ok = true;
  for (const auto& r : results) {
    std::printf("%s %s  %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str());
    ok = ok && r.passed;
  }
  return ok ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anderson-accelerated Picard iteration for steady Navier-Stokes"};
  app.require_subcommand(1);
  Options solve_opts, compare_opts;
  auto* solve = app.add_subcommand("solve", "one AA-Picard run");
  add_run_options(solve, solve_opts, true);
  auto* compare = app.add_subcommand("compare", "all five optimization norms on one configuration");
  add_run_options(compare, compare_opts, false);
  auto* verify_cmd = app.add_subcommand("verify", "built-in oracle and property checks");

  try {
    auto args = expand_config(argc, argv);
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    if (solve->parsed()) {
      finish_config(solve_opts);
      return run_solve(solve_opts);
    }
    if (compare->parsed()) {
      finish_config(compare_opts);
      return run_compare(compare_opts);
    }
    if (verify_cmd->parsed()) return run_verify();
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsageError;
  } catch (const MeshError& e) {
    std::fprintf(stderr, "mesh error: %s\n", e.what());
    return kUsageError;
  } catch (const SolverError& e) {
    std::fprintf(stderr, "solver failure: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  }
  return kUsageError;
}
