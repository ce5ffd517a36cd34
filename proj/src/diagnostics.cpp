#include "aapicard/diagnostics.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace aapicard {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double safe_ratio(double num, double den) { return den > 0.0 ? num / den : kNaN; }

}  // namespace

DualGains dual_gains(const AAState& state, const NormOperator& h10, const NormOperator& l2,
                     double regularization) {
  return {solve_alpha(state, h10, regularization), solve_alpha(state, l2, regularization)};
}

FirstOrderFactors first_order_factors(const AAState& state, const DualGains& gains, const NormOperator& h10,
                                      const NormOperator& l2) {
  FirstOrderFactors f;
  const auto combined_alpha = state.free_part(gains.h10.combined);
  const auto combined_alphahat = state.free_part(gains.l2.combined);
  const auto latest = state.free_part(state.latest_residual());

  f.alpha_l2 = l2.norm(combined_alpha);
  f.alphahat_l2 = l2.norm(combined_alphahat);
  f.alpha_h10 = h10.norm(combined_alpha);
  f.alphahat_h10 = h10.norm(combined_alphahat);

  const double latest_l2 = l2.norm(latest);
  const double latest_h10 = h10.norm(latest);
  f.ratio_l2_h10 = safe_ratio(latest_l2, latest_h10);

  const double theta_h10 = safe_ratio(f.alpha_h10, latest_h10);
  const double theta_l2 = safe_ratio(f.alphahat_l2, latest_l2);
  const double gains_term = std::sqrt(theta_h10 * theta_l2);
  const double tail = std::sqrt(f.ratio_l2_h10);
  f.factor_h10 = gains_term * std::sqrt(safe_ratio(f.alpha_l2, f.alphahat_l2)) * tail;
  f.factor_l2 = gains_term * std::sqrt(safe_ratio(f.alphahat_h10, f.alpha_h10)) * tail;
  return f;
}

std::string_view to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::converged: return "converged";
    case Outcome::max_iterations: return "max-iterations";
    case Outcome::diverged: return "diverged";
    case Outcome::solver_failure: return "solver-failure";
  }
  return "unknown";
}

Outcome parse_outcome(std::string_view text) {
  for (auto o : {Outcome::converged, Outcome::max_iterations, Outcome::diverged, Outcome::solver_failure}) {
    if (to_string(o) == text) return o;
  }
  throw std::invalid_argument("unknown outcome '" + std::string(text) + "'");
}

int exit_code(Outcome outcome) {
  switch (outcome) {
    case Outcome::converged: return 0;
    case Outcome::max_iterations: return 2;
    case Outcome::diverged: return 3;
    case Outcome::solver_failure: return 4;
  }
  return 1;
}

namespace {

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_list(const std::vector<double>& values) {
  std::string s = "\"[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) s += ',';
    s += fmt(values[i]);
  }
  return s + "]\"";
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (char ch : line) {
    if (ch == '"') {
      quoted = !quoted;
    } else if (ch == ',' && !quoted) {
      fields.emplace_back();
    } else {
      fields.back() += ch;
    }
  }
  return fields;
}

double parse_double(const std::string& text) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0') throw std::invalid_argument("report: bad number '" + text + "'");
  return v;
}

std::vector<double> parse_list(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  std::vector<double> out;
  for (const auto& v : j) out.push_back(v.get<double>());
  return out;
}

}  // namespace

void write_report(const RunReport& report, std::ostream& out, bool include_timing) {
  out << kCsvHeader << '\n';
  for (const auto& r : report.records) {
    out << r.k << ',' << fmt(r.res_l2) << ',' << fmt(r.res_L2) << ',' << fmt(r.res_lumped_L2) << ','
        << fmt(r.res_H10) << ',' << fmt(r.res_Hm1) << ',' << fmt(r.theta_H10) << ',' << fmt(r.theta_L2) << ','
        << fmt(r.factor_H10) << ',' << fmt(r.factor_L2) << ',' << fmt(r.ratio_L2_H10) << ','
        << fmt(r.identity_residual) << ',' << fmt_list(r.alpha) << ',' << fmt_list(r.alphahat) << ','
        << fmt(include_timing ? r.step_seconds : 0.0) << '\n';
  }
  out << "# outcome," << to_string(report.outcome) << '\n';
  out << "# iterations," << report.iterations << '\n';
  out << "# final_residual," << fmt(report.final_residual) << '\n';
  for (const auto& [key, value] : report.config) out << "# config," << key << '=' << value << '\n';
  if (!report.message.empty()) out << "# message," << report.message << '\n';
}

void write_report(const RunReport& report, const std::filesystem::path& path, bool include_timing) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_report(report, out, include_timing);
  out.flush();
  if (!out) throw std::runtime_error("error writing " + path.string());
}

RunReport read_report(std::istream& in) {
  RunReport report;
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw std::invalid_argument("report: missing CSV header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("# ", 0) == 0) {
      const auto comma = line.find(',');
      const std::string key = line.substr(2, comma - 2);
      const std::string value = comma == std::string::npos ? "" : line.substr(comma + 1);
      if (key == "outcome") {
        report.outcome = parse_outcome(value);
      } else if (key == "iterations") {
        report.iterations = std::stoi(value);
      } else if (key == "final_residual") {
        report.final_residual = parse_double(value);
      } else if (key == "config") {
        const auto eq = value.find('=');
        report.config[value.substr(0, eq)] = eq == std::string::npos ? "" : value.substr(eq + 1);
      } else if (key == "message") {
        report.message = value;
      }
      continue;
    }
    const auto f = split_csv(line);
    if (f.size() != 15) throw std::invalid_argument("report: expected 15 columns, got " + std::to_string(f.size()));
    IterationRecord r;
    r.k = std::stoi(f[0]);
    r.res_l2 = parse_double(f[1]);
    r.res_L2 = parse_double(f[2]);
    r.res_lumped_L2 = parse_double(f[3]);
    r.res_H10 = parse_double(f[4]);
    r.res_Hm1 = parse_double(f[5]);
    r.theta_H10 = parse_double(f[6]);
    r.theta_L2 = parse_double(f[7]);
    r.factor_H10 = parse_double(f[8]);
    r.factor_L2 = parse_double(f[9]);
    r.ratio_L2_H10 = parse_double(f[10]);
    r.identity_residual = parse_double(f[11]);
    r.alpha = parse_list(f[12]);
    r.alphahat = parse_list(f[13]);
    r.step_seconds = parse_double(f[14]);
    report.records.push_back(std::move(r));
  }
  return report;
}

}  // namespace aapicard
