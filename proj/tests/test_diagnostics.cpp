#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "aapicard/diagnostics.hpp"

using namespace aapicard;

namespace {

int count_lines(const std::string& s, bool data_only) {
  std::istringstream in(s);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    if (data_only && (line.empty() || line[0] == '#' || line[0] == 'k')) continue;
    ++n;
  }
  return n;
}

IterationRecord random_record(std::mt19937_64& rng, int k) {
  std::uniform_real_distribution<double> uni(-5.0, 5.0);
  auto r = [&] { return std::pow(10.0, uni(rng)) * (uni(rng) > 0 ? 1 : -1); };
  IterationRecord rec;
  rec.k = k;
  rec.res_l2 = r();
  rec.res_L2 = r();
  rec.res_lumped_L2 = r();
  rec.res_H10 = r();
  rec.res_Hm1 = r();
  rec.theta_H10 = r();
  rec.theta_L2 = r();
  rec.factor_H10 = r();
  rec.factor_L2 = r();
  rec.ratio_L2_H10 = r();
  rec.identity_residual = r();
  rec.alpha = {r(), r(), 1.0 / 3.0};
  rec.alphahat = {r()};
  rec.step_seconds = r();
  return rec;
}

}  // namespace

TEST_CASE("header") {
  CHECK(kCsvHeader ==
        "k,res_l2,res_L2,res_lumpedL2,res_H10,res_Hm1,theta_H10,theta_L2,factor_H10,factor_L2,ratio_L2_H10,"
        "identity_residual,alpha_json,alphahat_json,step_seconds");
}

TEST_CASE("empty run") {
  RunReport report;
  report.outcome = Outcome::solver_failure;
  std::ostringstream out;
  write_report(report, out);
  CHECK(count_lines(out.str(), true) == 0);
  CHECK(out.str().find("# outcome,solver-failure") != std::string::npos);
  std::istringstream in(out.str());
  CHECK(read_report(in).outcome == Outcome::solver_failure);
}

TEST_CASE("round trip") {
  std::mt19937_64 rng(4);
  RunReport report;
  for (int k = 1; k <= 3; ++k) report.records.push_back(random_record(rng, k));
  report.records[1].identity_residual = std::numeric_limits<double>::quiet_NaN();
  report.outcome = Outcome::converged;
  report.iterations = 3;
  report.final_residual = report.records.back().res_H10;
  report.config["m"] = "2";

  std::ostringstream out;
  write_report(report, out);
  CHECK(count_lines(out.str(), true) == 3);
  std::istringstream in(out.str());
  const auto back = read_report(in);
  REQUIRE(back.records.size() == 3);
  for (int k = 0; k < 3; ++k) {
    const auto& a = report.records[k];
    const auto& b = back.records[k];
    CHECK(b.k == a.k);
    CHECK(b.res_l2 == a.res_l2);
    CHECK(b.res_L2 == a.res_L2);
    CHECK(b.res_lumped_L2 == a.res_lumped_L2);
    CHECK(b.res_H10 == a.res_H10);
    CHECK(b.res_Hm1 == a.res_Hm1);
    CHECK(b.theta_H10 == a.theta_H10);
    CHECK(b.theta_L2 == a.theta_L2);
    CHECK(b.factor_H10 == a.factor_H10);
    CHECK(b.factor_L2 == a.factor_L2);
    CHECK(b.ratio_L2_H10 == a.ratio_L2_H10);
    if (std::isnan(a.identity_residual)) {
      CHECK(std::isnan(b.identity_residual));
    } else {
      CHECK(b.identity_residual == a.identity_residual);
    }
    CHECK(b.alpha == a.alpha);
    CHECK(b.alphahat == a.alphahat);
    CHECK(b.step_seconds == a.step_seconds);
  }
  CHECK(back.outcome == Outcome::converged);
  CHECK(back.iterations == 3);
  CHECK(back.final_residual == report.final_residual);
  CHECK(back.config.at("m") == "2");
}

TEST_CASE("timing can be suppressed") {
  RunReport report;
  IterationRecord rec;
  rec.k = 1;
  rec.step_seconds = 0.25;
  report.records.push_back(rec);
  std::ostringstream a, b;
  write_report(report, a, false);
  report.records[0].step_seconds = 0.5;
  write_report(report, b, false);
  CHECK(a.str() == b.str());
}

TEST_CASE("outcomes and exit codes") {
  CHECK(exit_code(Outcome::converged) == 0);
  CHECK(exit_code(Outcome::max_iterations) == 2);
  CHECK(exit_code(Outcome::diverged) == 3);
  CHECK(exit_code(Outcome::solver_failure) == 4);
  for (auto o : {Outcome::converged, Outcome::max_iterations, Outcome::diverged, Outcome::solver_failure}) {
    CHECK(parse_outcome(to_string(o)) == o);
  }
  CHECK_THROWS(parse_outcome("done"));
}

TEST_CASE("first-order factors") {
  const int n = 6;
  const auto h10 = NormOperator::diagonal(NormKind::h10, {10, 20, 30, 40, 50, 60});
  const auto l2 = NormOperator::identity(n);

  SUBCASE("identical coefficient sets give unit middle ratios") {
    AAState s(0, {});
    const std::vector<double> w{1, 2, 3, 4, 5, 6};
    s.push(std::vector<double>(n, 0.0), w, w);
    const auto gains = dual_gains(s, h10, l2);
    const auto f = first_order_factors(s, gains, h10, l2);
    const double expect = std::sqrt(l2.norm(w) / h10.norm(w));
    CHECK(f.factor_h10 == doctest::Approx(expect));
    CHECK(f.factor_l2 == doctest::Approx(expect));
    CHECK(f.ratio_l2_h10 == doctest::Approx(l2.norm(w) / h10.norm(w)));
  }
  SUBCASE("each coefficient set wins in its own norm") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    AAState s(3, {});
    for (int j = 0; j < 4; ++j) {
      std::vector<double> w(n);
      for (auto& x : w) x = uni(rng);
      s.push(std::vector<double>(n, 0.0), w, w);
    }
    const auto f = first_order_factors(s, dual_gains(s, h10, l2), h10, l2);
    CHECK(f.alphahat_l2 <= f.alpha_l2 * (1 + 1e-12));
    CHECK(f.alpha_h10 <= f.alphahat_h10 * (1 + 1e-12));
    CHECK(std::isfinite(f.factor_h10));
    CHECK(std::isfinite(f.factor_l2));
  }
  SUBCASE("zero residual gives NaN") {
    AAState s(0, {});
    s.push(std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), std::vector<double>(n, 0.0));
    const auto f = first_order_factors(s, dual_gains(s, h10, l2), h10, l2);
    CHECK(std::isnan(f.factor_h10));
    CHECK(std::isnan(f.ratio_l2_h10));
  }
}
