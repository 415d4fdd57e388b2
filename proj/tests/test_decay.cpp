#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oscml/decay.hpp"
#include "oscml/report.hpp"

using namespace oscml;

namespace {

QuadConfig sweep_cfg(double rel_tol = 1e-5) {
  QuadConfig cfg;
  cfg.rel_tol = rel_tol;
  cfg.rho = 1.0;
  return cfg;
}

DecayReport synthetic_report(double p, double q, double mprime_h, int n = 16) {
  // samples following C x^{-p} ln^q x, packaged as a report with 1/h = p
  DecayReport rep;
  rep.h_used = Rational(1);
  (void)mprime_h;
  for (double lam : geometric_grid(10.0, 1e5, n)) {
    DecaySample s;
    s.lambda = lam;
    s.abs_value = 3.7 * std::pow(lam, -p) * std::pow(std::log(lam), q);
    s.error_estimate = 0.0;
    s.tolerance_met = true;
    rep.samples.push_back(s);
  }
  return rep;
}

}  // namespace

TEST_CASE("geometric grid") {
  auto g = geometric_grid(2.0, 32.0, 5);
  REQUIRE(g.size() == 5);
  CHECK(g[0] == doctest::Approx(2.0));
  CHECK(g[4] == doctest::Approx(32.0));
  CHECK(g[2] == doctest::Approx(8.0));
  CHECK_THROWS_AS(geometric_grid(-1.0, 4.0, 3), std::invalid_argument);
  CHECK_THROWS_AS(geometric_grid(4.0, 2.0, 3), std::invalid_argument);
}

TEST_CASE("fit recovers synthetic power-log laws") {
  for (auto [p, q] : std::vector<std::pair<double, double>>{
           {0.5, 1.0}, {1.0, 0.0}, {0.75, 2.0}, {2.0, 1.0}}) {
    std::vector<std::pair<double, double>> pts;
    for (double x : geometric_grid(10.0, 1e6, 24))
      pts.emplace_back(x, 2.5 * std::pow(x, -p) * std::pow(std::log(x), q));
    FitResult fit = fit_decay(pts);
    CAPTURE(p);
    CAPTURE(q);
    CHECK(fit.p == doctest::Approx(p).epsilon(1e-6));
    CHECK(fit.q == doctest::Approx(q).epsilon(1e-5));
    CHECK(fit.log_c == doctest::Approx(std::log(2.5)).epsilon(1e-5));
    CHECK(fit.residual < 1e-9);
  }
}

TEST_CASE("fit refuses bad input") {
  std::vector<std::pair<double, double>> few = {{2, 1}, {4, 0.5}, {8, 0.25}};
  CHECK_THROWS_AS(fit_decay(few), std::invalid_argument);
  std::vector<std::pair<double, double>> low;
  for (double x : geometric_grid(1.01, 100.0, 10)) low.emplace_back(x, 1.0 / x);
  CHECK_THROWS_AS(fit_decay(low), std::invalid_argument);  // x < 2
  std::vector<std::pair<double, double>> neg;
  for (double x : geometric_grid(2.0, 100.0, 10)) neg.emplace_back(x, -1.0);
  CHECK_THROWS_AS(fit_decay(neg), std::invalid_argument);
}

TEST_CASE("trend slope") {
  std::vector<double> xs, flat, grow;
  for (double x : geometric_grid(10.0, 1e4, 10)) {
    xs.push_back(x);
    flat.push_back(5.0);
    grow.push_back(std::pow(x, 0.1));
  }
  CHECK(std::abs(trend_slope_per_decade(xs, flat)) < 1e-12);
  // y = x^0.1: slope of ln y per decade of x is 0.1*ln(10)
  CHECK(trend_slope_per_decade(xs, grow) == doctest::Approx(0.1 * std::log(10.0)));
}

TEST_CASE("verify_theorem1 accepts a conforming law and rejects a violating one") {
  {
    // |I| = C lambda^{-1} ln^2 lambda with h = 1: ratio is exactly constant
    auto rep = synthetic_report(1.0, 2.0, 0);
    rep.branch_h1 = true;
    rep.m_used = 0;
    for (auto& s : rep.samples)
      s.ratio = s.abs_value * s.lambda / std::pow(std::log(s.lambda), 2);
    Verdict v = verify_theorem1(rep);
    CHECK(v.pass);
  }
  {
    // decay too slow by an extra ln^2: ratio grows, must FAIL
    auto rep = synthetic_report(1.0, 4.0, 0);
    rep.branch_h1 = true;
    rep.m_used = 0;
    for (auto& s : rep.samples)
      s.ratio = s.abs_value * s.lambda / std::pow(std::log(s.lambda), 2);
    Verdict v = verify_theorem1(rep);
    CHECK_FALSE(v.pass);
    CHECK(v.str().find("verdict=FAIL") != std::string::npos);
  }
  {
    // too few usable samples
    DecayReport rep;
    rep.h_used = Rational(1);
    Verdict v = verify_theorem1(rep);
    CHECK_FALSE(v.pass);
  }
}

TEST_CASE("lambda_sweep on the Morse phase x^2 + y^2") {
  // J(lambda) = integral over the unit disk of e^{i lambda r^2}: decays like
  // 1/lambda, h = 1, so the h=1 branch ratio uses ln^2 and must stay bounded.
  auto f = parse_phase("x^2 + y^2");
  Amplitude disk = Amplitude::indicator_of(1.0);
  auto grid = geometric_grid(8.0, 2048.0, 9);
  auto rep = lambda_sweep(f, disk, {1.0, 1.0}, grid, sweep_cfg(), Rational(1), 0);
  REQUIRE(rep.samples.size() == 9);
  CHECK(rep.branch_h1);
  CHECK(rep.excluded == 0);
  CHECK(rep.fit_done);
  // |J| = pi |e^{i lambda} - 1| / lambda <= 2 pi / lambda
  for (const auto& s : rep.samples)
    CHECK(s.abs_value <= 2.0 * 3.14159265358979323846 / s.lambda * 1.01);
  Verdict v = verify_theorem1(rep);
  CHECK(v.pass);
}

TEST_CASE("epsilon_sweep recovers the sublevel power law of the disk") {
  // |{x^2 + y^2 <= eps}| = pi eps: exponent 1 in 1/eps
  auto f = parse_phase("x^2 + y^2");
  std::vector<double> eps;
  for (double e : geometric_grid(4.0, 256.0, 10)) eps.push_back(1.0 / e);
  auto rep = epsilon_sweep(f, eps, 1.0, 12, ExecMode::openmp, Rational(1), 0);
  REQUIRE(rep.samples.size() == 10);
  CHECK(rep.fit_done);
  CHECK(rep.regime == DeltaRegime::equal_one);
  CHECK(rep.fitted_delta == doctest::Approx(1.0).epsilon(0.02));
  CHECK(std::abs(rep.fitted_logpow) < 0.15);
}

TEST_CASE("epsilon_sweep regime classification") {
  auto f = parse_phase("x^2 + y^2");
  std::vector<double> eps = {0.25, 0.125};
  CHECK(epsilon_sweep(f, eps, 1.0, 6, ExecMode::serial, Rational(1, 2), 0).regime ==
        DeltaRegime::below_one);
  CHECK(epsilon_sweep(f, eps, 1.0, 6, ExecMode::serial, Rational(3, 2), 1).regime ==
        DeltaRegime::above_one);
}

TEST_CASE("morse case checks pass for both signs") {
  auto grid = geometric_grid(32.0, 2048.0, 7);
  QuadConfig cfg = sweep_cfg(1e-4);
  auto plus = morse_case_check('+', grid, cfg);
  CHECK(plus.verdict.pass);
  auto minus = morse_case_check('-', grid, cfg);
  CHECK(minus.verdict.pass);
  CHECK_THROWS_AS(morse_case_check('x', grid, cfg), std::invalid_argument);
}

TEST_CASE("sweep CSV round trip reproduces the verdict") {
  auto f = parse_phase("x^2 + y^2");
  Amplitude disk = Amplitude::indicator_of(1.0);
  auto grid = geometric_grid(8.0, 512.0, 8);
  auto rep = lambda_sweep(f, disk, {1.0, 1.0}, grid, sweep_cfg(), Rational(1), 0);
  Verdict direct = verify_theorem1(rep);
  CsvDocument doc = sweep_csv(rep, {{"phase", "x^2 + y^2"}});
  CsvDocument parsed = parse_csv(doc.str());
  CHECK(parsed.config.at("phase") == "x^2 + y^2");
  Verdict round = verdict_from_sweep_csv(parsed);
  CHECK(round.pass == direct.pass);
  // 17 significant digits survive the round trip bit for bit
  REQUIRE(parsed.rows.size() == rep.samples.size());
  for (std::size_t i = 0; i < parsed.rows.size(); ++i) {
    CHECK(parsed.rows[i][0] == rep.samples[i].lambda);
    CHECK(parsed.rows[i][1] == rep.samples[i].abs_value);
    CHECK(parsed.rows[i][3] == rep.samples[i].ratio);
  }
}
