#include <doctest.h>

#include "fruc/swing_verifier.hpp"

#include <filesystem>
#include <fstream>
#include <string>

using namespace fruc;

namespace {

ResponsePortfolio undamped(double H, double P, double E = 0.0) {
  ResponsePortfolio p;
  p.inertia_mva_s = H;
  p.pfr_mw = P;
  p.sfr_mw = P;
  p.efr_mw = E;
  p.infeed_loss_mw = 1320;
  return p;
}

// Exact solution of y' = a (L - R(t) - c y) with R piecewise linear, built
// piece by piece from y = y_p(t) + C exp(-a c t).
double exact_drop(const ResponsePortfolio& p, double t_query) {
  const double a = p.f_nominal_hz / (2.0 * p.inertia_mva_s);
  const double c = p.damping_per_hz * p.demand_mw;
  const double held = p.pfr_mw * std::min(p.t_sfr_s / p.t_pfr_s, 1.0);
  std::vector<double> cuts{0.0, p.t_efr_s, p.t_pfr_s, p.t_sfr_s, 1e9};
  std::sort(cuts.begin(), cuts.end());
  double y = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double t0 = cuts[i];
    const double t1 = std::min(cuts[i + 1], t_query);
    if (t1 <= t0) continue;
    // R(t) = r0 + r1 (t - t0) on this piece.
    const double mid = 0.5 * (t0 + std::min(cuts[i + 1], t0 + 1.0));
    const double efr_slope = mid < p.t_efr_s ? p.efr_mw / p.t_efr_s : 0.0;
    const double pfr_slope = (mid < p.t_pfr_s && mid < p.t_sfr_s) ? p.pfr_mw / p.t_pfr_s : 0.0;
    const double r0 = p.efr_mw * std::min(t0 / p.t_efr_s, 1.0) +
                      (t0 < p.t_sfr_s ? p.pfr_mw * std::min(t0 / p.t_pfr_s, 1.0)
                                      : std::max(held, p.sfr_mw));
    const double r1 = efr_slope + pfr_slope;
    const double alpha = a * (p.infeed_loss_mw - r0);
    const double beta = -a * r1;
    const double h = t1 - t0;
    if (c == 0.0) {
      y += alpha * h + beta * h * h / 2.0;
    } else {
      const double lam = a * c;
      const double yp0 = alpha / lam - beta / (lam * lam);
      const double yp1 = yp0 + beta * h / lam;
      y = yp1 + (y - yp0) * std::exp(-lam * h);
    }
    if (t1 == t_query) break;
  }
  return y;
}

FrequencyTrace two_point_trace(double nadir, double qss) {
  FrequencyTrace tr;
  tr.dt = 60;
  tr.time_s = Eigen::Vector2d(0, 60);
  tr.drop_hz = Eigen::Vector2d(0, qss);
  tr.response_mw = Eigen::Vector2d(0, 0);
  tr.nadir_hz = nadir;
  tr.qss_hz = qss;
  return tr;
}

}  // namespace

TEST_CASE("no loss means no excursion") {
  auto p = undamped(150000, 1815);
  p.infeed_loss_mw = 0;
  const auto tr = simulate(p);
  CHECK(tr.drop_hz.cwiseAbs().maxCoeff() == 0.0);
  CHECK(tr.nadir_hz == 0.0);
  CHECK(tr.time_s.size() == 2401);
}

TEST_CASE("undamped nadir on the limit") {
  // 150 GVA s holding 1815 MW sits exactly on the nadir constant.
  const auto tr = simulate(undamped(150000, 1815));
  CHECK(tr.nadir_hz == doctest::Approx(0.800).epsilon(0.0025));
  CHECK(std::abs(tr.nadir_hz - 0.8) <= 0.002);
  CHECK(std::abs(tr.nadir_time_s - 1320.0 * 10 / 1815) <= 0.02);

  auto damped = undamped(150000, 1815);
  damped.damping_per_hz = 0.01;
  damped.demand_mw = 32200;
  CHECK(simulate(damped).nadir_hz < tr.nadir_hz);
}

TEST_CASE("trajectory matches the piecewise exact solution") {
  auto p = undamped(198000, 1375, 100);
  p.sfr_mw = 1159;
  for (double damping : {0.0, 0.01}) {
    p.damping_per_hz = damping;
    p.demand_mw = 32200;
    const auto tr = simulate(p, 0.05, 120.0);
    double worst = 0.0;
    for (Eigen::Index k = 0; k < tr.time_s.size(); k += 7)
      worst = std::max(worst, std::abs(tr.drop_hz(k) - exact_drop(p, tr.time_s(k))));
    CAPTURE(damping);
    CHECK(worst < 1e-9);
  }
}

TEST_CASE("undamped nadir with a ramped EFR delivery") {
  // With EFR ramping over T_e the nadir grows by f_o E T_e / (4 H).
  for (double E : {0.0, 50.0, 100.0, 300.0}) {
    const double H = 140000;
    const double P = 1900;
    const auto p = undamped(H, P, E);
    const double expected = analytic_nadir(p) + 50.0 * E * 1.0 / (4.0 * H);
    CAPTURE(E);
    CHECK(simulate(p).nadir_hz == doctest::Approx(expected).epsilon(1e-6));
  }
}

TEST_CASE("closed-form agreement when EFR arrives quickly") {
  for (double E : {0.0, 100.0, 200.0}) {
    for (double H : {110000.0, 150000.0, 200000.0}) {
      auto p = undamped(H, 0.0, E);
      p.pfr_mw = 1.05 * (1320 - E) * std::max(1.0, 272250000.0 / H / 1320);
      p.t_efr_s = 0.1;
      const auto tr = simulate(p, 0.01, 60.0);
      CAPTURE(E);
      CAPTURE(H);
      REQUIRE(tr.nadir_time_s < p.t_pfr_s);
      CHECK(tr.nadir_hz == doctest::Approx(analytic_nadir(p)).epsilon(0.0025));
    }
  }
}

TEST_CASE("halving the step barely moves the nadir") {
  auto p = undamped(198000, 1375, 100);
  p.damping_per_hz = 0.01;
  p.demand_mw = 32200;
  const double coarse = simulate(p, 0.05, 120.0).nadir_hz;
  const double fine = simulate(p, 0.025, 120.0).nadir_hz;
  CHECK(std::abs(coarse - fine) < 1e-4);
}

TEST_CASE("nadir is monotone in inertia, EFR, PFR and damping") {
  auto base = undamped(160000, 1500, 50);
  base.damping_per_hz = 0.005;
  base.demand_mw = 30000;
  const double n0 = simulate(base).nadir_hz;
  auto more = base;
  more.inertia_mva_s *= 1.2;
  CHECK(simulate(more).nadir_hz <= n0);
  more = base;
  more.efr_mw += 100;
  CHECK(simulate(more).nadir_hz <= n0);
  more = base;
  more.pfr_mw += 200;
  CHECK(simulate(more).nadir_hz <= n0);
  more = base;
  more.damping_per_hz *= 2;
  CHECK(simulate(more).nadir_hz <= n0);
}

TEST_CASE("secondary response replaces primary without a withdrawal") {
  auto p = undamped(198000, 1375);
  p.sfr_mw = 1159;
  CHECK(response_at(p, 5.0) == doctest::Approx(687.5));
  CHECK(response_at(p, 29.9) == 1375);
  CHECK(response_at(p, 30.0) == 1375);
  const auto tr = simulate(p);
  CHECK(tr.sfr_below_pfr);
  CHECK(tr.response_mw.tail(100).minCoeff() == 1375);

  p.sfr_mw = 1500;
  CHECK(response_at(p, 31.0) == 1500);
  CHECK_FALSE(simulate(p).sfr_below_pfr);
}

TEST_CASE("quasi-steady drop settles where damping balances the residual") {
  auto p = undamped(198000, 1062.4);
  p.sfr_mw = 1159;
  p.damping_per_hz = 0.01;
  p.demand_mw = 32200;
  const auto tr = simulate(p, 0.05, 600.0);
  CHECK(tr.qss_hz == doctest::Approx((1320 - 1159) / 322.0).epsilon(1e-4));
  CHECK(tr.nadir_hz <= 0.8 + 1e-3);
}

TEST_CASE("long double and double traces agree") {
  ResponsePortfolioT<long double> pl;
  pl.inertia_mva_s = 150000;
  pl.pfr_mw = 1815;
  pl.sfr_mw = 1815;
  pl.infeed_loss_mw = 1320;
  const auto a = simulate(pl, 0.05L, 120.0L);
  const auto b = simulate(undamped(150000, 1815));
  CHECK(static_cast<double>(a.nadir_hz) == doctest::Approx(b.nadir_hz).epsilon(1e-12));
}

TEST_CASE("simulation arguments are checked") {
  const auto p = undamped(150000, 1815);
  CHECK_THROWS_AS(simulate(p, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(simulate(p, 0.2), std::invalid_argument);
  CHECK_THROWS_AS(simulate(p, 0.05, 30.0), std::invalid_argument);
  auto q = p;
  q.inertia_mva_s = 0;
  CHECK_THROWS_AS(simulate(q), std::invalid_argument);
  q = p;
  q.pfr_mw = -1;
  CHECK_THROWS_AS(simulate(q), std::invalid_argument);
  CHECK(simulate(p, 0.1, 60.0).time_s.size() == 601);
}

TEST_CASE("compliance margins and messages") {
  auto r = check_compliance(two_point_trace(0.79, 0.45), 0.8, 0.5);
  CHECK(r.pass);
  CHECK(r.nadir_margin_hz == doctest::Approx(0.01));
  CHECK(r.qss_margin_hz == doctest::Approx(0.05));
  CHECK(r.message.rfind("pass", 0) == 0);

  r = check_compliance(two_point_trace(0.85, 0.45), 0.8, 0.5);
  CHECK_FALSE(r.pass);
  CHECK_FALSE(r.nadir_ok);
  CHECK(r.qss_ok);
  CHECK(r.message.find("nadir limit exceeded") != std::string::npos);
  CHECK(r.message.find("qss") == std::string::npos);

  r = check_compliance(two_point_trace(0.8, 0.5), 0.8, 0.5);
  CHECK(r.pass);
  r = check_compliance(two_point_trace(0.8009, 0.5009), 0.8, 0.5);
  CHECK(r.pass);
  r = check_compliance(two_point_trace(0.7, 0.52), 0.8, 0.5);
  CHECK_FALSE(r.qss_ok);
  CHECK(r.message.find("qss limit exceeded") != std::string::npos);

  auto shorter = two_point_trace(0.1, 0.1);
  shorter.time_s(1) = 30;
  CHECK_THROWS_AS(check_compliance(shorter, 0.8, 0.5), std::invalid_argument);
}

TEST_CASE("trace csv") {
  const auto tr = simulate(undamped(150000, 1815), 0.1, 60.0);
  const auto path = std::filesystem::temp_directory_path() / "fruc_trace_test.csv";
  write_trace_csv(path, tr);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "time_s,delta_f_hz,response_mw");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 601);
  std::filesystem::remove(path);
}
