#ifndef FRUC_SWING_VERIFIER_HPP
#define FRUC_SWING_VERIFIER_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <stdexcept>
#include <string>

namespace fruc {

/// Response held for one hour, as seen by a single loss-of-infeed event.
template <typename Scalar>
struct ResponsePortfolioT {
  Scalar inertia_mva_s = 0;
  Scalar demand_mw = 0;
  Scalar efr_mw = 0;
  Scalar t_efr_s = 1;
  Scalar pfr_mw = 0;
  Scalar t_pfr_s = 10;
  Scalar sfr_mw = 0;
  Scalar t_sfr_s = 30;
  Scalar infeed_loss_mw = 0;
  Scalar damping_per_hz = 0;
  Scalar f_nominal_hz = 50;
};
using ResponsePortfolio = ResponsePortfolioT<double>;

/// Total response R(t) in MW. EFR and PFR ramp linearly to full output over
/// their delivery times. From t_sfr onward SFR replaces PFR one-for-one; if
/// SFR is smaller than the PFR already delivered, the PFR level is held.
template <typename Scalar>
Scalar response_at(const ResponsePortfolioT<Scalar>& p, Scalar t) {
  using std::min;
  using std::max;
  const Scalar efr = p.efr_mw * min(t / p.t_efr_s, Scalar(1));
  if (t < p.t_sfr_s) return efr + p.pfr_mw * min(t / p.t_pfr_s, Scalar(1));
  const Scalar held = p.pfr_mw * min(p.t_sfr_s / p.t_pfr_s, Scalar(1));
  return efr + max(held, p.sfr_mw);
}

/// Right-hand side of the swing equation for the frequency drop
/// delta = f_o - f:  2 H / f_o * d(delta)/dt = P_loss - R(t) - D d delta.
template <typename Scalar>
Scalar drop_rate(const ResponsePortfolioT<Scalar>& p, Scalar t, Scalar delta) {
  const Scalar imbalance = p.infeed_loss_mw - response_at(p, t) -
                           p.damping_per_hz * p.demand_mw * delta;
  return imbalance * p.f_nominal_hz / (Scalar(2) * p.inertia_mva_s);
}

/// Closed-form undamped nadir drop f_o T_p (P_loss - E)^2 / (4 H P_req).
/// Valid when EFR is in full before the nadir and the nadir precedes T_p.
template <typename Scalar>
Scalar analytic_nadir(const ResponsePortfolioT<Scalar>& p) {
  const Scalar uncovered = p.infeed_loss_mw - p.efr_mw;
  if (uncovered <= 0) return Scalar(0);
  return p.f_nominal_hz * p.t_pfr_s * uncovered * uncovered /
         (Scalar(4) * p.inertia_mva_s * p.pfr_mw);
}

template <typename Scalar>
struct FrequencyTraceT {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Scalar dt = 0;
  Vector time_s;
  Vector drop_hz;      // f_o - f(t)
  Vector response_mw;  // R(t)
  Scalar nadir_hz = 0;
  Scalar nadir_time_s = 0;
  Scalar qss_hz = 0;  // mean drop over the last 10 s
  /// SFR smaller than the PFR it replaces; the PFR level was held instead.
  bool sfr_below_pfr = false;
};
using FrequencyTrace = FrequencyTraceT<double>;

/// Fixed-step RK4 integration of the swing equation from delta(0) = 0.
///
/// Steps that straddle a kink of R(t) (T_e, T_p, t_sfr) are split at the
/// kink so each sub-step integrates a smooth right-hand side.
template <typename Scalar>
FrequencyTraceT<Scalar> simulate(const ResponsePortfolioT<Scalar>& p,
                                 Scalar dt = Scalar(0.05),
                                 Scalar t_end = Scalar(120)) {
  if (!(dt > 0) || dt > p.t_efr_s / Scalar(10) * Scalar(1 + 1e-12))
    throw std::invalid_argument("time step must be positive and at most T_e/10");
  if (t_end < Scalar(60)) throw std::invalid_argument("t_end must be >= 60 s");
  if (p.infeed_loss_mw < 0 || p.efr_mw < 0 || p.pfr_mw < 0 || p.sfr_mw < 0 ||
      p.damping_per_hz < 0 || p.demand_mw < 0)
    throw std::invalid_argument("portfolio magnitudes must be >= 0");
  if (p.infeed_loss_mw > 0 && !(p.inertia_mva_s > 0))
    throw std::invalid_argument(
        "zero inertia with a nonzero loss gives unbounded RoCoF");

  using std::round;
  const auto steps = static_cast<Eigen::Index>(round(t_end / dt));
  FrequencyTraceT<Scalar> tr;
  tr.dt = dt;
  tr.time_s.resize(steps + 1);
  tr.drop_hz.resize(steps + 1);
  tr.response_mw.resize(steps + 1);

  const std::array<Scalar, 3> kinks{p.t_efr_s, p.t_pfr_s, p.t_sfr_s};
  const auto rk4 = [&p](Scalar t, Scalar y, Scalar h) {
    const Scalar k1 = drop_rate(p, t, y);
    const Scalar k2 = drop_rate(p, t + h / 2, y + h / 2 * k1);
    const Scalar k3 = drop_rate(p, t + h / 2, y + h / 2 * k2);
    const Scalar k4 = drop_rate(p, t + h, y + h * k3);
    return y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
  };

  Scalar y = 0;
  if (p.infeed_loss_mw == 0) {
    // No event, so no response is triggered.
    tr.time_s = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::LinSpaced(steps + 1, 0, dt * steps);
    tr.drop_hz.setZero();
    tr.response_mw.setZero();
    return tr;
  }
  for (Eigen::Index k = 0; k <= steps; ++k) {
    const Scalar t = dt * Scalar(k);
    tr.time_s(k) = t;
    tr.drop_hz(k) = y;
    tr.response_mw(k) = response_at(p, t);
    if (k == steps) break;
    const Scalar t_next = dt * Scalar(k + 1);
    Scalar t_cur = t;
    for (const Scalar kink : kinks) {
      if (kink > t_cur + dt * Scalar(1e-9) && kink < t_next - dt * Scalar(1e-9)) {
        y = rk4(t_cur, y, kink - t_cur);
        t_cur = kink;
      }
    }
    y = rk4(t_cur, y, t_next - t_cur);
  }

  Eigen::Index arg = 0;
  tr.nadir_hz = tr.drop_hz.maxCoeff(&arg);
  tr.nadir_time_s = tr.time_s(arg);
  if (arg > 0 && arg < steps) {
    // Vertex of the parabola through the three samples around the maximum.
    const Scalar a = tr.drop_hz(arg - 1), b = tr.drop_hz(arg), c = tr.drop_hz(arg + 1);
    const Scalar curvature = a - 2 * b + c;
    if (curvature < 0) {
      const Scalar shift = (a - c) / (2 * curvature);
      tr.nadir_hz = b - (a - c) * shift / 4;
      tr.nadir_time_s += shift * dt;
    }
  }
  const auto tail = std::min<Eigen::Index>(steps + 1, static_cast<Eigen::Index>(round(Scalar(10) / dt)) + 1);
  tr.qss_hz = tr.drop_hz.tail(tail).mean();
  const Scalar held = p.pfr_mw * std::min(p.t_sfr_s / p.t_pfr_s, Scalar(1));
  tr.sfr_below_pfr = p.sfr_mw < held && t_end > p.t_sfr_s;
  return tr;
}

struct ComplianceReport {
  bool pass = false;
  bool nadir_ok = false;
  bool qss_ok = false;
  double nadir_hz = 0.0;
  double qss_hz = 0.0;
  double nadir_margin_hz = 0.0;  // limit - observed
  double qss_margin_hz = 0.0;
  bool sfr_below_pfr = false;
  std::string message;
};

/// Closed tolerance of 1e-3 Hz on both limits.
ComplianceReport check_compliance(const FrequencyTrace& trace,
                                  double delta_f_max_hz, double delta_f_ss_hz);

/// time_s,delta_f_hz,response_mw with delta_f_hz = f_o - f.
void write_trace_csv(const std::filesystem::path& path,
                     const FrequencyTrace& trace);

}  // namespace fruc

#endif  // FRUC_SWING_VERIFIER_HPP
