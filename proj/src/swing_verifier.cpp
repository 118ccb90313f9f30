#include "fruc/swing_verifier.hpp"

#include <fstream>
#include <sstream>

namespace fruc {

namespace {
constexpr double kLimitTolerance = 1e-3;
}

ComplianceReport check_compliance(const FrequencyTrace& trace,
                                  double delta_f_max_hz, double delta_f_ss_hz) {
  if (trace.time_s.size() == 0 || trace.time_s(trace.time_s.size() - 1) < 60.0 - 1e-9)
    throw std::invalid_argument("compliance check needs a trace of at least 60 s");
  ComplianceReport r;
  r.nadir_hz = trace.nadir_hz;
  r.qss_hz = trace.qss_hz;
  r.nadir_margin_hz = delta_f_max_hz - trace.nadir_hz;
  r.qss_margin_hz = delta_f_ss_hz - trace.qss_hz;
  r.nadir_ok = trace.nadir_hz <= delta_f_max_hz + kLimitTolerance;
  r.qss_ok = trace.qss_hz <= delta_f_ss_hz + kLimitTolerance;
  r.pass = r.nadir_ok && r.qss_ok;
  r.sfr_below_pfr = trace.sfr_below_pfr;

  std::ostringstream msg;
  msg.precision(4);
  msg << std::fixed;
  if (r.pass) {
    msg << "pass (nadir margin " << r.nadir_margin_hz << " Hz, qss margin "
        << r.qss_margin_hz << " Hz)";
  } else {
    msg << "fail:";
    if (!r.nadir_ok)
      msg << " nadir limit exceeded (" << trace.nadir_hz << " > " << delta_f_max_hz
          << " Hz)";
    if (!r.qss_ok)
      msg << " qss limit exceeded (" << trace.qss_hz << " > " << delta_f_ss_hz
          << " Hz)";
  }
  if (r.sfr_below_pfr) msg << "; SFR below held PFR";
  r.message = msg.str();
  return r;
}

void write_trace_csv(const std::filesystem::path& path,
                     const FrequencyTrace& trace) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.precision(10);
  out << "time_s,delta_f_hz,response_mw\n";
  for (Eigen::Index k = 0; k < trace.time_s.size(); ++k)
    out << trace.time_s(k) << ',' << trace.drop_hz(k) << ',' << trace.response_mw(k)
        << '\n';
}

}  // namespace fruc
