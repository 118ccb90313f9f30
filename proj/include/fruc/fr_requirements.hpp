#ifndef FRUC_FR_REQUIREMENTS_HPP
#define FRUC_FR_REQUIREMENTS_HPP

#include "fruc/mip.hpp"
#include "fruc/system_model.hpp"
#include "fruc/uc_formulation.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace fruc {

/// Nadir constant k such that the frequency nadir stays within
/// delta_f_max iff H * P_req >= k:
///
///   k = f_o * T_p * (P_loss - E)^2 / (4 * delta_f_max)
///
/// Obtained from the undamped swing equation with EFR delivered in full and
/// PFR ramping linearly over T_p; the nadir falls at
/// t* = (P_loss - E) * T_p / P_req. Returns 0 when E covers the loss.
double nadir_constant(const FrequencyParams& freq, double efr_mw);
inline double nadir_constant(const FrequencyParams& freq) {
  return nadir_constant(freq, freq.efr_mw);
}

/// Secant envelope of P = k / H over [grid.front(), grid.back()].
///
/// Segment i is the chord through (H_i, k/H_i) and (H_{i+1}, k/H_{i+1}).
/// Because k/H is convex, every chord lies above the curve between its own
/// grid points and below it outside them, so the max over all chords is
/// exact at the grid points and over-approximates k/H in between.
template <typename Scalar>
struct ChordEnvelope {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Scalar k = 0;
  Vector grid;        // H_0 < ... < H_N
  Vector slopes;      // per segment, MW per MVA s
  Vector intercepts;  // per segment, MW

  int size() const { return static_cast<int>(slopes.size()); }

  Scalar envelope(Scalar h) const {
    return (intercepts + slopes * h).maxCoeff();
  }
  Scalar exact(Scalar h) const { return k / h; }
};

using ChordSegmentSet = ChordEnvelope<double>;

/// Grid points uniform in 1/H. k == 0 yields one flat zero segment.
ChordSegmentSet build_chord_segments(double k, double h_min, double h_max,
                                     int n_segments);

struct InertiaRange {
  double min = 0.0;  // all non-must-run plant offline, lowest demand
  double max = 0.0;  // whole fleet online, highest demand
};
InertiaRange inertia_range(const Scenario& scenario);

/// Largest PFR any hour could possibly hold; used to cap the chord range.
double max_pfr_capability(const Scenario& scenario);

/// Chord set covering every inertia level at which the nadir limit can be met.
ChordSegmentSet default_chord_segments(const Scenario& scenario, int n_segments);

/// H_t = sum_g C_g h_g u_{t,g} + d_t h_l.
void add_inertia_expression(MipModel& model, const UcVariableIndex& idx,
                            const Scenario& scenario);

/// P_req_t >= alpha_i + beta_i H_t for every segment, H_t >= H_0, plus the
/// floor P_req_t + E >= P_loss - D d_ref delta_f_max.
void add_nadir_constraints(MipModel& model, const UcVariableIndex& idx,
                           const Scenario& scenario,
                           const ChordSegmentSet& segments);

/// S_req_t >= P_loss - D d_ref delta_f_ss (- E when qss_includes_efr).
void add_qss_constraint(MipModel& model, const UcVariableIndex& idx,
                        const Scenario& scenario);

void add_provision_limits(MipModel& model, const UcVariableIndex& idx,
                          const Scenario& scenario);
void add_adequacy_constraints(MipModel& model, const UcVariableIndex& idx,
                              const Scenario& scenario);

double pfr_floor(const Scenario& scenario, int t);
double sfr_floor(const Scenario& scenario, int t);

enum class PfrBinding { NadirChord, AdequacyFloor };

struct HourlyRequirement {
  double inertia = 0.0;
  double pfr = 0.0;
  double sfr = 0.0;
  PfrBinding binding = PfrBinding::AdequacyFloor;
  int chord_segment = -1;  // active segment when binding == NadirChord
};

/// Smallest requirements the constraints allow at the given inertia.
HourlyRequirement tight_requirement(const Scenario& scenario,
                                    const ChordSegmentSet& segments, int t,
                                    double inertia);

std::string to_string(PfrBinding binding);

}  // namespace fruc

#endif  // FRUC_FR_REQUIREMENTS_HPP
