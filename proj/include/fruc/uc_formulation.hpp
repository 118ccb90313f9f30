#ifndef FRUC_UC_FORMULATION_HPP
#define FRUC_UC_FORMULATION_HPP

#include "fruc/mip.hpp"
#include "fruc/system_model.hpp"

#include <vector>

namespace fruc {

/// Variable ids of a unit-commitment model. Outer index is the period
/// (0-based), inner index the group or storage unit.
struct UcVariableIndex {
  using Grid = std::vector<std::vector<int>>;

  int periods = 0;
  int groups = 0;
  int stores = 0;
  bool has_fr = false;

  Grid p_gen, online, start_ups, shut_downs;
  Grid charge, discharge, energy;
  std::vector<int> curtailment, pfr_req, sfr_req;

  // Registered only when has_fr.
  Grid pfr_thermal, sfr_thermal, pfr_storage, sfr_storage;
  std::vector<int> inertia;

  /// Variables added per period by the frequency-response layer.
  int fr_variables_per_period() const {
    return has_fr ? 2 * groups + 2 * stores + 1 : 0;
  }
  int expected_variable_count() const {
    return periods * (4 * groups + 3 * stores + 3) +
           periods * fr_variables_per_period();
  }
};

/// Registers every decision variable with its box bounds. MSG-free bounds
/// only; the coupled limits come from the add_* builders.
UcVariableIndex register_uc_variables(MipModel& model, const Scenario& scenario,
                                      bool include_fr);

void add_objective(MipModel& model, const UcVariableIndex& idx,
                   const Scenario& scenario);
void add_power_balance(MipModel& model, const UcVariableIndex& idx,
                       const Scenario& scenario);
void add_commitment_constraints(MipModel& model, const UcVariableIndex& idx,
                                const Scenario& scenario);
void add_ramp_constraints(MipModel& model, const UcVariableIndex& idx,
                          const Scenario& scenario);
void add_storage_constraints(MipModel& model, const UcVariableIndex& idx,
                             const Scenario& scenario);

/// Start-up, no-load and marginal cost of a dispatch, recomputed from the
/// variable values without the solver's objective.
struct CostBreakdown {
  double startup = 0.0;
  double no_load = 0.0;
  double marginal = 0.0;
  double total() const { return startup + no_load + marginal; }
};
CostBreakdown recompute_cost(const UcVariableIndex& idx,
                             const Scenario& scenario,
                             const Eigen::VectorXd& x);

}  // namespace fruc

#endif  // FRUC_UC_FORMULATION_HPP
