#include "beaconsim/dfpav.hpp"

#include <algorithm>

#include "beaconsim/core_model.hpp"
#include "beaconsim/errors.hpp"

namespace beaconsim {

void DfpavParams::validate() const {
  if (mbl_bps <= 0.0) throw ConfigError("dfpav.mbl_bps must be positive");
  if (cs_max_m <= 0.0) throw ConfigError("dfpav.cs_max_m must be positive");
  if (epsilon_dbm < 0.0) throw ConfigError("dfpav.epsilon must be non-negative");
  if (step_dbm <= 0.0) throw ConfigError("dfpav.step_dbm must be positive");
  if (p_start_dbm < kRegMinDbm || p_start_dbm > kRegMaxDbm) {
    throw ConfigError("dfpav.p_start_dbm outside the regulatory range");
  }
}

double dfpav_power_adjust(const DfpavParams& params, double vehicle_density_per_km,
                          double load_vehicle_bps) {
  if (vehicle_density_per_km <= 0.0 || load_vehicle_bps <= 0.0) {
    throw DegenerateInputError("vehicle density and per-vehicle load must be positive");
  }
  return params.mbl_bps / (2.0 * params.cs_max_m * vehicle_density_per_km * load_vehicle_bps) -
         params.epsilon_dbm;
}

double beaconing_load(int neighbors_in_cs, int rate, int msg_bits) {
  return static_cast<double>(neighbors_in_cs + 1) * rate * msg_bits;
}

double water_filling_step(DfpavState& state, double observed_load_bps, const DfpavParams& params) {
  const double step = observed_load_bps < params.mbl_bps ? params.step_dbm : -params.step_dbm;
  state.current_power_dbm = clamp_power(state.current_power_dbm + step);
  return state.current_power_dbm;
}

double dfpav_select_power(DfpavState& state, double observed_load_bps,
                          std::span<const double> neighbor_powers_dbm, const DfpavParams& params) {
  double power = water_filling_step(state, observed_load_bps, params);
  if (!neighbor_powers_dbm.empty()) {
    state.neighbor_max_power_dbm =
        *std::max_element(neighbor_powers_dbm.begin(), neighbor_powers_dbm.end());
    if (observed_load_bps < params.mbl_bps) {
      power = std::max(power, state.neighbor_max_power_dbm + params.step_dbm);
    }
  }
  state.current_power_dbm = clamp_power(power);
  return state.current_power_dbm;
}

}  // namespace beaconsim
