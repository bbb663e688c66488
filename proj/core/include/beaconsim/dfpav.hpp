#pragma once

#include <span>

namespace beaconsim {

struct DfpavParams {
  double mbl_bps = 2.5e6;
  double cs_max_m = 1000.0;
  double epsilon_dbm = 0.1;
  double step_dbm = 0.5;
  double p_start_dbm = 25.0;

  void validate() const;
};

struct DfpavState {
  double current_power_dbm = 25.0;
  double neighbor_max_power_dbm = 0.0;
};

/// Power adjustment value of the fair-power scheme. Exposed as a diagnostic;
/// its units do not compose into dBm.
double dfpav_power_adjust(const DfpavParams& params, double vehicle_density_per_km,
                          double load_vehicle_bps);

/// Offered beacon load observable at one vehicle, its own traffic included.
double beaconing_load(int neighbors_in_cs, int rate, int msg_bits);

/// One synchronized ramp step: up while below MBL, down otherwise.
double water_filling_step(DfpavState& state, double observed_load_bps, const DfpavParams& params);

/// Ramp, then jump above the strongest neighbor while the load constraint holds.
double dfpav_select_power(DfpavState& state, double observed_load_bps,
                          std::span<const double> neighbor_powers_dbm, const DfpavParams& params);

}  // namespace beaconsim
