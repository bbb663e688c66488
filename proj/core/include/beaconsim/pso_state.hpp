#pragma once

namespace beaconsim {

/// Coefficients of the single-particle power update.
struct PsoParams {
  double w_min = 0.1;
  double w_max = 0.5;
  double c1 = 2.0;
  double c2 = 2.0;
  double rand_min = 0.1;
  double rand_max = 1.0;
  double p_init_dbm = 25.0;

  void validate() const;
};

/// Optimizer memory owned by one vehicle.
struct PsoState {
  /// Previous epoch's locally best power; advertised as PopBest.
  double pbest_dbm = 25.0;
  /// Best neighbor-advertised PopBest for the current epoch.
  double gbest_dbm = 25.0;
  bool initialized = false;
};

}  // namespace beaconsim
