#pragma once

#include <span>
#include <vector>

#include "beaconsim/core_model.hpp"

namespace beaconsim {

/// Distances below this are clamped before dividing.
inline constexpr double kDistanceFloorM = 1.0;

/// One epoch's channel-status analysis for a single vehicle.
struct ChannelAnalysis {
  double cp = 0.0;
  std::vector<DistanceRow> rows;
  double overall_fault = 0.0;
  double mean_distance_m = 0.0;
  /// Success fraction in [0, 1]; the PSO fitness.
  double success = 0.0;
  double min_p_dbm = 0.0;
  double max_p_dbm = 0.0;
  double power_diff_db = 0.0;
  /// min_p + power_diff * success.
  double local_best_power_dbm = 0.0;
};

struct PowerSpread {
  double min_p_dbm;
  double max_p_dbm;
  double pd_db;
};

/// Fraction of expected beacons missing this window. Throws NoNeighborsError
/// when `n_neighbors` is zero.
double collision_probability(int total_beacons_received, int n_neighbors, int rate);

/// Beacons lost per meter: (100 - p) / d, with d clamped to kDistanceFloorM.
double fail_rate(double reception_percent, double distance_m);

std::vector<DistanceRow> build_distance_table(const VehicleState& v, int rate,
                                              const RoadGeometry& road);

PowerSpread power_difference(std::span<const double> abl_powers_dbm);

/// Mean per-neighbor fail rate.
double overall_fault(std::span<const DistanceRow> rows);

double mean_distance(std::span<const DistanceRow> rows);

/// (100 - mean_distance * F) / 100 clamped to [0, 1].
double success_fraction(std::span<const DistanceRow> rows, double f_overall);

double local_best_power(double min_p_dbm, double pd_db, double success);

/// Full pipeline over the vehicle's current window.
ChannelAnalysis analyze(const VehicleState& v, int rate, const RoadGeometry& road);

}  // namespace beaconsim
