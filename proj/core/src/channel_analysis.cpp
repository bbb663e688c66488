#include "beaconsim/channel_analysis.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "beaconsim/errors.hpp"
#include "beaconsim/mobility.hpp"

namespace beaconsim {

double collision_probability(int total_beacons_received, int n_neighbors, int rate) {
  if (n_neighbors <= 0) throw NoNeighborsError();
  if (rate <= 0) throw std::invalid_argument("beacon rate must be positive");
  const int expected = n_neighbors * rate;
  if (total_beacons_received < 0 || total_beacons_received > expected) {
    throw std::invalid_argument("received beacon count outside [0, neighbors * rate]");
  }
  return 1.0 - static_cast<double>(total_beacons_received) / static_cast<double>(expected);
}

double fail_rate(double reception_percent, double distance_m) {
  if (reception_percent < 0.0 || reception_percent > 100.0) {
    throw std::invalid_argument("reception percentage outside [0, 100]");
  }
  return (100.0 - reception_percent) / std::max(distance_m, kDistanceFloorM);
}

std::vector<DistanceRow> build_distance_table(const VehicleState& v, int rate,
                                              const RoadGeometry& road) {
  std::vector<DistanceRow> rows;
  rows.reserve(v.neighbors.size());
  for (const NeighborState* n : neighbors_by_distance(v, road)) {
    const auto heard = std::min<std::size_t>(n->sequence_list.size(), static_cast<std::size_t>(rate));
    DistanceRow row;
    row.id = n->id;
    row.reception_percent = 100.0 * static_cast<double>(heard) / static_cast<double>(rate);
    row.distance_m = std::max(distance(v.position, n->last_position, road), kDistanceFloorM);
    row.fail_rate = fail_rate(row.reception_percent, row.distance_m);
    rows.push_back(row);
  }
  return rows;
}

PowerSpread power_difference(std::span<const double> abl_powers_dbm) {
  if (abl_powers_dbm.empty()) throw NoNeighborsError();
  auto [lo, hi] = std::minmax_element(abl_powers_dbm.begin(), abl_powers_dbm.end());
  return {*lo, *hi, *hi - *lo};
}

double overall_fault(std::span<const DistanceRow> rows) {
  if (rows.empty()) throw NoNeighborsError();
  double sum = std::accumulate(rows.begin(), rows.end(), 0.0,
                               [](double acc, const DistanceRow& r) { return acc + r.fail_rate; });
  return sum / static_cast<double>(rows.size());
}

double mean_distance(std::span<const DistanceRow> rows) {
  if (rows.empty()) throw NoNeighborsError();
  double sum = std::accumulate(rows.begin(), rows.end(), 0.0,
                               [](double acc, const DistanceRow& r) { return acc + r.distance_m; });
  return sum / static_cast<double>(rows.size());
}

double success_fraction(std::span<const DistanceRow> rows, double f_overall) {
  if (f_overall < 0.0) throw std::invalid_argument("overall fault must be non-negative");
  const double raw = (100.0 - mean_distance(rows) * f_overall) / 100.0;
  return std::clamp(raw, 0.0, 1.0);
}

double local_best_power(double min_p_dbm, double pd_db, double success) {
  if (pd_db < 0.0) throw std::invalid_argument("power difference must be non-negative");
  if (success < 0.0 || success > 1.0) throw std::invalid_argument("success outside [0, 1]");
  return min_p_dbm + pd_db * success;
}

ChannelAnalysis analyze(const VehicleState& v, int rate, const RoadGeometry& road) {
  if (v.neighbors.empty()) throw NoNeighborsError();

  ChannelAnalysis a;
  int received = 0;
  std::vector<double> powers;
  powers.reserve(v.neighbors.size());
  for (const auto& [id, n] : v.neighbors) {
    received += static_cast<int>(std::min<std::size_t>(n.sequence_list.size(), static_cast<std::size_t>(rate)));
    powers.push_back(n.last_pow_u_dbm);
  }
  a.cp = collision_probability(received, static_cast<int>(v.neighbors.size()), rate);
  a.rows = build_distance_table(v, rate, road);
  a.overall_fault = overall_fault(a.rows);
  a.mean_distance_m = mean_distance(a.rows);
  a.success = success_fraction(a.rows, a.overall_fault);

  auto spread = power_difference(powers);
  a.min_p_dbm = spread.min_p_dbm;
  a.max_p_dbm = spread.max_p_dbm;
  a.power_diff_db = spread.pd_db;
  a.local_best_power_dbm = local_best_power(a.min_p_dbm, a.power_diff_db, a.success);
  return a;
}

}  // namespace beaconsim
