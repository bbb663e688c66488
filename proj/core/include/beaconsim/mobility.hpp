#pragma once

#include <random>
#include <span>
#include <vector>

#include "beaconsim/core_model.hpp"

namespace beaconsim {

struct MobilityConfig {
  int n_vehicles = 200;
  double road_length_m = 2000.0;
  int lanes = 3;
  double lane_width_m = 3.5;
  double v_min_kmh = 20.0;
  double v_max_kmh = 120.0;

  void validate() const;
  RoadGeometry geometry() const { return {road_length_m, lane_width_m}; }
};

/// Uniform placement along the ring, round-robin lanes, uniform speeds,
/// everyone heading East. Vehicle ids are 0..n-1.
std::vector<VehicleState> init_vehicles(const MobilityConfig& cfg, std::mt19937_64& rng);

/// Constant-speed motion with ring wrap-around.
void advance(std::span<VehicleState> vehicles, double dt_s, double road_length_m);

double kmh_to_mps(double kmh);

/// Shortest along-ring separation combined with the lateral lane offset.
double distance(const Position& a, const Position& b, const RoadGeometry& road);
double distance(const VehicleState& a, const VehicleState& b, const RoadGeometry& road);

}  // namespace beaconsim
