#include "beaconsim/mobility.hpp"

#include <cmath>

#include "beaconsim/errors.hpp"

namespace beaconsim {

void MobilityConfig::validate() const {
  if (n_vehicles <= 0) throw ConfigError("mobility.n_vehicles must be positive");
  if (road_length_m <= 0.0) throw ConfigError("mobility.road_length_m must be positive");
  if (lanes < 1) throw ConfigError("mobility.lanes must be at least 1");
  if (lane_width_m < 0.0) throw ConfigError("mobility.lane_width_m must be non-negative");
  if (v_min_kmh < 0.0 || v_min_kmh > v_max_kmh) {
    throw ConfigError("mobility speeds need 0 <= v_min_kmh <= v_max_kmh");
  }
}

std::vector<VehicleState> init_vehicles(const MobilityConfig& cfg, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> place(0.0, cfg.road_length_m);
  std::uniform_real_distribution<double> speed(cfg.v_min_kmh, cfg.v_max_kmh);

  std::vector<VehicleState> vehicles(static_cast<std::size_t>(cfg.n_vehicles));
  for (std::size_t i = 0; i < vehicles.size(); ++i) {
    auto& v = vehicles[i];
    v.id = static_cast<VehicleId>(i);
    v.position.x_m = place(rng);
    // uniform_real_distribution may round up to the upper bound
    if (v.position.x_m >= cfg.road_length_m) v.position.x_m = 0.0;
    v.position.lane = static_cast<int>(i % static_cast<std::size_t>(cfg.lanes));
    v.speed_kmh = cfg.v_min_kmh == cfg.v_max_kmh ? cfg.v_min_kmh : speed(rng);
    v.direction = Direction::East;
  }
  return vehicles;
}

double kmh_to_mps(double kmh) { return kmh / 3.6; }

void advance(std::span<VehicleState> vehicles, double dt_s, double road_length_m) {
  for (auto& v : vehicles) {
    double x = std::fmod(v.position.x_m + kmh_to_mps(v.speed_kmh) * dt_s, road_length_m);
    if (x < 0.0) x += road_length_m;
    if (x >= road_length_m) x = 0.0;
    v.position.x_m = x;
  }
}

double distance(const Position& a, const Position& b, const RoadGeometry& road) {
  double dx = std::abs(a.x_m - b.x_m);
  dx = std::min(dx, road.length_m - dx);
  double dy = static_cast<double>(a.lane - b.lane) * road.lane_width_m;
  return std::hypot(dx, dy);
}

double distance(const VehicleState& a, const VehicleState& b, const RoadGeometry& road) {
  return distance(a.position, b.position, road);
}

}  // namespace beaconsim
