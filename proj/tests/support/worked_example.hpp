#pragma once

// The five-neighbor window used throughout the channel analysis fixtures:
// per-neighbor received sequence numbers, distances and advertised powers.

#include <array>
#include <vector>

#include "beaconsim/core_model.hpp"

namespace fixture {

struct NeighborSpec {
  beaconsim::VehicleId id;
  std::vector<beaconsim::SeqNo> seqs;
  double distance_m;
  double speed_kmh;
  double pop_best_dbm;
  double pow_u_dbm;
};

inline const std::array<NeighborSpec, 5>& neighbors() {
  static const std::array<NeighborSpec, 5> table = {{
      {1, {15, 16, 17, 18, 20, 21, 23, 24}, 13.0, 60.0, 28.0, 25.0},
      {2, {71, 72, 75, 78, 79, 80}, 18.0, 60.0, 29.0, 28.0},
      {3, {89, 90, 96, 97}, 23.0, 60.0, 28.0, 29.0},
      {4, {22, 23, 24, 25, 26, 27, 29, 30}, 18.0, 60.0, 27.0, 28.0},
      {5, {61, 62, 63, 67, 69, 70}, 15.0, 60.0, 26.0, 28.0},
  }};
  return table;
}

inline constexpr beaconsim::RoadGeometry kRoad{2000.0, 3.5};

/// Receiver at x=1000 lane 0, neighbors placed on the same lane at the listed
/// distances (alternating ahead and behind).
inline beaconsim::VehicleState build_receiver() {
  beaconsim::VehicleState x;
  x.id = 0;
  x.position = {1000.0, 0};
  int sign = 1;
  for (const auto& n : neighbors()) {
    for (auto seq : n.seqs) {
      beaconsim::Beacon b;
      b.seq = seq;
      b.sender_id = n.id;
      b.position = {1000.0 + sign * n.distance_m, 0};
      b.speed_kmh = n.speed_kmh;
      b.pop_best_dbm = n.pop_best_dbm;
      b.pow_u_dbm = n.pow_u_dbm;
      beaconsim::record_beacon(x, b, beaconsim::SimTime{900'000});
    }
    sign = -sign;
  }
  return x;
}

}  // namespace fixture
