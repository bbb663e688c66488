#pragma once

#include <array>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "beaconsim/pso_state.hpp"

namespace beaconsim {

/// Simulation clock. All event times are integral microseconds.
using SimTime = std::chrono::microseconds;

using VehicleId = std::uint32_t;
using SeqNo = std::uint64_t;

/// Regulatory transmit power clamp applied to every computed power.
inline constexpr double kRegMinDbm = 10.0;
inline constexpr double kRegMaxDbm = 33.0;
/// Common initial power for the adaptive protocols.
inline constexpr double kInitialPowerDbm = 25.0;

inline constexpr int kBeaconsPerSecond = 10;
inline constexpr std::uint32_t kBeaconIntervalMs = 100;
inline constexpr std::size_t kBeaconWireBytes = 512;

inline constexpr SimTime kDefaultStaleTimeout = std::chrono::seconds{2};

double clamp_power(double dbm);

enum class Direction : std::uint8_t { East = 0, West = 1 };

/// Along-road coordinate plus lane index.
struct Position {
  double x_m = 0.0;
  int lane = 0;

  friend bool operator==(const Position&, const Position&) = default;
};

/// Ring road geometry used for every distance computation.
struct RoadGeometry {
  double length_m = 2000.0;
  double lane_width_m = 3.5;
};

/// Periodic safety beacon with the piggybacked power fields.
struct Beacon {
  SeqNo seq = 0;
  std::uint32_t interval_ms = kBeaconIntervalMs;
  SimTime timestamp{0};
  VehicleId sender_id = 0;
  Position position;
  double speed_kmh = 0.0;
  Direction direction = Direction::East;
  double pop_best_dbm = kInitialPowerDbm;
  double pow_u_dbm = kInitialPowerDbm;

  friend bool operator==(const Beacon&, const Beacon&) = default;
};

/// Per-neighbor row of the Sequence List and Active Beacon List.
struct NeighborState {
  VehicleId id = 0;
  Position last_position;
  double last_speed_kmh = 0.0;
  Direction last_direction = Direction::East;
  /// Sequence numbers received in the current one-second window, sorted.
  std::vector<SeqNo> sequence_list;
  double last_pop_best_dbm = kInitialPowerDbm;
  double last_pow_u_dbm = kInitialPowerDbm;
  SimTime last_rx_time{0};
};

/// Per-neighbor reception percentage, distance and per-meter fail rate.
struct DistanceRow {
  VehicleId id = 0;
  double reception_percent = 0.0;
  double distance_m = 0.0;
  double fail_rate = 0.0;
};

struct VehicleState {
  VehicleId id = 0;
  Position position;
  double speed_kmh = 0.0;
  Direction direction = Direction::East;
  double tx_power_dbm = kInitialPowerDbm;
  PsoState pso;
  std::map<VehicleId, NeighborState> neighbors;
  SimTime next_beacon_time{0};
  /// Last sequence number handed out; the first beacon carries 1.
  SeqNo last_seq = 0;
};

/// Builds the next beacon for `v` stamped with `now` and advances its sequence counter.
Beacon make_beacon(VehicleState& v, SimTime now);

/// Inserts a received beacon into the neighbor table. Duplicate sequence
/// numbers within the window are recorded once, and a window never holds
/// more than kBeaconsPerSecond entries per neighbor.
void record_beacon(VehicleState& v, const Beacon& b, SimTime rx_time);

/// Epoch-boundary housekeeping: clears every sequence list and evicts
/// neighbors silent for longer than `stale_timeout`.
void reset_window(VehicleState& v, SimTime now, SimTime stale_timeout = kDefaultStaleTimeout);

/// Neighbors ordered by distance to `v` (closest first, ties broken by id).
std::vector<const NeighborState*> neighbors_by_distance(const VehicleState& v,
                                                        const RoadGeometry& road);

using BeaconFrame = std::array<std::byte, kBeaconWireBytes>;

/// Fixed-size little-endian wire image. Unused trailing bytes are zero.
BeaconFrame encode_beacon(const Beacon& b);
Beacon decode_beacon(std::span<const std::byte> frame);

/// One reception record of the optional beacon trace:
/// rx_time_us,receiver_id,sender_id,seq,pos_x,lane,speed_kmh,pop_best_dbm,pow_u_dbm
struct TraceRecord {
  SimTime rx_time{0};
  VehicleId receiver_id = 0;
  VehicleId sender_id = 0;
  SeqNo seq = 0;
  Position position;
  double speed_kmh = 0.0;
  double pop_best_dbm = 0.0;
  double pow_u_dbm = 0.0;

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

inline constexpr std::string_view kTraceHeader =
    "rx_time_us,receiver_id,sender_id,seq,pos_x,lane,speed_kmh,pop_best_dbm,pow_u_dbm";

TraceRecord make_trace_record(SimTime rx_time, VehicleId receiver, const Beacon& b);
std::string format_trace_line(const TraceRecord& r);
TraceRecord parse_trace_line(std::string_view line);

}  // namespace beaconsim
