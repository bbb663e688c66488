#pragma once

#include <random>
#include <span>
#include <vector>

#include "beaconsim/core_model.hpp"
#include "beaconsim/phy_channel.hpp"

namespace beaconsim {

/// 802.11p broadcast timing. Contention windows are slot counts.
struct MacConfig {
  int slot_us = 16;
  int sifs_us = 32;
  int difs_us = 64;
  int cw_min = 15;
  int cw_max = 1023;
  int plcp_us = 8;
  int symbol_us = 8;
  double data_rate_bps = 6'000'000.0;
  int msg_bytes = 512;
  double cs_threshold_dbm = -85.0;

  void validate() const;
  int msg_bits() const { return msg_bytes * 8; }
};

struct TransmissionEvent {
  VehicleId sender_id = 0;
  SimTime start{0};
  SimTime end{0};
  double tx_power_dbm = 0.0;
  Beacon beacon;
  /// Fading gain toward each receiver, indexed by receiver id. Missing entries mean 1.0.
  std::vector<double> fading;

  double gain_toward(VehicleId receiver) const {
    return receiver < fading.size() ? fading[receiver] : 1.0;
  }
  bool overlaps(const TransmissionEvent& other) const {
    return start < other.end && other.start < end;
  }
};

/// A receiver as seen by the reception sweep.
struct RadioNode {
  VehicleId id = 0;
  Position position;
};

struct Reception {
  VehicleId receiver_id = 0;
  VehicleId sender_id = 0;
  Beacon beacon;
  SimTime rx_time{0};

  friend bool operator==(const Reception&, const Reception&) = default;
};

/// PLCP header plus the payload rounded up to whole OFDM symbols.
SimTime frame_airtime(const MacConfig& cfg);

/// DIFS plus `slots` backoff slots.
SimTime backoff_for_slots(int slots, const MacConfig& cfg);

/// DIFS plus a uniform draw from {0..cw_min} slots. Broadcast never doubles CW.
SimTime backoff_delay(std::mt19937_64& rng, const MacConfig& cfg);

/// Defer until the medium is idle, then back off.
SimTime schedule_start(SimTime now, SimTime medium_busy_until, SimTime backoff);

/// Builds the frame for a beacon generated at `generated_at` going on air at `start`.
TransmissionEvent make_transmission(VehicleState& v, SimTime generated_at, SimTime start,
                                    const MacConfig& cfg);

TransmissionEvent schedule_transmission(VehicleState& v, SimTime now, SimTime medium_busy_until,
                                        std::mt19937_64& rng, const MacConfig& cfg);

/// Whether a listener at `at` perceives `e` above the carrier-sense threshold
/// (path loss only, no fading).
bool senses(const TransmissionEvent& e, const Position& at, const PhyConfig& phy,
            const MacConfig& mac, const RoadGeometry& road);

/// Latest end among ongoing frames sensed at `at`; `now` if the medium is idle.
/// Frames starting exactly at `now` are not yet detectable.
SimTime medium_busy_until(std::span<const TransmissionEvent> ongoing, const Position& at,
                          SimTime now, const PhyConfig& phy, const MacConfig& mac,
                          const RoadGeometry& road);

/// Receptions of `frame` given every other frame overlapping it in time.
/// A receiver that is itself on air during the frame cannot decode it.
void resolve_frame(const TransmissionEvent& frame,
                   std::span<const TransmissionEvent* const> overlapping,
                   std::span<const RadioNode> receivers, const PhyConfig& phy,
                   const RoadGeometry& road, std::vector<Reception>& out);

/// Sweeps the event list and resolves every frame. Output is ordered by
/// (rx_time, sender_id, receiver_id).
std::vector<Reception> resolve_receptions(std::span<const TransmissionEvent> events,
                                          std::span<const RadioNode> receivers,
                                          const PhyConfig& phy, const RoadGeometry& road);

}  // namespace beaconsim
