#include "beaconsim/mac_broadcast.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "beaconsim/errors.hpp"
#include "beaconsim/mobility.hpp"

namespace beaconsim {

void MacConfig::validate() const {
  if (slot_us <= 0 || sifs_us <= 0 || difs_us <= 0 || plcp_us <= 0 || symbol_us <= 0) {
    throw ConfigError("mac durations must be positive");
  }
  if (cw_min < 0 || cw_min > cw_max) throw ConfigError("mac needs 0 <= cw_min <= cw_max");
  if (data_rate_bps <= 0.0) throw ConfigError("mac.data_rate_bps must be positive");
  if (msg_bytes <= 0) throw ConfigError("mac.msg_bytes must be positive");
}

SimTime frame_airtime(const MacConfig& cfg) {
  const double bits_per_symbol = cfg.data_rate_bps * cfg.symbol_us * 1e-6;
  const auto symbols = static_cast<std::int64_t>(std::ceil(cfg.msg_bits() / bits_per_symbol));
  return SimTime{cfg.plcp_us + symbols * cfg.symbol_us};
}

SimTime backoff_for_slots(int slots, const MacConfig& cfg) {
  return SimTime{cfg.difs_us + static_cast<std::int64_t>(slots) * cfg.slot_us};
}

SimTime backoff_delay(std::mt19937_64& rng, const MacConfig& cfg) {
  std::uniform_int_distribution<int> slots(0, cfg.cw_min);
  return backoff_for_slots(slots(rng), cfg);
}

SimTime schedule_start(SimTime now, SimTime medium_busy_until, SimTime backoff) {
  return std::max(now, medium_busy_until) + backoff;
}

TransmissionEvent make_transmission(VehicleState& v, SimTime generated_at, SimTime start,
                                    const MacConfig& cfg) {
  TransmissionEvent e;
  e.sender_id = v.id;
  e.start = start;
  e.end = start + frame_airtime(cfg);
  e.tx_power_dbm = v.tx_power_dbm;
  e.beacon = make_beacon(v, generated_at);
  return e;
}

TransmissionEvent schedule_transmission(VehicleState& v, SimTime now, SimTime medium_busy_until,
                                        std::mt19937_64& rng, const MacConfig& cfg) {
  const SimTime start = schedule_start(now, medium_busy_until, backoff_delay(rng, cfg));
  return make_transmission(v, now, start, cfg);
}

bool senses(const TransmissionEvent& e, const Position& at, const PhyConfig& phy,
            const MacConfig& mac, const RoadGeometry& road) {
  const double d = distance(e.beacon.position, at, road);
  return received_power_dbm(e.tx_power_dbm, d, 1.0, phy) >= mac.cs_threshold_dbm;
}

SimTime medium_busy_until(std::span<const TransmissionEvent> ongoing, const Position& at,
                          SimTime now, const PhyConfig& phy, const MacConfig& mac,
                          const RoadGeometry& road) {
  SimTime busy = now;
  for (const auto& e : ongoing) {
    if (e.start < now && e.end > now && e.end > busy && senses(e, at, phy, mac, road)) {
      busy = e.end;
    }
  }
  return busy;
}

void resolve_frame(const TransmissionEvent& frame,
                   std::span<const TransmissionEvent* const> overlapping,
                   std::span<const RadioNode> receivers, const PhyConfig& phy,
                   const RoadGeometry& road, std::vector<Reception>& out) {
  std::vector<double> interferers;
  interferers.reserve(overlapping.size());
  const std::span<const double> none;

  for (const RadioNode& rx : receivers) {
    if (rx.id == frame.sender_id) continue;
    const bool on_air = std::any_of(overlapping.begin(), overlapping.end(),
                                    [&](const TransmissionEvent* o) { return o->sender_id == rx.id; });
    if (on_air) continue;

    const double signal = received_power_dbm(
        frame.tx_power_dbm, distance(frame.beacon.position, rx.position, road),
        frame.gain_toward(rx.id), phy);
    // interference can only lower SINR
    if (!is_decodable(signal, none, phy)) continue;

    interferers.clear();
    for (const TransmissionEvent* o : overlapping) {
      interferers.push_back(received_power_dbm(
          o->tx_power_dbm, distance(o->beacon.position, rx.position, road), o->gain_toward(rx.id), phy));
    }
    if (is_decodable(signal, interferers, phy)) {
      out.push_back(Reception{rx.id, frame.sender_id, frame.beacon, frame.end});
    }
  }
}

std::vector<Reception> resolve_receptions(std::span<const TransmissionEvent> events,
                                          std::span<const RadioNode> receivers,
                                          const PhyConfig& phy, const RoadGeometry& road) {
  std::vector<std::size_t> order(events.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (events[a].start != events[b].start) return events[a].start < events[b].start;
    return a < b;
  });

  std::vector<Reception> out;
  std::vector<std::size_t> active;
  std::vector<const TransmissionEvent*> overlapping;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const TransmissionEvent& frame = events[order[k]];
    std::erase_if(active, [&](std::size_t j) { return events[j].end <= frame.start; });

    overlapping.clear();
    for (std::size_t j : active) overlapping.push_back(&events[j]);
    for (std::size_t m = k + 1; m < order.size() && events[order[m]].start < frame.end; ++m) {
      if (events[order[m]].end > frame.start) overlapping.push_back(&events[order[m]]);
    }
    resolve_frame(frame, overlapping, receivers, phy, road, out);
    active.push_back(order[k]);
  }

  std::stable_sort(out.begin(), out.end(), [](const Reception& a, const Reception& b) {
    if (a.rx_time != b.rx_time) return a.rx_time < b.rx_time;
    if (a.sender_id != b.sender_id) return a.sender_id < b.sender_id;
    return a.receiver_id < b.receiver_id;
  });
  return out;
}

}  // namespace beaconsim
