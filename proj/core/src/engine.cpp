#include "beaconsim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <queue>
#include <random>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "beaconsim/dfpav.hpp"
#include "beaconsim/errors.hpp"
#include "beaconsim/mac_broadcast.hpp"
#include "beaconsim/mobility.hpp"
#include "beaconsim/phy_channel.hpp"
#include "beaconsim/pso_power.hpp"

namespace beaconsim {

std::string format_analysis_line(const AnalysisRecord& r) {
  const auto& a = r.analysis;
  return fmt::format("{},{},{:.4f},{:.4f},{:.4f},{:.4f},{:.4f},{:.4f},{:.4f}", r.epoch, r.vehicle_id, a.cp,
                     a.overall_fault, a.success, a.min_p_dbm, a.max_p_dbm, a.power_diff_db,
                     a.local_best_power_dbm);
}

namespace {

enum class StreamTag : std::uint32_t { Placement = 1, Mac = 2, Pso = 3, Fading = 4 };

std::mt19937_64 make_stream(std::uint64_t seed, StreamTag tag, std::uint32_t index = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(tag), index};
  return std::mt19937_64(seq);
}

// Same-time ordering: frames finish before the epoch pass, positions move
// before new beacons, and channel access comes last.
enum class EventKind : int { TxEnd = 0, Epoch = 1, Mobility = 2, BeaconGen = 3, TxAttempt = 4 };

struct Event {
  SimTime time;
  EventKind kind;
  std::uint64_t order;
  std::uint64_t subject;

  bool operator>(const Event& o) const {
    if (time != o.time) return time > o.time;
    if (kind != o.kind) return kind > o.kind;
    return order > o.order;
  }
};

SimTime seconds(double s) { return SimTime{static_cast<std::int64_t>(std::llround(s * 1e6))}; }

}  // namespace

struct Simulator::Impl {
  SimConfig cfg;
  RunObservers observers;
  RoadGeometry road;
  SimTime airtime{0};
  SimTime interval{std::chrono::milliseconds{kBeaconIntervalMs}};
  SimTime end_time{0};

  std::vector<VehicleState> vehicles;
  std::vector<DfpavState> dfpav;
  std::vector<RadioNode> radios;
  std::vector<std::mt19937_64> mac_rng;
  std::vector<std::mt19937_64> pso_rng;
  std::mt19937_64 fading_rng;

  struct Pending {
    bool queued = false;
    SimTime generated_at{0};
  };
  std::vector<Pending> pending;

  // Frames that may still overlap a frame not yet resolved, ordered by start.
  std::vector<TransmissionEvent> recent;
  std::vector<std::uint64_t> recent_ids;
  std::uint64_t next_tx_id = 0;

  std::priority_queue<Event, std::vector<Event>, std::greater<>> queue;
  std::uint64_t next_order = 0;

  struct EpochStats {
    std::uint64_t sent = 0;
    std::uint64_t received = 0;
    std::uint64_t delivered = 0;
    double delay_sum_us = 0.0;
    double power_sum_dbm = 0.0;
  } stats;

  std::vector<Reception> scratch;
  std::vector<const TransmissionEvent*> overlapping;
  std::vector<MetricsRow> rows;
  bool finished = false;

  Impl(SimConfig c, RunObservers o) : cfg(std::move(c)), observers(std::move(o)) {
    cfg.validate();
    road = cfg.mobility.geometry();
    airtime = frame_airtime(cfg.mac);
    end_time = std::chrono::seconds{cfg.duration_s};

    auto placement = make_stream(cfg.seed, StreamTag::Placement);
    vehicles = init_vehicles(cfg.mobility, placement);
    fading_rng = make_stream(cfg.seed, StreamTag::Fading);

    const auto n = vehicles.size();
    dfpav.assign(n, DfpavState{cfg.dfpav.p_start_dbm, 0.0});
    pending.assign(n, Pending{});
    radios.resize(n);
    mac_rng.reserve(n);
    pso_rng.reserve(n);
    for (auto& v : vehicles) {
      mac_rng.push_back(make_stream(cfg.seed, StreamTag::Mac, v.id));
      pso_rng.push_back(make_stream(cfg.seed, StreamTag::Pso, v.id));
      v.pso.pbest_dbm = cfg.pso.p_init_dbm;
      v.pso.gbest_dbm = cfg.pso.p_init_dbm;
      v.tx_power_dbm = initial_power();
    }
    sync_radios();
  }

  double initial_power() const {
    switch (cfg.protocol) {
      case Protocol::Pbpc: return cfg.pso.p_init_dbm;
      case Protocol::Dfpav: return cfg.dfpav.p_start_dbm;
      case Protocol::None: return cfg.fixed_power_dbm;
    }
    return kInitialPowerDbm;
  }

  void sync_radios() {
    for (const auto& v : vehicles) radios[v.id] = RadioNode{v.id, v.position};
  }

  void push(SimTime t, EventKind kind, std::uint64_t subject = 0) {
    queue.push(Event{t, kind, next_order++, subject});
  }

  std::vector<MetricsRow> run() {
    if (finished) return rows;
    for (auto& v : vehicles) {
      std::uniform_int_distribution<std::int64_t> phase(0, interval.count() - 1);
      v.next_beacon_time = SimTime{phase(mac_rng[v.id])};
      push(v.next_beacon_time, EventKind::BeaconGen, v.id);
    }
    const SimTime step = seconds(cfg.mobility_step_s);
    if (step < end_time) push(step, EventKind::Mobility);
    const SimTime epoch = std::chrono::seconds{cfg.epoch_s};
    for (SimTime t = epoch; t <= end_time; t += epoch) push(t, EventKind::Epoch);
    begin_epoch();

    while (!queue.empty()) {
      const Event e = queue.top();
      queue.pop();
      if (e.time > end_time) break;
      switch (e.kind) {
        case EventKind::TxEnd: on_tx_end(e.time, e.subject); break;
        case EventKind::Epoch: on_epoch(e.time); break;
        case EventKind::Mobility: on_mobility(e.time, step); break;
        case EventKind::BeaconGen: on_beacon_gen(e.time, static_cast<VehicleId>(e.subject)); break;
        case EventKind::TxAttempt: on_tx_attempt(e.time, static_cast<VehicleId>(e.subject)); break;
      }
      if (e.kind == EventKind::Epoch && e.time == end_time) break;
    }
    finished = true;
    return rows;
  }

  SimTime busy_until(VehicleId id, SimTime now) const {
    return medium_busy_until(recent, vehicles[id].position, now, cfg.phy, cfg.mac, road);
  }

  void on_beacon_gen(SimTime now, VehicleId id) {
    auto& p = pending[id];
    if (p.queued) {
      // the stale beacon is replaced; its access attempt stays scheduled
      p.generated_at = now;
    } else {
      p.queued = true;
      p.generated_at = now;
      const SimTime start = schedule_start(now, busy_until(id, now), backoff_delay(mac_rng[id], cfg.mac));
      push(start, EventKind::TxAttempt, id);
    }
    vehicles[id].next_beacon_time = now + interval;
    push(vehicles[id].next_beacon_time, EventKind::BeaconGen, id);
  }

  void on_tx_attempt(SimTime now, VehicleId id) {
    auto& p = pending[id];
    if (!p.queued) return;
    const SimTime busy = busy_until(id, now);
    if (busy > now) {
      push(schedule_start(now, busy, backoff_delay(mac_rng[id], cfg.mac)), EventKind::TxAttempt, id);
      return;
    }
    TransmissionEvent tx = make_transmission(vehicles[id], p.generated_at, now, cfg.mac);
    tx.fading.resize(vehicles.size());
    for (auto& g : tx.fading) g = nakagami_gain(cfg.phy.nakagami_m, fading_rng);
    p.queued = false;

    const std::uint64_t tx_id = next_tx_id++;
    push(tx.end, EventKind::TxEnd, tx_id);
    recent.push_back(std::move(tx));
    recent_ids.push_back(tx_id);
  }

  void on_tx_end(SimTime now, std::uint64_t tx_id) {
    const auto pos = std::find(recent_ids.begin(), recent_ids.end(), tx_id) - recent_ids.begin();
    const TransmissionEvent& frame = recent[static_cast<std::size_t>(pos)];

    overlapping.clear();
    for (std::size_t i = 0; i < recent.size(); ++i) {
      if (recent_ids[i] != tx_id && recent[i].overlaps(frame)) overlapping.push_back(&recent[i]);
    }
    scratch.clear();
    resolve_frame(frame, overlapping, radios, cfg.phy, road, scratch);

    for (const Reception& r : scratch) {
      record_beacon(vehicles[r.receiver_id], r.beacon, r.rx_time);
      if (observers.on_reception) observers.on_reception(make_trace_record(r.rx_time, r.receiver_id, r.beacon));
    }
    ++stats.sent;
    stats.received += scratch.size();
    if (!scratch.empty()) {
      ++stats.delivered;
      stats.delay_sum_us += static_cast<double>(measure_delay(frame.beacon.timestamp, frame.end).count());
    }
    prune(now);
  }

  void prune(SimTime now) {
    std::size_t keep_from = 0;
    while (keep_from < recent.size() && recent[keep_from].end + airtime <= now) ++keep_from;
    if (keep_from == 0) return;
    recent.erase(recent.begin(), recent.begin() + static_cast<std::ptrdiff_t>(keep_from));
    recent_ids.erase(recent_ids.begin(), recent_ids.begin() + static_cast<std::ptrdiff_t>(keep_from));
  }

  void on_mobility(SimTime now, SimTime step) {
    advance(vehicles, cfg.mobility_step_s, cfg.mobility.road_length_m);
    sync_radios();
    if (now + step < end_time) push(now + step, EventKind::Mobility);
  }

  void begin_epoch() {
    stats = EpochStats{};
    for (const auto& v : vehicles) stats.power_sum_dbm += v.tx_power_dbm;
  }

  void on_epoch(SimTime now) {
    const int epoch_index = static_cast<int>(now / std::chrono::seconds{cfg.epoch_s});

    MetricsRow row;
    row.epoch = epoch_index;
    row.protocol = cfg.protocol;
    row.mean_tx_power_dbm = stats.power_sum_dbm / static_cast<double>(vehicles.size());
    row.beacons_sent = stats.sent;
    row.beacons_received = stats.received;
    row.beacons_delivered = stats.delivered;
    row.mean_beacon_delay_us = stats.delivered ? stats.delay_sum_us / static_cast<double>(stats.delivered) : 0.0;
    row.mean_collision_probability = mean_collision_probability();

    if (now < end_time) row.mean_dfpav_adjust = update_powers(epoch_index);

    const SimTime stale = seconds(cfg.stale_timeout_s);
    for (auto& v : vehicles) reset_window(v, now, stale);

    spdlog::debug("epoch {} {}: power {:.3f} dBm, cp {:.4f}, delay {:.1f} us, sent {}, received {}", epoch_index,
                  to_string(cfg.protocol), row.mean_tx_power_dbm, row.mean_collision_probability,
                  row.mean_beacon_delay_us, row.beacons_sent, row.beacons_received);
    rows.push_back(row);
    begin_epoch();
  }

  double mean_collision_probability() const {
    double sum = 0.0;
    int counted = 0;
    for (const auto& v : vehicles) {
      if (v.neighbors.empty()) continue;
      int received = 0;
      for (const auto& [id, n] : v.neighbors) {
        received += static_cast<int>(std::min<std::size_t>(n.sequence_list.size(), kBeaconsPerSecond));
      }
      sum += collision_probability(received, static_cast<int>(v.neighbors.size()), kBeaconsPerSecond);
      ++counted;
    }
    return counted ? sum / counted : 0.0;
  }

  // Returns the mean DFPAV power-adjustment diagnostic (zero for other arms).
  double update_powers(int epoch_index) {
    switch (cfg.protocol) {
      case Protocol::None:
        for (auto& v : vehicles) v.tx_power_dbm = cfg.fixed_power_dbm;
        return 0.0;
      case Protocol::Pbpc:
        for (auto& v : vehicles) update_pbpc(v, epoch_index);
        return 0.0;
      case Protocol::Dfpav: {
        double adjust_sum = 0.0;
        int adjust_count = 0;
        for (auto& v : vehicles) {
          if (auto pa = update_dfpav(v)) {
            adjust_sum += *pa;
            ++adjust_count;
          }
        }
        return adjust_count ? adjust_sum / adjust_count : 0.0;
      }
    }
    return 0.0;
  }

  void update_pbpc(VehicleState& v, int epoch_index) {
    // no analysis possible: hold the current power
    if (v.neighbors.empty()) return;
    ChannelAnalysis a = analyze(v, kBeaconsPerSecond, road);
    v.pso.gbest_dbm = extract_gbest(v.neighbors);
    v.tx_power_dbm = select_power(a, v.pso, cfg.pso, pso_rng[v.id]);
    if (observers.on_analysis) observers.on_analysis(AnalysisRecord{epoch_index, v.id, std::move(a)});
  }

  std::optional<double> update_dfpav(VehicleState& v) {
    int heard = 0;
    std::vector<double> powers;
    for (const auto& [id, n] : v.neighbors) {
      if (n.sequence_list.empty()) continue;
      if (distance(v.position, n.last_position, road) > cfg.dfpav.cs_max_m) continue;
      ++heard;
      powers.push_back(n.last_pow_u_dbm);
    }
    const int msg_bits = cfg.mac.msg_bits();
    const double load = beaconing_load(heard, kBeaconsPerSecond, msg_bits);
    auto& state = dfpav[v.id];
    state.current_power_dbm = v.tx_power_dbm;
    v.tx_power_dbm = dfpav_select_power(state, load, powers, cfg.dfpav);

    if (heard == 0) return std::nullopt;
    const double density_per_km = heard * 1000.0 / (2.0 * cfg.dfpav.cs_max_m);
    return dfpav_power_adjust(cfg.dfpav, density_per_km, static_cast<double>(kBeaconsPerSecond) * msg_bits);
  }
};

Simulator::Simulator(SimConfig cfg, RunObservers observers)
    : impl_(std::make_unique<Impl>(std::move(cfg), std::move(observers))) {}
Simulator::~Simulator() = default;
Simulator::Simulator(Simulator&&) noexcept = default;
Simulator& Simulator::operator=(Simulator&&) noexcept = default;

std::vector<MetricsRow> Simulator::run() { return impl_->run(); }
const std::vector<VehicleState>& Simulator::vehicles() const { return impl_->vehicles; }
const SimConfig& Simulator::config() const { return impl_->cfg; }

std::vector<MetricsRow> run(const SimConfig& cfg) { return Simulator(cfg).run(); }

}  // namespace beaconsim
