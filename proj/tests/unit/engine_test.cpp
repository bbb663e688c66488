#include <gtest/gtest.h>

#include <map>
#include <set>

#include "beaconsim/engine.hpp"
#include "beaconsim/metrics.hpp"

using namespace beaconsim;

namespace {

SimConfig small(Protocol p, std::uint64_t seed = 42) {
  SimConfig cfg;
  cfg.protocol = p;
  cfg.seed = seed;
  cfg.duration_s = 4;
  cfg.mobility.n_vehicles = 40;
  cfg.mobility.road_length_m = 1000.0;
  return cfg;
}

struct Captured {
  std::vector<MetricsRow> rows;
  std::vector<TraceRecord> trace;
  std::vector<AnalysisRecord> analysis;
};

Captured capture(const SimConfig& cfg) {
  Captured c;
  RunObservers obs;
  obs.on_reception = [&](const TraceRecord& r) { c.trace.push_back(r); };
  obs.on_analysis = [&](const AnalysisRecord& a) { c.analysis.push_back(a); };
  c.rows = Simulator(cfg, obs).run();
  return c;
}

}  // namespace

TEST(Engine, BenignPairHearsEveryBeacon) {
  SimConfig cfg;
  cfg.protocol = Protocol::None;
  cfg.duration_s = 2;
  cfg.mobility.n_vehicles = 2;
  cfg.mobility.road_length_m = 200.0;
  const auto rows = run(cfg);
  ASSERT_EQ(rows.size(), 2u);
  for (const auto& r : rows) {
    EXPECT_EQ(r.beacons_received, r.beacons_sent);
    // a frame still on air at the boundary lands in the next window
    EXPECT_LE(r.mean_collision_probability, 0.1 + 1e-12);
    EXPECT_GE(r.beacons_sent, 19u);
    EXPECT_LE(r.beacons_sent, 21u);
    // idle medium: DIFS + backoff + airtime
    EXPECT_GE(r.mean_beacon_delay_us, 760.0);
    EXPECT_LE(r.mean_beacon_delay_us, 1000.0);
  }
}

TEST(Engine, SameSeedIsBitIdentical) {
  for (auto p : {Protocol::Pbpc, Protocol::Dfpav, Protocol::None}) {
    const auto a = capture(small(p));
    const auto b = capture(small(p));
    EXPECT_EQ(format_metrics_csv(a.rows), format_metrics_csv(b.rows));
    ASSERT_EQ(a.trace.size(), b.trace.size());
    EXPECT_TRUE(a.trace == b.trace);
  }
}

TEST(Engine, DifferentSeedsDiffer) {
  EXPECT_NE(format_metrics_csv(run(small(Protocol::Pbpc, 1))), format_metrics_csv(run(small(Protocol::Pbpc, 2))));
}

TEST(Engine, OneRowPerEpochWithSaneValues) {
  const auto c = capture(small(Protocol::Pbpc));
  ASSERT_EQ(c.rows.size(), 4u);
  for (std::size_t i = 0; i < c.rows.size(); ++i) {
    const auto& r = c.rows[i];
    EXPECT_EQ(r.epoch, static_cast<int>(i + 1));
    EXPECT_GE(r.mean_collision_probability, 0.0);
    EXPECT_LE(r.mean_collision_probability, 1.0);
    EXPECT_LE(r.beacons_received, r.beacons_sent * 39);
    EXPECT_GE(r.mean_tx_power_dbm, 10.0);
    EXPECT_LE(r.mean_tx_power_dbm, 33.0);
  }
}

TEST(Engine, ReceptionsConserveTransmissions) {
  const auto c = capture(small(Protocol::Dfpav));
  std::uint64_t received = 0, sent = 0;
  for (const auto& r : c.rows) {
    received += r.beacons_received;
    sent += r.beacons_sent;
  }
  EXPECT_EQ(c.trace.size(), received);

  // every reception maps to one frame: (sender, seq) pairs share a single rx time
  std::map<std::pair<VehicleId, SeqNo>, SimTime> frames;
  std::set<std::tuple<VehicleId, SeqNo, VehicleId>> seen;
  for (const auto& t : c.trace) {
    ASSERT_NE(t.sender_id, t.receiver_id);
    auto [it, inserted] = frames.try_emplace({t.sender_id, t.seq}, t.rx_time);
    if (!inserted) ASSERT_EQ(it->second, t.rx_time);
    ASSERT_TRUE(seen.emplace(t.sender_id, t.seq, t.receiver_id).second);
  }
  EXPECT_LE(frames.size(), sent);
}

TEST(Engine, PowerOnlyChangesAtEpochBoundaries) {
  for (auto p : {Protocol::Pbpc, Protocol::Dfpav}) {
    const auto c = capture(small(p));
    const auto airtime = frame_airtime(MacConfig{});
    std::map<std::pair<VehicleId, std::int64_t>, double> power;
    for (const auto& t : c.trace) {
      const auto epoch = (t.rx_time - airtime) / std::chrono::seconds{1};
      auto [it, inserted] = power.try_emplace({t.sender_id, epoch}, t.pow_u_dbm);
      if (!inserted) ASSERT_EQ(it->second, t.pow_u_dbm);
    }
  }
}

TEST(Engine, FixedArmHoldsConfiguredPower) {
  auto cfg = small(Protocol::None);
  cfg.fixed_power_dbm = 20.0;
  for (const auto& r : run(cfg)) EXPECT_DOUBLE_EQ(r.mean_tx_power_dbm, 20.0);
}

TEST(Engine, PbpcStartsAtInitialPowerAndEmitsAnalysis) {
  const auto c = capture(small(Protocol::Pbpc));
  EXPECT_DOUBLE_EQ(c.rows[0].mean_tx_power_dbm, 25.0);
  // first selection returns the initial power for every vehicle
  EXPECT_DOUBLE_EQ(c.rows[1].mean_tx_power_dbm, 25.0);
  ASSERT_FALSE(c.analysis.empty());
  for (const auto& a : c.analysis) {
    EXPECT_GE(a.analysis.success, 0.0);
    EXPECT_LE(a.analysis.success, 1.0);
    EXPECT_LE(a.analysis.min_p_dbm, a.analysis.local_best_power_dbm);
    EXPECT_LE(a.analysis.local_best_power_dbm, a.analysis.max_p_dbm);
  }
  EXPECT_EQ(format_analysis_line(c.analysis.front()).find(std::to_string(c.analysis.front().epoch) + ","), 0u);
}

TEST(Engine, DfpavRampsInSparseNetwork) {
  SimConfig cfg;
  cfg.protocol = Protocol::Dfpav;
  cfg.duration_s = 20;
  cfg.mobility.n_vehicles = 10;
  const auto rows = run(cfg);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_GE(rows[i].mean_tx_power_dbm, rows[i - 1].mean_tx_power_dbm);
  EXPECT_DOUBLE_EQ(rows.back().mean_tx_power_dbm, 33.0);
}

TEST(Engine, RunIsIdempotent) {
  Simulator sim(small(Protocol::None));
  const auto first = sim.run();
  EXPECT_EQ(format_metrics_csv(first), format_metrics_csv(sim.run()));
  EXPECT_EQ(sim.vehicles().size(), 40u);
}
