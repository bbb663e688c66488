#include <gtest/gtest.h>

#include <random>

#include "beaconsim/mac_broadcast.hpp"
#include "../support/oracles.hpp"

using namespace beaconsim;

namespace {

constexpr RoadGeometry kRoad{2000.0, 3.5};

TransmissionEvent frame(VehicleId sender, double x, SimTime start, double power, SeqNo seq = 1) {
  TransmissionEvent e;
  e.sender_id = sender;
  e.start = start;
  e.end = start + frame_airtime(MacConfig{});
  e.tx_power_dbm = power;
  e.beacon.sender_id = sender;
  e.beacon.seq = seq;
  e.beacon.position = {x, 0};
  return e;
}

using Key = std::tuple<long long, unsigned, unsigned, unsigned long long>;

std::vector<Key> keys(const std::vector<Reception>& rs) {
  std::vector<Key> out;
  for (const auto& r : rs) out.emplace_back(r.rx_time.count(), r.sender_id, r.receiver_id, r.beacon.seq);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(FrameAirtime, DefaultsAndVariants) {
  MacConfig c;
  EXPECT_EQ(frame_airtime(c), SimTime{696});
  c.msg_bytes = 6;
  EXPECT_EQ(frame_airtime(c), SimTime{16});
  c.msg_bytes = 1024;
  EXPECT_EQ(frame_airtime(c), SimTime{1376});
}

TEST(Backoff, SlotArithmetic) {
  const MacConfig c;
  EXPECT_EQ(backoff_for_slots(0, c), SimTime{64});
  EXPECT_EQ(backoff_for_slots(15, c), SimTime{304});
}

TEST(Backoff, MonteCarloMean) {
  const MacConfig c;
  std::mt19937_64 rng(12);
  double sum = 0.0;
  constexpr int kDraws = 100'000;
  for (int i = 0; i < kDraws; ++i) {
    const auto d = backoff_delay(rng, c);
    ASSERT_GE(d, SimTime{64});
    ASSERT_LE(d, SimTime{304});
    sum += static_cast<double>(d.count());
  }
  EXPECT_NEAR(sum / kDraws, 184.0, 2.0);
}

TEST(ScheduleStart, IdleAndDeferred) {
  EXPECT_EQ(schedule_start(SimTime{1000}, SimTime{1000}, SimTime{64}), SimTime{1064});
  EXPECT_EQ(schedule_start(SimTime{1000}, SimTime{1500}, SimTime{64}), SimTime{1564});
}

TEST(ScheduleTransmission, StampsBeaconAndTimes) {
  VehicleState v;
  v.id = 4;
  v.tx_power_dbm = 27.0;
  std::mt19937_64 rng(1);
  const auto e = schedule_transmission(v, SimTime{5000}, SimTime{5500}, rng, MacConfig{});
  EXPECT_GE(e.start, SimTime{5564});
  EXPECT_LE(e.start, SimTime{5804});
  EXPECT_EQ(e.end - e.start, SimTime{696});
  EXPECT_EQ(e.beacon.timestamp, SimTime{5000});
  EXPECT_EQ(e.beacon.seq, 1u);
  EXPECT_DOUBLE_EQ(e.tx_power_dbm, 27.0);
}

TEST(ScheduleTransmission, EqualDrawsCollide) {
  VehicleState a, b;
  a.id = 0;
  b.id = 1;
  std::mt19937_64 ra(3), rb(3);
  const auto ea = schedule_transmission(a, SimTime{0}, SimTime{0}, ra, MacConfig{});
  const auto eb = schedule_transmission(b, SimTime{0}, SimTime{0}, rb, MacConfig{});
  EXPECT_TRUE(ea.overlaps(eb));
}

TEST(MediumBusy, SensesOnlyStrongOngoingFrames) {
  const PhyConfig phy;
  const MacConfig mac;
  const std::vector<TransmissionEvent> air{frame(1, 100.0, SimTime{0}, 25.0), frame(2, 1100.0, SimTime{0}, 10.0)};
  EXPECT_EQ(medium_busy_until(air, {150.0, 0}, SimTime{100}, phy, mac, kRoad), SimTime{696});
  // a frame starting right now has not been sensed yet
  EXPECT_EQ(medium_busy_until(air, {150.0, 0}, SimTime{0}, phy, mac, kRoad), SimTime{0});
  // the weak frame alone stays below the carrier-sense threshold 1000 m away
  const std::vector<TransmissionEvent> weak{air[1]};
  EXPECT_EQ(medium_busy_until(weak, {100.0, 0}, SimTime{100}, phy, mac, kRoad), SimTime{100});
}

TEST(ResolveReceptions, SingleFrameNearReceiver) {
  const std::vector<TransmissionEvent> events{frame(1, 100.0, SimTime{0}, 25.0)};
  const std::vector<RadioNode> rx{{1, {100.0, 0}}, {2, {150.0, 0}}};
  const auto out = resolve_receptions(events, rx, PhyConfig{}, kRoad);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].receiver_id, 2u);
  EXPECT_EQ(out[0].sender_id, 1u);
  EXPECT_EQ(out[0].rx_time, SimTime{696});
}

TEST(ResolveReceptions, SymmetricCollisionLosesBoth) {
  const std::vector<TransmissionEvent> events{frame(1, 100.0, SimTime{0}, 25.0),
                                              frame(2, 300.0, SimTime{0}, 25.0)};
  const std::vector<RadioNode> rx{{3, {200.0, 0}}};
  EXPECT_TRUE(resolve_receptions(events, rx, PhyConfig{}, kRoad).empty());
}

TEST(ResolveReceptions, TouchingFramesDoNotInterfere) {
  const std::vector<TransmissionEvent> events{frame(1, 100.0, SimTime{0}, 25.0),
                                              frame(2, 300.0, SimTime{696}, 25.0)};
  const std::vector<RadioNode> rx{{3, {200.0, 0}}};
  EXPECT_EQ(resolve_receptions(events, rx, PhyConfig{}, kRoad).size(), 2u);
}

TEST(ResolveReceptions, HalfDuplexReceiverMissesFrame) {
  const std::vector<TransmissionEvent> events{frame(1, 100.0, SimTime{0}, 25.0),
                                              frame(2, 110.0, SimTime{300}, 25.0)};
  const std::vector<RadioNode> rx{{1, {100.0, 0}}, {2, {110.0, 0}}};
  EXPECT_TRUE(resolve_receptions(events, rx, PhyConfig{}, kRoad).empty());
}

TEST(ResolveReceptions, MatchesBruteForceOracle) {
  std::mt19937_64 rng(31337);
  std::uniform_int_distribution<int> n_events(1, 4), n_receivers(1, 4), id(0, 5), start_step(0, 2000 / 8 - 1);
  std::uniform_real_distribution<double> x(0.0, 2000.0), local(0.0, 500.0), power(10.0, 33.0), gain(0.05, 3.0);
  std::uniform_int_distribution<int> lane(0, 2);
  const PhyConfig phy;
  int with_receptions = 0, with_losses = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    // half the cases cluster within 500 m so interference actually matters
    const bool clustered = trial % 2 == 0;
    auto place = [&] { return clustered ? local(rng) : x(rng); };

    std::vector<TransmissionEvent> events;
    const int ne = n_events(rng);
    for (int k = 0; k < ne; ++k) {
      auto e = frame(static_cast<VehicleId>(id(rng)), place(), SimTime{start_step(rng) * 8}, power(rng),
                     static_cast<SeqNo>(k + 1));
      e.beacon.position.lane = lane(rng);
      e.fading.resize(6);
      for (auto& g : e.fading) g = gain(rng);
      events.push_back(std::move(e));
    }
    std::vector<RadioNode> receivers;
    std::vector<int> ids{0, 1, 2, 3, 4, 5};
    std::shuffle(ids.begin(), ids.end(), rng);
    const int nr = n_receivers(rng);
    for (int k = 0; k < nr; ++k) receivers.push_back({static_cast<VehicleId>(ids[k]), {place(), lane(rng)}});

    const auto got = keys(resolve_receptions(events, receivers, phy, kRoad));
    const auto want = oracle::brute_force_receptions(events, receivers, phy, kRoad);
    ASSERT_EQ(got, want) << "trial " << trial;
    with_receptions += !want.empty();
    std::size_t possible = 0;
    for (const auto& e : events)
      for (const auto& r : receivers) possible += r.id != e.sender_id;
    with_losses += want.size() < possible;
  }
  // the generator must exercise both outcomes
  EXPECT_GT(with_receptions, 500);
  EXPECT_GT(with_losses, 500);
}

TEST(ResolveReceptions, OutputOrderedByTimeSenderReceiver) {
  const std::vector<TransmissionEvent> events{frame(2, 100.0, SimTime{800}, 25.0), frame(1, 120.0, SimTime{0}, 25.0)};
  const std::vector<RadioNode> rx{{4, {130.0, 0}}, {3, {110.0, 0}}};
  const auto out = resolve_receptions(events, rx, PhyConfig{}, kRoad);
  ASSERT_EQ(out.size(), 4u);
  EXPECT_EQ(out[0].sender_id, 1u);
  EXPECT_EQ(out[0].receiver_id, 3u);
  EXPECT_EQ(out[1].receiver_id, 4u);
  EXPECT_EQ(out[2].sender_id, 2u);
}
