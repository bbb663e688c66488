#include <benchmark/benchmark.h>

#include <random>

#include "beaconsim/channel_analysis.hpp"
#include "beaconsim/engine.hpp"
#include "beaconsim/mac_broadcast.hpp"
#include "beaconsim/mobility.hpp"
#include "beaconsim/pso_power.hpp"

using namespace beaconsim;

namespace {

// A dense burst of frames heard by the default 200-vehicle population.
static void BM_ResolveReceptions(benchmark::State& state) {
  const auto frames = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  auto vehicles = init_vehicles(MobilityConfig{}, rng);
  std::vector<RadioNode> radios;
  for (const auto& v : vehicles) radios.push_back({v.id, v.position});

  const MacConfig mac;
  std::vector<TransmissionEvent> events;
  std::uniform_int_distribution<int> start(0, 5000);
  for (int i = 0; i < frames; ++i) {
    auto e = make_transmission(vehicles[static_cast<std::size_t>(i) % vehicles.size()], SimTime{0}, SimTime{start(rng)}, mac);
    e.fading.assign(vehicles.size(), 1.0);
    events.push_back(std::move(e));
  }
  const PhyConfig phy;
  const RoadGeometry road;
  for (auto _ : state) benchmark::DoNotOptimize(resolve_receptions(events, radios, phy, road));
  state.SetItemsProcessed(state.iterations() * frames * static_cast<std::int64_t>(radios.size()));
}
BENCHMARK(BM_ResolveReceptions)->Arg(4)->Arg(16)->Arg(64);

static void BM_AnalyzeAndSelect(benchmark::State& state) {
  const auto neighbors = static_cast<int>(state.range(0));
  VehicleState v;
  v.position = {1000.0, 0};
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> x(0.0, 2000.0), p(10.0, 33.0);
  for (int n = 1; n <= neighbors; ++n) {
    Beacon b;
    b.sender_id = static_cast<VehicleId>(n);
    b.position = {x(rng), n % 3};
    b.pow_u_dbm = p(rng);
    b.pop_best_dbm = p(rng);
    for (SeqNo s = 1; s <= static_cast<SeqNo>(n % 11); ++s) {
      b.seq = s;
      record_beacon(v, b, SimTime{0});
    }
  }
  const RoadGeometry road;
  const PsoParams params;
  for (auto _ : state) {
    const auto a = analyze(v, kBeaconsPerSecond, road);
    PsoState pso{25.0, extract_gbest(v.neighbors), true};
    benchmark::DoNotOptimize(select_power(a, pso, params, rng));
  }
}
BENCHMARK(BM_AnalyzeAndSelect)->Arg(5)->Arg(50)->Arg(199);

static void BM_FullRun(benchmark::State& state) {
  SimConfig cfg;
  cfg.protocol = static_cast<Protocol>(state.range(0));
  cfg.duration_s = 2;
  for (auto _ : state) benchmark::DoNotOptimize(run(cfg));
  state.SetLabel(std::string(to_string(cfg.protocol)));
}
BENCHMARK(BM_FullRun)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
