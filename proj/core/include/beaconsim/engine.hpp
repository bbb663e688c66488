#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "beaconsim/channel_analysis.hpp"
#include "beaconsim/config.hpp"
#include "beaconsim/core_model.hpp"
#include "beaconsim/metrics.hpp"

namespace beaconsim {

/// One vehicle's channel analysis at an epoch boundary (PBPC arm).
struct AnalysisRecord {
  int epoch = 0;
  VehicleId vehicle_id = 0;
  ChannelAnalysis analysis;
};

inline constexpr std::string_view kAnalysisHeader = "epoch,vehicle_id,cp,F,S,minp,maxp,pd,lbest_power";
std::string format_analysis_line(const AnalysisRecord& r);

struct RunObservers {
  std::function<void(const TraceRecord&)> on_reception;
  std::function<void(const AnalysisRecord&)> on_analysis;
};

/// Deterministic single-threaded discrete-event run of one scenario.
class Simulator {
 public:
  explicit Simulator(SimConfig cfg, RunObservers observers = {});
  ~Simulator();
  Simulator(Simulator&&) noexcept;
  Simulator& operator=(Simulator&&) noexcept;

  std::vector<MetricsRow> run();

  /// Vehicle states as of the end of the last run (or initial placement).
  const std::vector<VehicleState>& vehicles() const;
  const SimConfig& config() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Validates `cfg` and runs it to completion.
std::vector<MetricsRow> run(const SimConfig& cfg);

}  // namespace beaconsim
