#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "beaconsim/config.hpp"
#include "beaconsim/core_model.hpp"

namespace beaconsim {

/// Per-epoch, per-protocol aggregate.
struct MetricsRow {
  int epoch = 0;
  Protocol protocol = Protocol::Pbpc;
  double mean_tx_power_dbm = 0.0;
  double mean_collision_probability = 0.0;
  double mean_beacon_delay_us = 0.0;
  std::uint64_t beacons_sent = 0;
  std::uint64_t beacons_received = 0;
  /// Beacons decoded by at least one receiver; the population behind the delay mean.
  std::uint64_t beacons_delivered = 0;
  /// Mean DFPAV power-adjustment value (diagnostic, DFPAV arm only).
  double mean_dfpav_adjust = 0.0;
};

inline constexpr std::string_view kMetricsHeader =
    "epoch,protocol,mean_tx_power_dbm,mean_cp,mean_delay_us,sent,received";

/// Generation to first successful reception.
SimTime measure_delay(SimTime generated_at, SimTime first_rx_time);

std::string format_metrics_csv(const std::vector<MetricsRow>& rows);
/// Throws IoError when the file cannot be written.
void write_metrics_csv(const std::vector<MetricsRow>& rows, const std::filesystem::path& path);

/// Parsed metrics file; the protocol column is kept verbatim.
struct MetricsTable {
  std::vector<std::string> protocols;
  std::vector<MetricsRow> rows;
};

MetricsTable parse_metrics_csv(std::string_view text);
MetricsTable read_metrics_csv(const std::filesystem::path& path);

struct MetricComparison {
  std::string name;
  double mean_a = 0.0;
  double mean_b = 0.0;
  /// mean_b / mean_a; 1.0 when both are zero.
  double ratio = 1.0;
};

struct RunComparison {
  std::string protocol_a;
  std::string protocol_b;
  std::vector<MetricComparison> metrics;

  const MetricComparison& metric(std::string_view name) const;
};

/// Means of every metric column over epochs and their b/a ratios.
/// Throws SchemaError when the epoch sets differ.
RunComparison compare_runs(const MetricsTable& a, const MetricsTable& b);
std::string format_comparison(const RunComparison& c);

}  // namespace beaconsim
