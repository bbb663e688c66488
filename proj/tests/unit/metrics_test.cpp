#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "beaconsim/errors.hpp"
#include "beaconsim/metrics.hpp"

using namespace beaconsim;

namespace {

std::vector<MetricsRow> rows(int n, Protocol p, double delay) {
  std::vector<MetricsRow> out;
  for (int i = 1; i <= n; ++i) {
    MetricsRow r;
    r.epoch = i;
    r.protocol = p;
    r.mean_tx_power_dbm = 25.0 + i * 0.123456;
    r.mean_collision_probability = 0.3;
    r.mean_beacon_delay_us = delay;
    r.beacons_sent = 2000;
    r.beacons_received = 60000;
    out.push_back(r);
  }
  return out;
}

}  // namespace

TEST(MeasureDelay, Arithmetic) {
  EXPECT_EQ(measure_delay(SimTime{0}, SimTime{64 + 696}), SimTime{760});
  EXPECT_EQ(measure_delay(SimTime{1000}, SimTime{1000 + 500 + 64 + 696}), SimTime{1260});
}

TEST(MetricsCsv, HeaderPlusOneLinePerEpoch) {
  const std::string text = format_metrics_csv(rows(10, Protocol::Pbpc, 900.0));
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, kMetricsHeader);
  int count = 1;
  std::getline(in, line);
  EXPECT_EQ(line, "1,pbpc,25.1235,0.3000,900.0000,2000,60000");
  ++count;
  while (std::getline(in, line)) ++count;
  EXPECT_EQ(count, 11);
}

TEST(MetricsCsv, ParseRoundTrip) {
  const auto original = rows(5, Protocol::Dfpav, 1234.5678);
  const auto table = parse_metrics_csv(format_metrics_csv(original));
  ASSERT_EQ(table.rows.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(table.rows[i].epoch, original[i].epoch);
    EXPECT_NEAR(table.rows[i].mean_tx_power_dbm, original[i].mean_tx_power_dbm, 5e-5);
    EXPECT_EQ(table.rows[i].beacons_received, original[i].beacons_received);
    EXPECT_EQ(table.protocols[i], "dfpav");
  }
}

TEST(MetricsCsv, SchemaViolations) {
  EXPECT_THROW(parse_metrics_csv("epoch,protocol\n1,pbpc\n"), SchemaError);
  EXPECT_THROW(parse_metrics_csv(std::string(kMetricsHeader) + "\n1,pbpc,1,2,3\n"), SchemaError);
  EXPECT_THROW(parse_metrics_csv(std::string(kMetricsHeader) + "\n1,pbpc,x,0.1,3,4,5\n"), SchemaError);
}

TEST(MetricsCsv, UnwritablePathIsIoError) {
  EXPECT_THROW(write_metrics_csv(rows(1, Protocol::None, 1.0), "/nonexistent/dir/out.csv"), IoError);
}

TEST(CompareRuns, IdenticalInputsGiveUnitRatios) {
  const auto t = parse_metrics_csv(format_metrics_csv(rows(3, Protocol::Pbpc, 800.0)));
  const auto c = compare_runs(t, t);
  for (const auto& m : c.metrics) EXPECT_DOUBLE_EQ(m.ratio, 1.0) << m.name;
}

TEST(CompareRuns, DelayRatio) {
  const auto a = parse_metrics_csv(format_metrics_csv(rows(3, Protocol::Dfpav, 100.0)));
  const auto b = parse_metrics_csv(format_metrics_csv(rows(3, Protocol::Pbpc, 55.0)));
  const auto c = compare_runs(a, b);
  EXPECT_NEAR(c.metric("mean_delay_us").ratio, 0.55, 1e-12);
  EXPECT_EQ(c.protocol_a, "dfpav");
  EXPECT_EQ(c.protocol_b, "pbpc");
  EXPECT_NE(format_comparison(c).find("mean_delay_us"), std::string::npos);
}

TEST(CompareRuns, EpochMismatchIsSchemaError) {
  const auto a = parse_metrics_csv(format_metrics_csv(rows(3, Protocol::Dfpav, 100.0)));
  const auto b = parse_metrics_csv(format_metrics_csv(rows(4, Protocol::Pbpc, 55.0)));
  EXPECT_THROW(compare_runs(a, b), SchemaError);
}
