#include "beaconsim/metrics.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <fmt/format.h>

#include "beaconsim/errors.hpp"

namespace beaconsim {

SimTime measure_delay(SimTime generated_at, SimTime first_rx_time) { return first_rx_time - generated_at; }

std::string format_metrics_csv(const std::vector<MetricsRow>& rows) {
  std::string out(kMetricsHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += fmt::format("{},{},{:.4f},{:.4f},{:.4f},{},{}\n", r.epoch, to_string(r.protocol),
                       r.mean_tx_power_dbm, r.mean_collision_probability, r.mean_beacon_delay_us,
                       r.beacons_sent, r.beacons_received);
  }
  return out;
}

void write_metrics_csv(const std::vector<MetricsRow>& rows, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << format_metrics_csv(rows);
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

namespace {

template <typename T>
T parse_cell(std::string_view cell, int line_no) {
  T value{};
  auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc{} || end != cell.data() + cell.size()) {
    throw SchemaError(fmt::format("line {}: malformed value '{}'", line_no, cell));
  }
  return value;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  while (true) {
    auto comma = line.find(',');
    cells.push_back(line.substr(0, comma));
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
  }
  return cells;
}

}  // namespace

MetricsTable parse_metrics_csv(std::string_view text) {
  MetricsTable table;
  int line_no = 0;
  bool saw_header = false;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;

    if (!saw_header) {
      if (line != kMetricsHeader) throw SchemaError("unexpected metrics header: " + std::string(line));
      saw_header = true;
      continue;
    }
    auto cells = split(line);
    if (cells.size() != 7) throw SchemaError(fmt::format("line {}: expected 7 columns", line_no));
    MetricsRow r;
    r.epoch = parse_cell<int>(cells[0], line_no);
    table.protocols.emplace_back(cells[1]);
    try {
      r.protocol = parse_protocol(cells[1]);
    } catch (const ConfigError&) {
      throw SchemaError(fmt::format("line {}: unknown protocol '{}'", line_no, cells[1]));
    }
    r.mean_tx_power_dbm = parse_cell<double>(cells[2], line_no);
    r.mean_collision_probability = parse_cell<double>(cells[3], line_no);
    r.mean_beacon_delay_us = parse_cell<double>(cells[4], line_no);
    r.beacons_sent = parse_cell<std::uint64_t>(cells[5], line_no);
    r.beacons_received = parse_cell<std::uint64_t>(cells[6], line_no);
    table.rows.push_back(r);
  }
  if (!saw_header) throw SchemaError("metrics file is empty");
  return table;
}

MetricsTable read_metrics_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_metrics_csv(buffer.str());
}

const MetricComparison& RunComparison::metric(std::string_view name) const {
  for (const auto& m : metrics) {
    if (m.name == name) return m;
  }
  throw std::out_of_range("no metric named " + std::string(name));
}

namespace {

template <typename Get>
MetricComparison compare_column(std::string name, const MetricsTable& a, const MetricsTable& b, Get get) {
  MetricComparison m;
  m.name = std::move(name);
  for (const auto& r : a.rows) m.mean_a += get(r);
  for (const auto& r : b.rows) m.mean_b += get(r);
  m.mean_a /= static_cast<double>(a.rows.size());
  m.mean_b /= static_cast<double>(b.rows.size());
  if (m.mean_a == 0.0) {
    m.ratio = m.mean_b == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  } else {
    m.ratio = m.mean_b / m.mean_a;
  }
  return m;
}

}  // namespace

RunComparison compare_runs(const MetricsTable& a, const MetricsTable& b) {
  if (a.rows.empty() || b.rows.empty()) throw SchemaError("cannot compare empty runs");
  if (a.rows.size() != b.rows.size()) throw SchemaError("runs have different epoch counts");
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    if (a.rows[i].epoch != b.rows[i].epoch) throw SchemaError("runs cover different epochs");
  }

  RunComparison c;
  c.protocol_a = a.protocols.empty() ? std::string(to_string(a.rows.front().protocol)) : a.protocols.front();
  c.protocol_b = b.protocols.empty() ? std::string(to_string(b.rows.front().protocol)) : b.protocols.front();
  c.metrics.push_back(compare_column("mean_tx_power_dbm", a, b, [](const MetricsRow& r) { return r.mean_tx_power_dbm; }));
  c.metrics.push_back(compare_column("mean_cp", a, b, [](const MetricsRow& r) { return r.mean_collision_probability; }));
  c.metrics.push_back(compare_column("mean_delay_us", a, b, [](const MetricsRow& r) { return r.mean_beacon_delay_us; }));
  c.metrics.push_back(compare_column("sent", a, b, [](const MetricsRow& r) { return static_cast<double>(r.beacons_sent); }));
  c.metrics.push_back(compare_column("received", a, b, [](const MetricsRow& r) { return static_cast<double>(r.beacons_received); }));
  return c;
}

std::string format_comparison(const RunComparison& c) {
  std::string out = fmt::format("metric,mean_{},mean_{},ratio\n", c.protocol_a, c.protocol_b);
  if (c.protocol_a == c.protocol_b) out = "metric,mean_a,mean_b,ratio\n";
  for (const auto& m : c.metrics) {
    out += fmt::format("{},{:.4f},{:.4f},{:.4f}\n", m.name, m.mean_a, m.mean_b, m.ratio);
  }
  return out;
}

}  // namespace beaconsim
