#include "beaconsim/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>
#include <utility>

#include "beaconsim/errors.hpp"

namespace beaconsim {

std::string_view to_string(Protocol p) {
  switch (p) {
    case Protocol::Pbpc: return "pbpc";
    case Protocol::Dfpav: return "dfpav";
    case Protocol::None: return "none";
  }
  return "unknown";
}

Protocol parse_protocol(std::string_view s) {
  if (s == "pbpc") return Protocol::Pbpc;
  if (s == "dfpav") return Protocol::Dfpav;
  if (s == "none") return Protocol::None;
  throw ConfigError("unknown protocol '" + std::string(s) + "' (expected pbpc, dfpav or none)");
}

void SimConfig::validate() const {
  if (duration_s <= 0) throw ConfigError("sim.duration_s must be positive");
  if (epoch_s <= 0) throw ConfigError("sim.epoch_s must be positive");
  if (duration_s % epoch_s != 0) throw ConfigError("sim.duration_s must be a multiple of sim.epoch_s");
  if (fixed_power_dbm < kRegMinDbm || fixed_power_dbm > kRegMaxDbm) {
    throw ConfigError("sim.fixed_power_dbm outside the regulatory range [10, 33]");
  }
  if (mobility_step_s <= 0.0) throw ConfigError("sim.mobility_step_s must be positive");
  if (stale_timeout_s <= 0.0) throw ConfigError("sim.stale_timeout_s must be positive");
  phy.validate();
  mac.validate();
  mobility.validate();
  pso.validate();
  dfpav.validate();
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_value(std::string_view key, std::string_view text) {
  T value{};
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size()) {
    throw ConfigError("invalid value '" + std::string(text) + "' for key " + std::string(key));
  }
  return value;
}

using Setter = std::function<void(SimConfig&, std::string_view key, std::string_view value)>;

template <typename T, typename Section>
Setter field(Section SimConfig::*section, T Section::*member) {
  return [=](SimConfig& cfg, std::string_view key, std::string_view value) {
    cfg.*section.*member = parse_value<T>(key, value);
  };
}

template <typename T>
Setter top(T SimConfig::*member) {
  return [=](SimConfig& cfg, std::string_view key, std::string_view value) {
    cfg.*member = parse_value<T>(key, value);
  };
}

Setter text(std::string SimConfig::*member) {
  return [=](SimConfig& cfg, std::string_view, std::string_view value) { cfg.*member = std::string(value); };
}

const std::vector<std::pair<std::string_view, Setter>>& setters() {
  static const std::vector<std::pair<std::string_view, Setter>> table = {
      {"sim.protocol", [](SimConfig& c, std::string_view, std::string_view v) { c.protocol = parse_protocol(v); }},
      {"sim.duration_s", top(&SimConfig::duration_s)},
      {"sim.epoch_s", top(&SimConfig::epoch_s)},
      {"sim.seed", top(&SimConfig::seed)},
      {"sim.fixed_power_dbm", top(&SimConfig::fixed_power_dbm)},
      {"sim.mobility_step_s", top(&SimConfig::mobility_step_s)},
      {"sim.stale_timeout_s", top(&SimConfig::stale_timeout_s)},
      {"sim.metrics_path", text(&SimConfig::metrics_path)},
      {"sim.trace_path", text(&SimConfig::trace_path)},
      {"sim.analysis_path", text(&SimConfig::analysis_path)},

      {"phy.nakagami_m", field(&SimConfig::phy, &PhyConfig::nakagami_m)},
      {"phy.path_loss_exp", field(&SimConfig::phy, &PhyConfig::path_loss_exp)},
      {"phy.ref_loss_db", field(&SimConfig::phy, &PhyConfig::ref_loss_db)},
      {"phy.noise_floor_dbm", field(&SimConfig::phy, &PhyConfig::noise_floor_dbm)},
      {"phy.snr_threshold_db", field(&SimConfig::phy, &PhyConfig::snr_threshold_db)},
      {"phy.capture_margin_db", field(&SimConfig::phy, &PhyConfig::capture_margin_db)},

      {"mac.slot_us", field(&SimConfig::mac, &MacConfig::slot_us)},
      {"mac.sifs_us", field(&SimConfig::mac, &MacConfig::sifs_us)},
      {"mac.difs_us", field(&SimConfig::mac, &MacConfig::difs_us)},
      {"mac.cw_min", field(&SimConfig::mac, &MacConfig::cw_min)},
      {"mac.cw_max", field(&SimConfig::mac, &MacConfig::cw_max)},
      {"mac.plcp_us", field(&SimConfig::mac, &MacConfig::plcp_us)},
      {"mac.symbol_us", field(&SimConfig::mac, &MacConfig::symbol_us)},
      {"mac.data_rate_bps", field(&SimConfig::mac, &MacConfig::data_rate_bps)},
      {"mac.msg_bytes", field(&SimConfig::mac, &MacConfig::msg_bytes)},
      {"mac.cs_threshold_dbm", field(&SimConfig::mac, &MacConfig::cs_threshold_dbm)},

      {"mobility.n_vehicles", field(&SimConfig::mobility, &MobilityConfig::n_vehicles)},
      {"mobility.road_length_m", field(&SimConfig::mobility, &MobilityConfig::road_length_m)},
      {"mobility.lanes", field(&SimConfig::mobility, &MobilityConfig::lanes)},
      {"mobility.lane_width_m", field(&SimConfig::mobility, &MobilityConfig::lane_width_m)},
      {"mobility.v_min_kmh", field(&SimConfig::mobility, &MobilityConfig::v_min_kmh)},
      {"mobility.v_max_kmh", field(&SimConfig::mobility, &MobilityConfig::v_max_kmh)},

      {"pso.w_min", field(&SimConfig::pso, &PsoParams::w_min)},
      {"pso.w_max", field(&SimConfig::pso, &PsoParams::w_max)},
      {"pso.c1", field(&SimConfig::pso, &PsoParams::c1)},
      {"pso.c2", field(&SimConfig::pso, &PsoParams::c2)},
      {"pso.rand_min", field(&SimConfig::pso, &PsoParams::rand_min)},
      {"pso.rand_max", field(&SimConfig::pso, &PsoParams::rand_max)},
      {"pso.p_init_dbm", field(&SimConfig::pso, &PsoParams::p_init_dbm)},

      {"dfpav.mbl_bps", field(&SimConfig::dfpav, &DfpavParams::mbl_bps)},
      {"dfpav.step_dbm", field(&SimConfig::dfpav, &DfpavParams::step_dbm)},
      {"dfpav.epsilon", field(&SimConfig::dfpav, &DfpavParams::epsilon_dbm)},
      {"dfpav.cs_max_m", field(&SimConfig::dfpav, &DfpavParams::cs_max_m)},
      {"dfpav.p_start_dbm", field(&SimConfig::dfpav, &DfpavParams::p_start_dbm)},
  };
  return table;
}

}  // namespace

std::vector<std::string_view> config_keys() {
  std::vector<std::string_view> keys;
  for (const auto& [key, setter] : setters()) keys.push_back(key);
  return keys;
}

void apply_config_text(std::string_view text, SimConfig& cfg) {
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;

    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'section.key = value'");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));

    const auto& table = setters();
    auto it = std::find_if(table.begin(), table.end(), [&](const auto& kv) { return kv.first == key; });
    if (it == table.end()) {
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
    }
    try {
      it->second(cfg, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
}

void apply_config_file(const std::filesystem::path& path, SimConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  apply_config_text(buffer.str(), cfg);
}

}  // namespace beaconsim
