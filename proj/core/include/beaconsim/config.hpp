#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "beaconsim/dfpav.hpp"
#include "beaconsim/mac_broadcast.hpp"
#include "beaconsim/mobility.hpp"
#include "beaconsim/phy_channel.hpp"
#include "beaconsim/pso_state.hpp"

namespace beaconsim {

enum class Protocol { Pbpc, Dfpav, None };

std::string_view to_string(Protocol p);
Protocol parse_protocol(std::string_view s);

inline constexpr std::uint64_t kDefaultSeed = 42;

struct SimConfig {
  Protocol protocol = Protocol::Pbpc;
  int duration_s = 10;
  int epoch_s = 1;
  std::uint64_t seed = kDefaultSeed;
  /// Power used by every vehicle under Protocol::None.
  double fixed_power_dbm = kRegMaxDbm;
  double mobility_step_s = 0.1;
  double stale_timeout_s = 2.0;

  PhyConfig phy;
  MacConfig mac;
  MobilityConfig mobility;
  PsoParams pso;
  DfpavParams dfpav;

  std::string metrics_path;
  std::string trace_path;
  std::string analysis_path;

  /// Throws ConfigError on the first violated constraint.
  void validate() const;
};

/// Applies `section.key = value` lines onto `cfg`. Blank lines and `#`
/// comments are skipped; unknown keys and malformed values throw ConfigError.
void apply_config_text(std::string_view text, SimConfig& cfg);
void apply_config_file(const std::filesystem::path& path, SimConfig& cfg);

/// Every recognized configuration key, in documentation order.
std::vector<std::string_view> config_keys();

}  // namespace beaconsim
