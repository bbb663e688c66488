#include "beaconsim/phy_channel.hpp"

#include <algorithm>
#include <cmath>

#include "beaconsim/errors.hpp"

namespace beaconsim {

void PhyConfig::validate() const {
  if (nakagami_m < 0.5) throw ConfigError("phy.nakagami_m must be >= 0.5");
  if (path_loss_exp <= 0.0) throw ConfigError("phy.path_loss_exp must be positive");
  if (snr_threshold_db < 10.0 || snr_threshold_db > 40.0) {
    throw ConfigError("phy.snr_threshold_db must lie within [10, 40]");
  }
  if (capture_margin_db < 0.0) throw ConfigError("phy.capture_margin_db must be non-negative");
}

double path_loss_db(double distance_m, const PhyConfig& cfg) {
  return cfg.ref_loss_db + 10.0 * cfg.path_loss_exp * std::log10(std::max(distance_m, 1.0));
}

double nakagami_gain(double m, std::mt19937_64& rng) {
  std::gamma_distribution<double> gamma(m, 1.0 / m);
  return gamma(rng);
}

double received_power_dbm(double tx_dbm, double distance_m, double gain, const PhyConfig& cfg) {
  return tx_dbm - path_loss_db(distance_m, cfg) + 10.0 * std::log10(gain);
}

double sum_dbm(std::span<const double> powers_dbm, double noise_floor_dbm) {
  double mw = std::pow(10.0, noise_floor_dbm / 10.0);
  for (double p : powers_dbm) mw += std::pow(10.0, p / 10.0);
  return 10.0 * std::log10(mw);
}

bool is_decodable(double signal_dbm, std::span<const double> interferers_dbm,
                  const PhyConfig& cfg) {
  const double sinr_db = signal_dbm - sum_dbm(interferers_dbm, cfg.noise_floor_dbm);
  return sinr_db >= cfg.snr_threshold_db + cfg.capture_margin_db;
}

}  // namespace beaconsim
