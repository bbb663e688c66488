#pragma once

#include <random>
#include <span>

namespace beaconsim {

struct PhyConfig {
  double nakagami_m = 3.0;
  double path_loss_exp = 2.0;
  double ref_loss_db = 47.0;
  double noise_floor_dbm = -99.0;
  double snr_threshold_db = 10.0;
  /// Extra margin the strongest frame needs on top of the SINR threshold.
  double capture_margin_db = 0.0;

  void validate() const;
};

/// Log-distance path loss, distance clamped to 1 m.
double path_loss_db(double distance_m, const PhyConfig& cfg);

/// Unit-mean Nakagami-m power gain, i.e. a Gamma(m, 1/m) draw.
double nakagami_gain(double m, std::mt19937_64& rng);

double received_power_dbm(double tx_dbm, double distance_m, double gain, const PhyConfig& cfg);

double sum_dbm(std::span<const double> powers_dbm, double noise_floor_dbm);

/// SINR test against noise plus every listed interferer.
bool is_decodable(double signal_dbm, std::span<const double> interferers_dbm,
                  const PhyConfig& cfg);

}  // namespace beaconsim
