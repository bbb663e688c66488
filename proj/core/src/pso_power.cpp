#include "beaconsim/pso_power.hpp"

#include <algorithm>

#include "beaconsim/errors.hpp"

namespace beaconsim {

void PsoParams::validate() const {
  if (!(0.0 < w_min && w_min <= w_max)) throw ConfigError("pso needs 0 < w_min <= w_max");
  if (!(c1 > 0.0 && c2 > 0.0)) throw ConfigError("pso.c1 and pso.c2 must be positive");
  if (!(0.0 < rand_min && rand_min <= rand_max && rand_max <= 1.0)) {
    throw ConfigError("pso needs 0 < rand_min <= rand_max <= 1");
  }
  if (p_init_dbm < kRegMinDbm || p_init_dbm > kRegMaxDbm) {
    throw ConfigError("pso.p_init_dbm outside the regulatory range");
  }
}

double extract_gbest(std::span<const NeighborState> neighbors) {
  if (neighbors.empty()) throw NoNeighborsError();
  auto best = std::max_element(neighbors.begin(), neighbors.end(), [](const auto& a, const auto& b) {
    return a.last_pop_best_dbm < b.last_pop_best_dbm;
  });
  return best->last_pop_best_dbm;
}

double extract_gbest(const std::map<VehicleId, NeighborState>& neighbors) {
  if (neighbors.empty()) throw NoNeighborsError();
  double best = neighbors.begin()->second.last_pop_best_dbm;
  for (const auto& [id, n] : neighbors) best = std::max(best, n.last_pop_best_dbm);
  return best;
}

double pso_velocity(double lbest_dbm, double pbest_dbm, double gbest_dbm, const PsoDraw& draw,
                    const PsoParams& params) {
  return lbest_dbm * draw.w + params.c1 * draw.r1 * (pbest_dbm - lbest_dbm) +
         params.c2 * draw.r2 * (gbest_dbm - lbest_dbm);
}

double optimal_power(double pbest_dbm, double velocity_db) {
  return clamp_power(pbest_dbm + velocity_db);
}

PsoDraw draw_coefficients(const PsoParams& params, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> inertia(params.w_min, params.w_max);
  std::uniform_real_distribution<double> attraction(params.rand_min, params.rand_max);
  PsoDraw d{};
  d.w = inertia(rng);
  d.r1 = attraction(rng);
  d.r2 = attraction(rng);
  return d;
}

double select_power(const ChannelAnalysis& analysis, PsoState& state, const PsoParams& params,
                    const PsoDraw& draw) {
  const double lbest = clamp_power(analysis.local_best_power_dbm);
  if (!state.initialized) {
    state.pbest_dbm = lbest;
    state.initialized = true;
    return params.p_init_dbm;
  }
  const double velocity = pso_velocity(lbest, state.pbest_dbm, state.gbest_dbm, draw, params);
  const double power = optimal_power(state.pbest_dbm, velocity);
  state.pbest_dbm = lbest;
  return power;
}

double select_power(const ChannelAnalysis& analysis, PsoState& state, const PsoParams& params,
                    std::mt19937_64& rng) {
  if (!state.initialized) return select_power(analysis, state, params, PsoDraw{0.0, 0.0, 0.0});
  return select_power(analysis, state, params, draw_coefficients(params, rng));
}

}  // namespace beaconsim
