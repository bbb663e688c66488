#pragma once

#include <random>
#include <span>

#include "beaconsim/channel_analysis.hpp"
#include "beaconsim/core_model.hpp"
#include "beaconsim/pso_state.hpp"

namespace beaconsim {

/// Random coefficients of one update: inertia weight and the two attraction draws.
struct PsoDraw {
  double w;
  double r1;
  double r2;
};

/// Highest PopBest advertised by the given neighbors.
double extract_gbest(std::span<const NeighborState> neighbors);
double extract_gbest(const std::map<VehicleId, NeighborState>& neighbors);

/// lbest*w + c1*r1*(pbest - lbest) + c2*r2*(gbest - lbest).
///
/// The inertia term multiplies the raw local-best power, not a previous
/// velocity, so the result carries a dBm-scaled offset.
double pso_velocity(double lbest_dbm, double pbest_dbm, double gbest_dbm, const PsoDraw& draw,
                    const PsoParams& params);

/// pbest + velocity, clamped to the regulatory range.
double optimal_power(double pbest_dbm, double velocity_db);

PsoDraw draw_coefficients(const PsoParams& params, std::mt19937_64& rng);

/// Chains velocity and optimal power for this epoch, then stores the epoch's
/// local best as pBest. The first call only seeds pBest and returns p_init.
double select_power(const ChannelAnalysis& analysis, PsoState& state, const PsoParams& params,
                    const PsoDraw& draw);
double select_power(const ChannelAnalysis& analysis, PsoState& state, const PsoParams& params,
                    std::mt19937_64& rng);

}  // namespace beaconsim
