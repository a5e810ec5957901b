#pragma once

#include "radium/core_model.hpp"

namespace radium {

/// Closed-form pieces of the future-mining bound at one (q, t*) point.
struct AttackBound {
  double q = 0.0;
  double t_star = 0.0;
  double bound = 0.0;
  double attacker_mean_time = 0.0;
  double attacker_success = 0.0;  // P(T_A < t*)
  double compliant_survival = 0.0;  // P(T_M > t*)
};

/// Mean time for a miner with fraction q to find a block at the fixed
/// sub-target g(t*): T^k / (q k Gamma(1+1/k)^k t*^(k-1)).
/// t* = 0 with k > 1 throws InfiniteDifficulty.
double attacker_expected_time(double q, double t_star, const ProtocolParams& params);

/// Lower bound P(T_A < t*) P(T_M > t*) on the future-mining success
/// probability, with T_A exponential and T_M ~ Weibull(k, (1 - q) a).
AttackBound future_mine_bound(double q, double t_star, const ProtocolParams& params);

/// Per-hash reward rate of future mining to time t, C g(t).
double future_mine_reward_rate(double t, NormalizedTarget base, const ProtocolParams& params);

/// Elapsed time at which the sub-target reaches the whole hash space.
double clamp_time(NormalizedTarget base, const ProtocolParams& params);

/// Equilibrium future-mining time: the tau in [1 s, clamp_time] with
/// C g(tau) = prevailing_rate, by bisection to 1e-6 s. Rates outside
/// [C g(1), C] throw std::out_of_range; k = 1 has no unique root and throws
/// std::domain_error.
double equilibrium_tau(double prevailing_rate, const ProtocolParams& params, NormalizedTarget base);

/// Number of Bobtail proofs per block whose variance reduction equals the
/// k = 2 Weibull reduction 4/pi - 1.
double bobtail_equivalent_j();

/// Bobtail variance reduction (8j + 4) / (6 (j^2 + j)).
double bobtail_variance_ratio(double j);

/// p-quantile of an exponential distribution with the given mean.
double exponential_quantile(double mean, double p);

/// Expected reward per second for one switch-mining episode, evaluated the
/// way the original analysis does: block rewards at the expected block times
///   C (x^((k-1)/k) + x^(-(k-1)/k)) / (T (x^(1/k) + x^(-1/k))).
double switch_mine_expected_rate(double multiple, const ProtocolParams& params);

/// Expected reward per second for compliant mining with rewards paid at
/// realized block times: k Gamma(1+1/k)^k C / T. Equals C / T only at k = 1.
double no_switch_reward_rate(const ProtocolParams& params);

}  // namespace radium
