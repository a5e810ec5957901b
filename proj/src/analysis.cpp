#include "radium/analysis.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace radium {

namespace {

void check_attack_args(double q, double t_star) {
  if (!(q > 0.0 && q <= 1.0)) throw std::domain_error("attack: q must lie in (0, 1]");
  if (!(t_star >= 0.0) || !std::isfinite(t_star)) {
    throw std::domain_error("attack: t* must be >= 0");
  }
}

}  // namespace

double attacker_expected_time(double q, double t_star, const ProtocolParams& params) {
  check_attack_args(q, t_star);
  const double k = params.k();
  if (t_star == 0.0 && k > 1.0) {
    throw InfiniteDifficulty("attacker_expected_time: sub-target is zero at t* = 0");
  }
  const double gamma_k = std::pow(std::tgamma(1.0 + 1.0 / k), k);
  return std::pow(params.target_time(), k) / (q * k * gamma_k * std::pow(t_star, k - 1.0));
}

AttackBound future_mine_bound(double q, double t_star, const ProtocolParams& params) {
  AttackBound b;
  b.q = q;
  b.t_star = t_star;
  check_attack_args(q, t_star);
  if (q >= 1.0) throw std::domain_error("future_mine_bound: q must be < 1");
  if (t_star == 0.0) {
    b.attacker_mean_time = params.k() > 1.0 ? INFINITY : attacker_expected_time(q, 0.0, params);
    b.compliant_survival = 1.0;
    return b;
  }
  b.attacker_mean_time = attacker_expected_time(q, t_star, params);
  b.attacker_success = -std::expm1(-t_star / b.attacker_mean_time);
  b.compliant_survival = 1.0 - weibull_cdf(t_star, params.k(), (1.0 - q) * params.a());
  b.bound = b.attacker_success * b.compliant_survival;
  return b;
}

double future_mine_reward_rate(double t, NormalizedTarget base, const ProtocolParams& params) {
  return params.base_reward() * subtarget(base, t, params).fraction();
}

double clamp_time(NormalizedTarget base, const ProtocolParams& params) {
  const double k = params.k();
  if (k == 1.0) return INFINITY;
  const double scale = k * base.fraction() * std::pow(std::tgamma(1.0 + 1.0 / k), k);
  return params.target_time() * std::pow(1.0 / scale, 1.0 / (k - 1.0));
}

double equilibrium_tau(double prevailing_rate, const ProtocolParams& params, NormalizedTarget base) {
  if (params.k() == 1.0) {
    throw std::domain_error("equilibrium_tau: reward rate is constant for k = 1");
  }
  if (base.fraction() == 0.0) throw std::domain_error("equilibrium_tau: zero base target");
  double lo = 1.0;
  double hi = clamp_time(base, params);
  if (!(prevailing_rate > 0.0) || prevailing_rate < future_mine_reward_rate(lo, base, params) ||
      prevailing_rate > params.base_reward()) {
    throw std::out_of_range("equilibrium_tau: rate not achievable on [1 s, clamp]");
  }
  if (hi <= lo) return lo;
  while (hi - lo > 1e-7) {
    const double mid = 0.5 * (lo + hi);
    if (future_mine_reward_rate(mid, base, params) < prevailing_rate) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double bobtail_equivalent_j() {
  constexpr double pi = std::numbers::pi;
  return (7.0 * pi - 12.0 + std::sqrt(144.0 - 72.0 * pi + 25.0 * pi * pi)) / (6.0 * (4.0 - pi));
}

double bobtail_variance_ratio(double j) {
  return (8.0 * j + 4.0) / (6.0 * (j * j + j));
}

double exponential_quantile(double mean, double p) {
  if (!(mean > 0.0)) throw std::domain_error("exponential_quantile: mean must be > 0");
  if (!(p >= 0.0 && p < 1.0)) throw std::domain_error("exponential_quantile: p must lie in [0, 1)");
  return -mean * std::log1p(-p);
}

double switch_mine_expected_rate(double multiple, const ProtocolParams& params) {
  if (!(multiple >= 1.0)) throw std::domain_error("switch_mine_expected_rate: x must be >= 1");
  const double k = params.k();
  const double reward_exp = (k - 1.0) / k;
  const double time_exp = 1.0 / k;
  const double rewards =
      params.base_reward() * (std::pow(multiple, reward_exp) + std::pow(multiple, -reward_exp));
  const double times =
      params.target_time() * (std::pow(multiple, time_exp) + std::pow(multiple, -time_exp));
  return rewards / times;
}

double no_switch_reward_rate(const ProtocolParams& params) {
  const double k = params.k();
  return k * std::pow(std::tgamma(1.0 + 1.0 / k), k) * params.base_reward() /
         params.target_time();
}

}  // namespace radium
