#include "radium/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace radium {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::domain_error(what);
}

}  // namespace

double tuning_constant(double k, double target_time) {
  require(std::isfinite(k) && k >= 1.0, "tuning_constant: k must be >= 1");
  require(std::isfinite(target_time) && target_time > 0.0,
          "tuning_constant: target_time must be > 0");
  return k * std::pow(std::tgamma(1.0 + 1.0 / k) / target_time, k);
}

ProtocolParams::ProtocolParams(double k, double target_time, double base_reward)
    : k_(k), target_time_(target_time), base_reward_(base_reward),
      a_(tuning_constant(k, target_time)) {
  require(std::isfinite(base_reward) && base_reward > 0.0,
          "ProtocolParams: base_reward must be > 0");
}

NormalizedTarget NormalizedTarget::from_fraction(double g) {
  require(std::isfinite(g) && g >= 0.0 && g <= 1.0,
          "NormalizedTarget: fraction must lie in [0, 1]");
  return NormalizedTarget(g);
}

NormalizedTarget NormalizedTarget::from_difficulty(double difficulty) {
  require(std::isfinite(difficulty) && difficulty >= 1.0,
          "NormalizedTarget: difficulty must be >= 1");
  return NormalizedTarget(1.0 / difficulty);
}

double NormalizedTarget::difficulty() const {
  if (g_ == 0.0) throw InfiniteDifficulty("difficulty of a zero target is infinite");
  return 1.0 / g_;
}

NormalizedTarget subtarget(NormalizedTarget base, double t, const ProtocolParams& params) {
  require(std::isfinite(t) && t >= 0.0, "subtarget: t must be >= 0");
  const double k = params.k();
  if (k == 1.0) return base;
  const double g = k * base.fraction() * std::pow(std::tgamma(1.0 + 1.0 / k), k) *
                   std::pow(t / params.target_time(), k - 1.0);
  // Past the edge of the hash space every hash wins.
  return NormalizedTarget::from_fraction(std::min(g, 1.0));
}

double sub_difficulty(double t, NormalizedTarget base, const ProtocolParams& params) {
  const NormalizedTarget g = subtarget(base, t, params);
  if (g.fraction() == 0.0) {
    throw InfiniteDifficulty("sub_difficulty: sub-target is zero at t = " + std::to_string(t));
  }
  return g.difficulty();
}

double reward(double t, NormalizedTarget base, const ProtocolParams& params) {
  require(std::isfinite(t) && t >= kTimestampGranularity,
          "reward: t below timestamp granularity");
  return params.base_reward() * sub_difficulty(t, base, params) /
         sub_difficulty(params.target_time(), base, params);
}

double weibull_cdf(double t, double k, double rate) {
  if (t <= 0.0) return 0.0;
  return -std::expm1(-rate * std::pow(t, k) / k);
}

double weibull_mean(double k, double rate) {
  return std::pow(k / rate, 1.0 / k) * std::tgamma(1.0 + 1.0 / k);
}

double sample_weibull(Rng& rng, double k, double rate) {
  return std::pow(-k * std::log(rng.uniform()) / rate, 1.0 / k);
}

double sample_weibull_after(Rng& rng, double k, double rate, double after) {
  // Cumulative hazard rate t^k / k is additive past `after`.
  return std::pow(std::pow(after, k) - k * std::log(rng.uniform()) / rate, 1.0 / k);
}

double sample_block_time(Rng& rng, double hash_fraction, const ProtocolParams& params) {
  require(hash_fraction > 0.0 && hash_fraction <= 1.0,
          "sample_block_time: hash fraction must lie in (0, 1]");
  return sample_weibull(rng, params.k(), hash_fraction * params.a());
}

double pit_transform(double t, const ProtocolParams& params) {
  require(std::isfinite(t) && t >= 0.0, "pit_transform: t must be >= 0");
  return params.a() * std::pow(t, params.k()) * params.target_time() / params.k();
}

double variance_ratio(double k) {
  require(std::isfinite(k) && k >= 1.0, "variance_ratio: k must be >= 1");
  const double g1 = std::tgamma(1.0 + 1.0 / k);
  return std::tgamma(1.0 + 2.0 / k) / (g1 * g1) - 1.0;
}

void validate_miners(std::span<const MinerSpec> miners) {
  require(!miners.empty(), "validate_miners: no miners");
  double total = 0.0;
  for (const MinerSpec& m : miners) {
    require(m.hash_fraction > 0.0 && m.hash_fraction <= 1.0,
            "validate_miners: hash fraction must lie in (0, 1]");
    total += m.hash_fraction;
    if (const auto* f = std::get_if<FutureMine>(&m.strategy)) {
      require(f->t_star > 0.0, "validate_miners: future-mine t* must be > 0");
    } else if (const auto* d = std::get_if<Defacto>(&m.strategy)) {
      require(d->tau > 0.0, "validate_miners: defacto tau must be > 0");
    } else if (const auto* s = std::get_if<Switch>(&m.strategy)) {
      require(s->multiple >= 1.0, "validate_miners: switch multiple must be >= 1");
    }
  }
  require(std::abs(total - 1.0) <= 1e-12, "validate_miners: hash fractions must sum to 1");
}

}  // namespace radium
