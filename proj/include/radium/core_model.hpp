#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <variant>

#include "radium/rng.hpp"

namespace radium {

/// Raised when a sub-difficulty is requested where the sub-target is zero
/// (t = 0 with k > 1). Not a number, so it is its own error.
class InfiniteDifficulty : public std::range_error {
 public:
  using std::range_error::range_error;
};

/// k * (Gamma(1 + 1/k) / target_time)^k, the rate constant that makes the
/// Weibull(k, a) mean equal target_time.
double tuning_constant(double k, double target_time);

/// Protocol constants. The tuning constant is always derived from k and the
/// target time; there is no way to set it directly.
class ProtocolParams {
 public:
  explicit ProtocolParams(double k = 2.0, double target_time = 600.0,
                          double base_reward = 12.5);

  double k() const noexcept { return k_; }
  double target_time() const noexcept { return target_time_; }
  double base_reward() const noexcept { return base_reward_; }
  double a() const noexcept { return a_; }

  /// Block rate of conventional PoW at rest, 1 / target_time.
  double conventional_rate() const noexcept { return 1.0 / target_time_; }

 private:
  double k_;
  double target_time_;
  double base_reward_;
  double a_;
};

/// A target expressed as a fraction of the (unit) hash space. Difficulty is
/// the reciprocal. A zero fraction is representable (a sub-target at t = 0)
/// but has no finite difficulty.
class NormalizedTarget {
 public:
  static NormalizedTarget from_fraction(double g);
  static NormalizedTarget from_difficulty(double difficulty);

  double fraction() const noexcept { return g_; }
  double difficulty() const;

  friend bool operator==(NormalizedTarget, NormalizedTarget) = default;

 private:
  explicit NormalizedTarget(double g) : g_(g) {}
  double g_;
};

NormalizedTarget subtarget(NormalizedTarget base, double t, const ProtocolParams& params);
double sub_difficulty(double t, NormalizedTarget base, const ProtocolParams& params);

/// Smallest timestamp step the reward function is evaluated at, in seconds.
inline constexpr double kTimestampGranularity = 1.0;

/// Block reward C * d(t) / d(T) for a block mined t seconds after its parent.
double reward(double t, NormalizedTarget base, const ProtocolParams& params);

// Weibull(k, rate) in the (shape, rate) form with CDF 1 - exp(-rate t^k / k).
double weibull_cdf(double t, double k, double rate);
double weibull_mean(double k, double rate);
double sample_weibull(Rng& rng, double k, double rate);
/// Draw conditioned on the variable exceeding `after`.
double sample_weibull_after(Rng& rng, double k, double rate, double after);

/// Block time for a miner holding fraction q of the at-rest hash rate:
/// a Weibull(k, q a) draw by inverse CDF.
double sample_block_time(Rng& rng, double hash_fraction, const ProtocolParams& params);

/// Conventional-PoW-equivalent inter-arrival time a t^k T / k.
double pit_transform(double t, const ProtocolParams& params);

/// Var(Weibull block time) / Var(exponential block time) at equal means.
double variance_ratio(double k);

struct Compliant {};
struct FutureMine {
  double t_star;
};
struct Defacto {
  double tau;
};
struct Switch {
  double multiple;
};
struct PrivateAttacker {};

using Strategy = std::variant<Compliant, FutureMine, Defacto, Switch, PrivateAttacker>;

struct MinerSpec {
  double hash_fraction = 1.0;
  Strategy strategy = Compliant{};
};

/// Checks per-miner domains and that fractions sum to one within 1e-12.
void validate_miners(std::span<const MinerSpec> miners);

}  // namespace radium
