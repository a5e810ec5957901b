#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "radium/analysis.hpp"
#include "radium/core_model.hpp"
#include "radium/stats.hpp"

namespace radium {

enum class Protocol { bitcoin, radium };

std::string_view to_string(Protocol p);
Protocol parse_protocol(std::string_view name);

/// Block-time law of a protocol: Bitcoin is the k = 1 (exponential) case
/// with the same target time and reward.
ProtocolParams law_params(Protocol protocol, const ProtocolParams& params);

/// One experiment's parameterization. `sweep` holds the grid of the
/// experiment's independent variable; the CLI fills it per subcommand.
struct ExperimentConfig {
  Protocol protocol = Protocol::radium;
  ProtocolParams params{};
  std::size_t trials = 1000;
  std::size_t blocks_per_trial = 30;
  std::uint64_t seed = 1;
  std::vector<double> sweep;
  std::size_t window = 2;
  double orphan_window = 3.0;
  unsigned threads = 0;

  void validate() const;
};

/// Outcome of a single trial. Every field is a function of
/// (experiment arguments, master seed, trial_index) only.
struct TrialRecord {
  std::size_t trial_index = 0;
  bool success = false;
  /// Future-mine: the block came from the attacker's fixed-target phase.
  bool future_mined = false;
  /// Defacto: two or more miners held a block at tau.
  bool race = false;
  int winner = -1;
  double block_time = 0.0;
  double reward = 0.0;
};

struct SummaryStats {
  std::size_t trials = 0;
  std::size_t successes = 0;
  double frequency = 0.0;
  Percentiles block_time{};
};

// ---------------------------------------------------------------- future mining

struct FutureMineResult {
  double q = 0.0;
  double t_star = 0.0;
  SummaryStats stats;
  /// Trials won with a block found before t* (excludes the post-t* race).
  std::size_t future_mined = 0;
  AttackBound bound;
};

TrialRecord future_mine_trial(double q, double t_star, const ProtocolParams& params,
                              std::uint64_t seed, std::size_t trial_index);

/// An attacker with fraction q mines at the fixed sub-target g(t*) until t*;
/// the compliant rest mines Weibull(k, (1 - q) a). The attacker's block can
/// only be released at t*, so any compliant block before t* beats it. If
/// nobody has a block by t*, the attacker mines compliantly and the trial is
/// decided by that race.
FutureMineResult run_future_mine_attack(double q, double t_star, const ProtocolParams& params,
                                        std::size_t trials, std::uint64_t seed,
                                        unsigned threads = 0);

// ---------------------------------------------------------- defacto future mining

struct DefactoResult {
  double tau = 0.0;
  SummaryStats stats;  // successes = trials decided by a race at tau
  std::size_t races = 0;
  double race_rate = 0.0;
  /// Fraction of blocks found during the fixed-target phase (alpha).
  double future_mined_fraction = 0.0;
  std::vector<std::size_t> wins;
  std::vector<double> win_rate;
  std::optional<std::size_t> preemptor;
  std::size_t races_won_by_preemptor = 0;
};

TrialRecord defacto_trial(double tau, std::span<const double> fractions,
                          std::optional<std::size_t> preemptor, const ProtocolParams& params,
                          std::uint64_t seed, std::size_t trial_index);

/// Every miner mines at g(tau) until tau and compliantly afterwards. Blocks
/// found before tau surface together at tau; a race among them goes to the
/// preemptor (if it is in the race), otherwise to a uniformly chosen racer.
DefactoResult run_defacto_future_mine(double tau, std::span<const double> fractions,
                                      const ProtocolParams& params, std::size_t trials,
                                      std::uint64_t seed,
                                      std::optional<std::size_t> preemptor = std::nullopt,
                                      unsigned threads = 0);

// ------------------------------------------------------------- closed-loop DAA

struct DaaResult {
  Protocol protocol = Protocol::radium;
  std::vector<Percentiles> per_block;
  /// Median over blocks of each per-block statistic.
  Percentiles summary;
};

/// Sample each block at the current difficulty (total hash rate 1,
/// initial difficulty T) and retarget after every block from the mean of the
/// last `window` block times. Rewards are ignored.
DaaResult run_daa_experiment(Protocol protocol, const ProtocolParams& params,
                             std::size_t blocks_per_trial, std::size_t trials,
                             std::size_t window, std::uint64_t seed, unsigned threads = 0);

/// Raw block times, trials x blocks, row-major.
std::vector<double> daa_block_times(Protocol protocol, const ProtocolParams& params,
                                    std::size_t blocks_per_trial, std::size_t trials,
                                    std::size_t window, std::uint64_t seed,
                                    unsigned threads = 0);

// -------------------------------------------------------------------- orphans

struct OrphanResult {
  Protocol protocol = Protocol::radium;
  std::size_t blocks = 0;
  std::size_t orphans = 0;
  double rate = 0.0;
};

inline constexpr std::size_t kOrphanBatch = 1000;

/// Two equal compliant halves draw completion times at the at-rest
/// difficulty for every height; heights whose two times fall within
/// `orphan_window` seconds of each other count as orphans.
OrphanResult run_orphan_experiment(Protocol protocol, const ProtocolParams& params,
                                   std::size_t blocks, double orphan_window, std::uint64_t seed,
                                   unsigned threads = 0);

// ---------------------------------------------------------------- doublespend

/// How each chain's sub-target clock advances during the race.
enum class RaceClock {
  /// Both parties restart their clocks whenever either chain gains a block,
  /// so every height is one independent draw per party.
  per_height,
  /// Each chain's clock restarts only at its own blocks.
  per_chain,
};

std::string_view to_string(RaceClock c);
RaceClock parse_race_clock(std::string_view name);

struct DoublespendLimits {
  std::size_t max_deficit = 20;
  std::size_t horizon = 500;
  RaceClock clock = RaceClock::per_height;
};

struct DoublespendResult {
  Protocol protocol = Protocol::radium;
  double q = 0.0;
  std::size_t z = 0;
  SummaryStats stats;
};

TrialRecord doublespend_trial(double q, std::size_t z, Protocol protocol,
                              const ProtocolParams& params, DoublespendLimits limits,
                              std::uint64_t seed, std::size_t trial_index);

/// Private-chain race at fixed at-rest difficulty. The attacker starts with
/// one pre-mined block and wins once its chain is longer than the honest one
/// after the honest chain holds z blocks; it quits at `max_deficit` blocks
/// behind or when the honest chain passes `horizon` blocks. Under the
/// per-height clock the sequence of block winners is Bernoulli(q) for any k,
/// so Bitcoin and Radium agree trial by trial on a shared seed.
DoublespendResult run_doublespend(double q, std::size_t z, Protocol protocol,
                                  const ProtocolParams& params, std::size_t trials,
                                  std::uint64_t seed, DoublespendLimits limits = {},
                                  unsigned threads = 0);

// -------------------------------------------------------------- switch mining

struct SwitchMineResult {
  double k = 0.0;
  double x = 0.0;
  std::size_t trials = 0;
  /// Sum of rewards over sum of elapsed time, pooled across episodes.
  double reward_per_second = 0.0;
  /// Mean over episodes of (R1 + R2) / (T1 + T2).
  double mean_episode_rate = 0.0;
  double mean_block1_time = 0.0;
  double mean_block2_time = 0.0;
  double mean_block1_reward = 0.0;
  double mean_block2_reward = 0.0;
};

/// Block 1 mined with x times the hash rate the difficulty was set for,
/// block 2 (after the difficulty caught up) with 1/x of it. Rewards are
/// paid at the realized times, with times floored at the 1 s timestamp
/// granularity.
SwitchMineResult run_switch_mine(double x, const ProtocolParams& params, std::size_t trials,
                                 std::uint64_t seed, unsigned threads = 0);

// ------------------------------------------------------------------- fairness

/// Compliant miners race for `blocks` blocks; returns blocks won per miner.
std::vector<std::size_t> run_compliant_blocks(std::span<const MinerSpec> miners,
                                              const ProtocolParams& params, std::size_t blocks,
                                              std::uint64_t seed, unsigned threads = 0);

}  // namespace radium
