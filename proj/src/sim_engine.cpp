#include "radium/sim_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "radium/daa.hpp"
#include "radium/parallel.hpp"
#include "radium/rng.hpp"

namespace radium {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

SummaryStats summarize_trials(const std::vector<TrialRecord>& records) {
  SummaryStats s;
  s.trials = records.size();
  std::vector<double> times;
  times.reserve(records.size());
  for (const TrialRecord& r : records) {
    if (r.success) ++s.successes;
    times.push_back(r.block_time);
  }
  if (s.trials > 0) {
    s.frequency = static_cast<double>(s.successes) / static_cast<double>(s.trials);
    s.block_time = summarize(std::move(times));
  }
  return s;
}

template <class TrialFn>
std::vector<TrialRecord> run_trials(std::size_t trials, unsigned threads, TrialFn&& trial) {
  std::vector<TrialRecord> records(trials);
  parallel_for(trials, threads, [&](std::size_t i) { records[i] = trial(i); });
  return records;
}

}  // namespace

std::string_view to_string(Protocol p) {
  return p == Protocol::bitcoin ? "bitcoin" : "radium";
}

Protocol parse_protocol(std::string_view name) {
  if (name == "bitcoin") return Protocol::bitcoin;
  if (name == "radium") return Protocol::radium;
  throw std::invalid_argument("unknown protocol: " + std::string(name));
}

std::string_view to_string(RaceClock c) {
  return c == RaceClock::per_height ? "per-height" : "per-chain";
}

RaceClock parse_race_clock(std::string_view name) {
  if (name == "per-height") return RaceClock::per_height;
  if (name == "per-chain") return RaceClock::per_chain;
  throw std::invalid_argument("unknown race clock: " + std::string(name));
}

ProtocolParams law_params(Protocol protocol, const ProtocolParams& params) {
  if (protocol == Protocol::bitcoin) {
    return ProtocolParams(1.0, params.target_time(), params.base_reward());
  }
  return params;
}

void ExperimentConfig::validate() const {
  require(trials >= 1, "trials must be >= 1");
  require(blocks_per_trial >= 1, "blocks_per_trial must be >= 1");
  require(window >= 1, "window must be >= 1");
  require(orphan_window > 0.0 && std::isfinite(orphan_window), "orphan_window must be > 0");
}

// ---------------------------------------------------------------- future mining

TrialRecord future_mine_trial(double q, double t_star, const ProtocolParams& params,
                              std::uint64_t seed, std::size_t trial_index) {
  Rng rng = Rng::for_stream(seed, trial_index);
  const double k = params.k();
  const double attacker_mean = attacker_expected_time(q, t_star, params);
  const double attacker_time = -attacker_mean * std::log(rng.uniform());
  const double compliant_time = sample_weibull(rng, k, (1.0 - q) * params.a());

  TrialRecord r;
  r.trial_index = trial_index;
  if (compliant_time < t_star) {
    r.block_time = compliant_time;
    r.winner = 1;
  } else if (attacker_time < t_star) {
    r.success = true;
    r.future_mined = true;
    r.block_time = t_star;
    r.winner = 0;
  } else {
    const double attacker_late = sample_weibull_after(rng, k, q * params.a(), t_star);
    r.success = attacker_late < compliant_time;
    r.block_time = std::min(attacker_late, compliant_time);
    r.winner = r.success ? 0 : 1;
  }
  return r;
}

FutureMineResult run_future_mine_attack(double q, double t_star, const ProtocolParams& params,
                                        std::size_t trials, std::uint64_t seed,
                                        unsigned threads) {
  require(q > 0.0 && q < 1.0, "future-mine: q must lie in (0, 1)");
  require(t_star > 0.0 && std::isfinite(t_star), "future-mine: t* must be > 0");
  require(trials >= 1, "future-mine: trials must be >= 1");
  const auto records = run_trials(trials, threads, [&](std::size_t i) {
    return future_mine_trial(q, t_star, params, seed, i);
  });
  FutureMineResult out;
  out.q = q;
  out.t_star = t_star;
  out.stats = summarize_trials(records);
  out.future_mined = static_cast<std::size_t>(std::count_if(
      records.begin(), records.end(), [](const TrialRecord& r) { return r.future_mined; }));
  out.bound = future_mine_bound(q, t_star, params);
  return out;
}

// ---------------------------------------------------------- defacto future mining

TrialRecord defacto_trial(double tau, std::span<const double> fractions,
                          std::optional<std::size_t> preemptor, const ProtocolParams& params,
                          std::uint64_t seed, std::size_t trial_index) {
  Rng rng = Rng::for_stream(seed, trial_index);
  const double k = params.k();
  TrialRecord r;
  r.trial_index = trial_index;

  std::vector<std::size_t> found;
  for (std::size_t i = 0; i < fractions.size(); ++i) {
    const double mean = attacker_expected_time(fractions[i], tau, params);
    if (-mean * std::log(rng.uniform()) < tau) found.push_back(i);
  }
  if (!found.empty()) {
    r.future_mined = true;
    r.block_time = tau;
    r.race = found.size() > 1;
    r.success = r.race;
    if (preemptor && std::find(found.begin(), found.end(), *preemptor) != found.end()) {
      r.winner = static_cast<int>(*preemptor);
    } else {
      r.winner = static_cast<int>(found[rng.below(found.size())]);
    }
    return r;
  }

  r.block_time = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < fractions.size(); ++i) {
    const double t = sample_weibull_after(rng, k, fractions[i] * params.a(), tau);
    if (t < r.block_time) {
      r.block_time = t;
      r.winner = static_cast<int>(i);
    }
  }
  return r;
}

DefactoResult run_defacto_future_mine(double tau, std::span<const double> fractions,
                                      const ProtocolParams& params, std::size_t trials,
                                      std::uint64_t seed, std::optional<std::size_t> preemptor,
                                      unsigned threads) {
  require(tau > 0.0 && std::isfinite(tau), "defacto: tau must be > 0");
  require(trials >= 1, "defacto: trials must be >= 1");
  std::vector<MinerSpec> miners;
  for (double f : fractions) miners.push_back({f, Defacto{tau}});
  validate_miners(miners);
  require(!preemptor || *preemptor < fractions.size(), "defacto: preemptor index out of range");

  const auto records = run_trials(trials, threads, [&](std::size_t i) {
    return defacto_trial(tau, fractions, preemptor, params, seed, i);
  });

  DefactoResult out;
  out.tau = tau;
  out.preemptor = preemptor;
  out.stats = summarize_trials(records);
  out.wins.assign(fractions.size(), 0);
  std::size_t future_mined = 0;
  for (const TrialRecord& r : records) {
    ++out.wins[static_cast<std::size_t>(r.winner)];
    if (r.future_mined) ++future_mined;
    if (r.race) {
      ++out.races;
      // The preemptor is in every race it wins and in no race it loses.
      if (preemptor && r.winner == static_cast<int>(*preemptor)) ++out.races_won_by_preemptor;
    }
  }
  const auto n = static_cast<double>(trials);
  out.race_rate = static_cast<double>(out.races) / n;
  out.future_mined_fraction = static_cast<double>(future_mined) / n;
  for (std::size_t w : out.wins) out.win_rate.push_back(static_cast<double>(w) / n);
  return out;
}

// ------------------------------------------------------------- closed-loop DAA

std::vector<double> daa_block_times(Protocol protocol, const ProtocolParams& params,
                                    std::size_t blocks_per_trial, std::size_t trials,
                                    std::size_t window, std::uint64_t seed, unsigned threads) {
  require(blocks_per_trial >= 1 && trials >= 1, "daa: blocks and trials must be >= 1");
  const ProtocolParams law = law_params(protocol, params);
  const double target = params.target_time();
  std::vector<double> times(blocks_per_trial * trials);

  parallel_for(trials, threads, [&](std::size_t trial) {
    Rng rng = Rng::for_stream(seed, trial);
    // Total hash rate 1, so the at-rest difficulty equals the target time.
    ChainState state(target, window);
    for (std::size_t b = 0; b < blocks_per_trial; ++b) {
      const double rate = law.a() * target / state.difficulty();
      const double t = sample_weibull(rng, law.k(), rate);
      times[trial * blocks_per_trial + b] = t;
      state = state.record_block(t);
      const double next = protocol == Protocol::bitcoin ? bitcoin_adjust(state, law)
                                                        : radium_adjust(state, law);
      state = state.with_difficulty(next);
    }
  });
  return times;
}

DaaResult run_daa_experiment(Protocol protocol, const ProtocolParams& params,
                             std::size_t blocks_per_trial, std::size_t trials,
                             std::size_t window, std::uint64_t seed, unsigned threads) {
  const auto times = daa_block_times(protocol, params, blocks_per_trial, trials, window, seed,
                                     threads);
  DaaResult out;
  out.protocol = protocol;
  std::vector<double> column(trials);
  std::vector<double> p5s, medians, p95s;
  for (std::size_t b = 0; b < blocks_per_trial; ++b) {
    for (std::size_t t = 0; t < trials; ++t) column[t] = times[t * blocks_per_trial + b];
    const Percentiles p = summarize(column);
    out.per_block.push_back(p);
    p5s.push_back(p.p5);
    medians.push_back(p.median);
    p95s.push_back(p.p95);
  }
  out.summary = {percentile(std::move(p5s), 0.5), percentile(std::move(medians), 0.5),
                 percentile(std::move(p95s), 0.5)};
  return out;
}

// -------------------------------------------------------------------- orphans

OrphanResult run_orphan_experiment(Protocol protocol, const ProtocolParams& params,
                                   std::size_t blocks, double orphan_window, std::uint64_t seed,
                                   unsigned threads) {
  require(blocks >= 1, "orphan: blocks must be >= 1");
  require(orphan_window > 0.0, "orphan: window must be > 0");
  const ProtocolParams law = law_params(protocol, params);
  const double half_rate = 0.5 * law.a();
  const std::size_t batches = (blocks + kOrphanBatch - 1) / kOrphanBatch;
  std::vector<std::size_t> counts(batches, 0);

  parallel_for(batches, threads, [&](std::size_t batch) {
    Rng rng = Rng::for_stream(seed, batch);
    const std::size_t begin = batch * kOrphanBatch;
    const std::size_t end = std::min(blocks, begin + kOrphanBatch);
    std::size_t n = 0;
    for (std::size_t i = begin; i < end; ++i) {
      const double t1 = sample_weibull(rng, law.k(), half_rate);
      const double t2 = sample_weibull(rng, law.k(), half_rate);
      if (std::abs(t1 - t2) < orphan_window) ++n;
    }
    counts[batch] = n;
  });

  OrphanResult out;
  out.protocol = protocol;
  out.blocks = blocks;
  out.orphans = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
  out.rate = static_cast<double>(out.orphans) / static_cast<double>(blocks);
  return out;
}

// ---------------------------------------------------------------- doublespend

TrialRecord doublespend_trial(double q, std::size_t z, Protocol protocol,
                              const ProtocolParams& params, DoublespendLimits limits,
                              std::uint64_t seed, std::size_t trial_index) {
  Rng rng = Rng::for_stream(seed, trial_index);
  const ProtocolParams law = law_params(protocol, params);
  const double k = law.k();
  const double attacker_rate = q * law.a();
  const double honest_rate = (1.0 - q) * law.a();

  TrialRecord r;
  r.trial_index = trial_index;
  std::size_t honest = 0;
  std::size_t attacker = 1;  // pre-mined
  double next_honest = sample_weibull(rng, k, honest_rate);
  double next_attacker = sample_weibull(rng, k, attacker_rate);
  double now = 0.0;
  for (;;) {
    if (honest >= z && attacker > honest) {
      r.success = true;
      break;
    }
    if (honest >= attacker + limits.max_deficit || honest > limits.horizon) break;
    if (next_attacker < next_honest) {
      ++attacker;
      now = next_attacker;
    } else {
      ++honest;
      now = next_honest;
    }
    r.block_time = now;
    const bool attacker_won = now == next_attacker;
    if (limits.clock == RaceClock::per_height) {
      next_attacker = now + sample_weibull(rng, k, attacker_rate);
      next_honest = now + sample_weibull(rng, k, honest_rate);
    } else if (attacker_won) {
      next_attacker = now + sample_weibull(rng, k, attacker_rate);
    } else {
      next_honest = now + sample_weibull(rng, k, honest_rate);
    }
  }
  r.winner = r.success ? 0 : 1;
  return r;
}

DoublespendResult run_doublespend(double q, std::size_t z, Protocol protocol,
                                  const ProtocolParams& params, std::size_t trials,
                                  std::uint64_t seed, DoublespendLimits limits,
                                  unsigned threads) {
  require(q > 0.0 && q < 1.0, "doublespend: q must lie in (0, 1)");
  require(trials >= 1, "doublespend: trials must be >= 1");
  require(limits.max_deficit >= 1, "doublespend: max_deficit must be >= 1");
  const auto records = run_trials(trials, threads, [&](std::size_t i) {
    return doublespend_trial(q, z, protocol, params, limits, seed, i);
  });
  DoublespendResult out;
  out.protocol = protocol;
  out.q = q;
  out.z = z;
  out.stats = summarize_trials(records);
  return out;
}

// -------------------------------------------------------------- switch mining

SwitchMineResult run_switch_mine(double x, const ProtocolParams& params, std::size_t trials,
                                 std::uint64_t seed, unsigned threads) {
  require(x >= 1.0 && std::isfinite(x), "switch-mine: x must be >= 1");
  require(trials >= 1, "switch-mine: trials must be >= 1");
  const NormalizedTarget base = NormalizedTarget::from_fraction(1.0 / params.target_time());
  struct Episode {
    double t1, t2, r1, r2;
  };
  std::vector<Episode> episodes(trials);
  parallel_for(trials, threads, [&](std::size_t i) {
    Rng rng = Rng::for_stream(seed, i);
    Episode& e = episodes[i];
    e.t1 = sample_weibull(rng, params.k(), x * params.a());
    e.t2 = sample_weibull(rng, params.k(), params.a() / x);
    e.r1 = reward(std::max(e.t1, kTimestampGranularity), base, params);
    e.r2 = reward(std::max(e.t2, kTimestampGranularity), base, params);
  });

  SwitchMineResult out;
  out.k = params.k();
  out.x = x;
  out.trials = trials;
  double sum_r = 0.0, sum_t = 0.0, sum_rate = 0.0;
  double t1 = 0.0, t2 = 0.0, r1 = 0.0, r2 = 0.0;
  for (const Episode& e : episodes) {
    sum_r += e.r1 + e.r2;
    sum_t += e.t1 + e.t2;
    sum_rate += (e.r1 + e.r2) / (e.t1 + e.t2);
    t1 += e.t1;
    t2 += e.t2;
    r1 += e.r1;
    r2 += e.r2;
  }
  const auto n = static_cast<double>(trials);
  out.reward_per_second = sum_r / sum_t;
  out.mean_episode_rate = sum_rate / n;
  out.mean_block1_time = t1 / n;
  out.mean_block2_time = t2 / n;
  out.mean_block1_reward = r1 / n;
  out.mean_block2_reward = r2 / n;
  return out;
}

// ------------------------------------------------------------------- fairness

std::vector<std::size_t> run_compliant_blocks(std::span<const MinerSpec> miners,
                                              const ProtocolParams& params, std::size_t blocks,
                                              std::uint64_t seed, unsigned threads) {
  validate_miners(miners);
  for (const MinerSpec& m : miners) {
    require(std::holds_alternative<Compliant>(m.strategy), "fairness: miners must be compliant");
  }
  std::vector<int> winners(blocks, -1);
  parallel_for(blocks, threads, [&](std::size_t b) {
    Rng rng = Rng::for_stream(seed, b);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < miners.size(); ++i) {
      const double t = sample_block_time(rng, miners[i].hash_fraction, params);
      if (t < best) {
        best = t;
        winners[b] = static_cast<int>(i);
      }
    }
  });
  std::vector<std::size_t> wins(miners.size(), 0);
  for (int w : winners) ++wins[static_cast<std::size_t>(w)];
  return wins;
}

}  // namespace radium
