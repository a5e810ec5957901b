#include "radium/cli.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"
#include "radium/analysis.hpp"
#include "radium/core_model.hpp"
#include "radium/rng.hpp"
#include "radium/results.hpp"
#include "radium/sim_engine.hpp"

namespace radium::cli {

namespace {

using nlohmann::json;

/// Bad flag values found after parsing; reported like a parse error.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

void check(bool ok, const std::string& what) {
  if (!ok) throw UsageError(what);
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::vector<double> grid(double first, double last, double step) {
  std::vector<double> out;
  for (double v = first; v <= last + 1e-9; v += step) out.push_back(v);
  return out;
}

struct Common {
  double k = 2.0;
  double target_time = 600.0;
  double reward = 12.5;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  std::string out;
  std::string format = "csv";

  ProtocolParams params() const { return ProtocolParams(k, target_time, reward); }
  ProtocolParams params_with_k(double kk) const { return ProtocolParams(kk, target_time, reward); }

  json to_json() const {
    return {{"k", k},          {"target_time", target_time}, {"base_reward", reward},
            {"seed", seed},    {"threads", threads},         {"out", out},
            {"format", format}};
  }
};

void add_common(CLI::App* sub, Common& c, bool with_k = true) {
  if (with_k) {
    sub->add_option("--k", c.k, "Security exponent k (>= 1)")
        ->check(CLI::Range(1.0, 1e6))
        ->capture_default_str();
  }
  sub->add_option("--target-time", c.target_time, "Target block time in seconds")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--reward", c.reward, "Base block reward C")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--seed", c.seed, "Master random seed")->capture_default_str();
  sub->add_option("--threads", c.threads,
                  "Worker threads (0 = all cores; RADIUM_LAB_THREADS caps it)")
      ->capture_default_str();
  sub->add_option("--out", c.out, "Output file (default: table on stdout)");
  sub->add_option("--format", c.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
}

std::vector<Protocol> protocols(const std::vector<std::string>& names) {
  std::vector<Protocol> out;
  for (const auto& n : names) out.push_back(parse_protocol(n));
  return out;
}

/// What a subcommand produced.
struct Outcome {
  ResultTable table;
  std::string summary;
  json config;
  bool tabular = true;
};

// ---------------------------------------------------------------- subcommands

struct FutureMineOpts {
  std::vector<double> q{0.1, 0.2, 0.3, 0.4};
  std::vector<double> t_star = grid(60.0, 1800.0, 60.0);
  std::size_t trials = 500;
};

Outcome run_future_mine(const Common& c, const FutureMineOpts& o) {
  for (double q : o.q) check(q > 0.0 && q < 1.0, "--q values must lie in (0, 1)");
  for (double t : o.t_star) check(t > 0.0, "--t-star values must be > 0");
  const ProtocolParams params = c.params();
  Outcome r;
  r.table.columns = {"q", "t_star", "trials", "successes", "success_rate", "bound"};
  std::size_t point = 0;
  double best_margin = -1.0;
  std::string best;
  for (double q : o.q) {
    for (double t : o.t_star) {
      const auto res = run_future_mine_attack(q, t, params, o.trials,
                                              derive_seed(c.seed, point++), c.threads);
      r.table.add_row({q, t, static_cast<std::int64_t>(res.stats.trials),
                       static_cast<std::int64_t>(res.stats.successes), res.stats.frequency,
                       res.bound.bound});
      if (res.stats.frequency - q > best_margin) {
        best_margin = res.stats.frequency - q;
        best = fmt::format("q={} t*={} rate={}", format_number(q), format_number(t),
                           format_number(res.stats.frequency));
      }
    }
  }
  r.summary = fmt::format("future-mine: {} points, largest excess over fair share at {}",
                          point, best);
  r.config = {{"q", o.q}, {"t_star", o.t_star}, {"trials", o.trials}};
  return r;
}

struct DefactoOpts {
  double tau = 600.0;
  std::vector<double> miners{0.5, 0.5};
  std::optional<std::size_t> preemptor;
  std::size_t trials = 1000;
};

Outcome run_defacto(const Common& c, const DefactoOpts& o) {
  check(o.tau > 0.0, "--tau must be > 0");
  std::vector<MinerSpec> specs;
  for (double f : o.miners) specs.push_back({f, Defacto{o.tau}});
  try {
    validate_miners(specs);
  } catch (const std::domain_error& e) {
    throw UsageError(e.what());
  }
  check(!o.preemptor || *o.preemptor < o.miners.size(), "--preemptor index out of range");
  const auto res =
      run_defacto_future_mine(o.tau, o.miners, c.params(), o.trials, c.seed, o.preemptor,
                              c.threads);
  Outcome r;
  r.table.columns = {"tau",  "miner", "hash_fraction", "trials", "wins", "win_rate",
                     "races", "race_rate", "future_mined_fraction", "p5", "median", "p95"};
  for (std::size_t i = 0; i < o.miners.size(); ++i) {
    r.table.add_row({o.tau, static_cast<std::int64_t>(i), o.miners[i],
                     static_cast<std::int64_t>(o.trials), static_cast<std::int64_t>(res.wins[i]),
                     res.win_rate[i], static_cast<std::int64_t>(res.races), res.race_rate,
                     res.future_mined_fraction, res.stats.block_time.p5,
                     res.stats.block_time.median, res.stats.block_time.p95});
  }
  r.summary = fmt::format("defacto: tau={} race_rate={} alpha={} median_block_time={}",
                          format_number(o.tau), format_number(res.race_rate),
                          format_number(res.future_mined_fraction),
                          format_number(res.stats.block_time.median));
  r.config = {{"tau", o.tau}, {"miners", o.miners}, {"trials", o.trials},
              {"preemptor", o.preemptor ? json(*o.preemptor) : json(nullptr)}};
  return r;
}

struct DaaOpts {
  std::string protocol = "radium";
  std::size_t trials = 1000;
  std::size_t blocks = 30;
  std::size_t window = 2;
};

Outcome run_daa(const Common& c, const DaaOpts& o) {
  const Protocol protocol = parse_protocol(o.protocol);
  const auto res = run_daa_experiment(protocol, c.params(), o.blocks, o.trials, o.window, c.seed,
                                      c.threads);
  Outcome r;
  r.table.columns = {"block_index", "p5", "median", "p95"};
  for (std::size_t b = 0; b < res.per_block.size(); ++b) {
    const Percentiles& p = res.per_block[b];
    r.table.add_row({static_cast<std::int64_t>(b + 1), p.p5, p.median, p.p95});
  }
  const double tt = c.target_time;
  r.summary = fmt::format(
      "daa-sim {}: median over blocks p5={} median={} p95={} (exponential reference {} / {} / {})",
      o.protocol, format_number(res.summary.p5), format_number(res.summary.median),
      format_number(res.summary.p95), format_number(exponential_quantile(tt, 0.05)),
      format_number(exponential_quantile(tt, 0.5)), format_number(exponential_quantile(tt, 0.95)));
  r.config = {{"protocol", o.protocol}, {"trials", o.trials}, {"blocks", o.blocks},
              {"window", o.window}};
  return r;
}

struct OrphanOpts {
  std::vector<std::string> protocol{"bitcoin", "radium"};
  std::size_t blocks = 850000;
  double window = 3.0;
};

Outcome run_orphan(const Common& c, const OrphanOpts& o) {
  check(o.window > 0.0, "--window must be > 0");
  Outcome r;
  r.table.columns = {"protocol", "k", "blocks", "orphans", "orphan_rate"};
  std::string summary = "orphan:";
  std::size_t i = 0;
  for (Protocol p : protocols(o.protocol)) {
    const auto res =
        run_orphan_experiment(p, c.params(), o.blocks, o.window, derive_seed(c.seed, i++),
                              c.threads);
    const double k = law_params(p, c.params()).k();
    r.table.add_row({std::string(to_string(p)), k, static_cast<std::int64_t>(res.blocks),
                     static_cast<std::int64_t>(res.orphans), res.rate});
    summary += fmt::format(" {}={}%", to_string(p), format_number(100.0 * res.rate));
  }
  r.summary = summary;
  r.config = {{"protocol", o.protocol}, {"blocks", o.blocks}, {"orphan_window", o.window}};
  return r;
}

struct DoublespendOpts {
  std::vector<std::string> protocol{"bitcoin", "radium"};
  std::vector<double> q{0.1, 0.2, 0.3, 0.4};
  std::vector<std::size_t> z{1, 2, 3, 4, 5, 6};
  std::size_t trials = 1000;
  std::size_t max_deficit = 20;
  std::size_t horizon = 500;
  std::string clock = "per-height";
};

Outcome run_doublespend_cmd(const Common& c, const DoublespendOpts& o) {
  for (double q : o.q) check(q > 0.0 && q < 1.0, "--q values must lie in (0, 1)");
  check(o.max_deficit >= 1, "--max-deficit must be >= 1");
  const DoublespendLimits limits{o.max_deficit, o.horizon, parse_race_clock(o.clock)};
  Outcome r;
  r.table.columns = {"protocol", "q", "z", "trials", "successes", "success_rate"};
  // Protocols share the stream of each (q, z) point so their difference is
  // not sampling noise.
  std::size_t point = 0;
  for (Protocol p : protocols(o.protocol)) {
    point = 0;
    for (double q : o.q) {
      for (std::size_t z : o.z) {
        const auto res = run_doublespend(q, z, p, c.params(), o.trials,
                                         derive_seed(c.seed, point++), limits, c.threads);
        r.table.add_row({std::string(to_string(p)), q, static_cast<std::int64_t>(z),
                         static_cast<std::int64_t>(res.stats.trials),
                         static_cast<std::int64_t>(res.stats.successes), res.stats.frequency});
      }
    }
  }
  r.summary = fmt::format("doublespend: {} points, {} trials each",
                          r.table.rows.size(), o.trials);
  r.config = {{"protocol", o.protocol}, {"q", o.q},
              {"z", o.z},               {"trials", o.trials},
              {"max_deficit", o.max_deficit}, {"horizon", o.horizon},
              {"clock", o.clock}};
  return r;
}

struct SwitchOpts {
  std::vector<double> k{1.0, 2.0, 3.0, 4.0};
  std::vector<double> x{1.0, 2.0, 5.0, 10.0};
  std::size_t trials = 100000;
};

Outcome run_switch(const Common& c, const SwitchOpts& o) {
  for (double k : o.k) check(k >= 1.0, "--k values must be >= 1");
  for (double x : o.x) check(x >= 1.0, "--x values must be >= 1");
  Outcome r;
  r.table.columns = {"k", "x", "trials", "reward_per_second", "baseline"};
  std::size_t point = 0;
  for (double k : o.k) {
    const ProtocolParams params = c.params_with_k(k);
    for (double x : o.x) {
      const auto res = run_switch_mine(x, params, o.trials, derive_seed(c.seed, point++),
                                       c.threads);
      r.table.add_row({k, x, static_cast<std::int64_t>(o.trials), res.reward_per_second,
                       no_switch_reward_rate(params)});
    }
  }
  r.summary = fmt::format("switch-mine: {} points, {} episodes each", point, o.trials);
  r.config = {{"k", o.k}, {"x", o.x}, {"trials", o.trials}};
  return r;
}

struct VarianceOpts {
  std::vector<double> k{2.0};
  std::size_t draws = 0;
};

Outcome run_variance(const Common& c, const VarianceOpts& o) {
  for (double k : o.k) check(k >= 1.0, "--k values must be >= 1");
  Outcome r;
  r.tabular = false;
  r.table.columns = {"k", "variance_ratio", "draws", "sample_ratio"};
  std::vector<std::string> printed;
  std::size_t point = 0;
  for (double k : o.k) {
    const double exact = variance_ratio(k);
    double sample = NAN;
    if (o.draws > 1) {
      const ProtocolParams params = c.params_with_k(k);
      Rng rng = Rng::for_stream(derive_seed(c.seed, point), 0);
      double mean = 0.0, m2 = 0.0;
      for (std::size_t i = 0; i < o.draws; ++i) {
        const double t = sample_block_time(rng, 1.0, params);
        const double delta = t - mean;
        mean += delta / static_cast<double>(i + 1);
        m2 += delta * (t - mean);
      }
      const double tt = params.target_time();
      sample = m2 / static_cast<double>(o.draws - 1) / (tt * tt);
    }
    ++point;
    r.table.add_row({k, exact, static_cast<std::int64_t>(o.draws), sample});
    printed.push_back(format_number(exact));
  }
  r.summary = printed.size() == 1 ? printed.front() : fmt::format("{}", fmt::join(printed, " "));
  r.config = {{"k", o.k}, {"draws", o.draws}};
  return r;
}

struct BoundsOpts {
  double q = 0.3;
  double t_star = 600.0;
};

Outcome run_bounds(const Common& c, const BoundsOpts& o) {
  check(o.q > 0.0 && o.q < 1.0, "--q must lie in (0, 1)");
  check(o.t_star > 0.0, "--t-star must be > 0");
  const AttackBound b = future_mine_bound(o.q, o.t_star, c.params());
  Outcome r;
  r.tabular = false;
  r.table.columns = {"q", "t_star", "attacker_mean_time", "attacker_success",
                     "compliant_survival", "bound"};
  r.table.add_row({b.q, b.t_star, b.attacker_mean_time, b.attacker_success,
                   b.compliant_survival, b.bound});
  r.summary = format_number(b.bound);
  r.config = {{"q", o.q}, {"t_star", o.t_star}};
  return r;
}

void emit(const std::string& subcommand, const Common& c, Outcome outcome,
          const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const OutputFormat format = parse_format(c.format);
  if (!c.out.empty()) {
    RunManifest m;
    m.subcommand = subcommand;
    m.config = c.to_json();
    m.config.update(outcome.config);
    m.arguments = args;
    m.output = c.out;
    m.format = format;
    m.timestamp = utc_timestamp();
    m.tool_version = kToolVersion;
    write_results(outcome.table, m, format);
    out << outcome.summary << '\n';
    return;
  }
  if (!outcome.tabular) {
    out << outcome.summary << '\n';
    return;
  }
  out << (format == OutputFormat::csv ? render_csv(outcome.table)
                                      : render_json(outcome.table).dump(2) + "\n");
  err << outcome.summary << '\n';
}

int replay(const std::string& manifest_file, const std::string& out_override, std::ostream& out,
           std::ostream& err) {
  std::ifstream in(manifest_file);
  if (!in) throw std::runtime_error("cannot read manifest " + manifest_file);
  const RunManifest m = RunManifest::from_json(json::parse(in));
  std::vector<std::string> args = m.arguments;
  if (!out_override.empty()) {
    auto it = std::find(args.begin(), args.end(), "--out");
    if (it != args.end() && std::next(it) != args.end()) {
      *std::next(it) = out_override;
    } else {
      args.push_back("--out");
      args.push_back(out_override);
    }
  }
  if (!args.empty() && args.front() == "replay") {
    throw std::runtime_error("manifest replays itself");
  }
  return run(args, out, err);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Radium proof-of-work simulation and analysis laboratory", "radium_lab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  Common common;
  FutureMineOpts fm;
  DefactoOpts df;
  DaaOpts daa;
  OrphanOpts orphan;
  DoublespendOpts ds;
  SwitchOpts sw;
  VarianceOpts var;
  BoundsOpts bnd;
  std::string manifest_file;
  std::size_t preemptor = 0;

  auto* s_fm = app.add_subcommand("future-mine", "Future-mining attack sweep over q and t*");
  add_common(s_fm, common);
  s_fm->add_option("--q", fm.q, "Attacker hash fractions")->delimiter(',')->capture_default_str();
  s_fm->add_option("--t-star", fm.t_star, "Future mining times (s)")->delimiter(',');
  s_fm->add_option("--trials", fm.trials, "Trials per grid point")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  auto* s_df = app.add_subcommand("defacto", "Defacto future mining to tau with block races");
  add_common(s_df, common);
  s_df->add_option("--tau", df.tau, "Future mining time tau (s)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  s_df->add_option("--miners", df.miners, "Hash fractions, summing to 1")
      ->delimiter(',')
      ->capture_default_str();
  auto* preempt_opt =
      s_df->add_option("--preemptor", preemptor, "Index of the miner that wins every race");
  s_df->add_option("--trials", df.trials, "Trials")->check(CLI::PositiveNumber)->capture_default_str();

  auto* s_daa = app.add_subcommand("daa-sim", "Closed-loop difficulty adjustment block times");
  add_common(s_daa, common);
  s_daa->add_option("--protocol", daa.protocol, "bitcoin or radium")
      ->check(CLI::IsMember({"bitcoin", "radium"}))
      ->capture_default_str();
  s_daa->add_option("--trials", daa.trials, "Trials")->check(CLI::PositiveNumber)->capture_default_str();
  s_daa->add_option("--blocks", daa.blocks, "Blocks per trial")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  s_daa->add_option("--window", daa.window, "Block times averaged per adjustment")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  auto* s_orphan = app.add_subcommand("orphan", "Orphan rate of two equal compliant halves");
  add_common(s_orphan, common);
  s_orphan->add_option("--protocol", orphan.protocol, "Protocols")
      ->delimiter(',')
      ->check(CLI::IsMember({"bitcoin", "radium"}))
      ->capture_default_str();
  s_orphan->add_option("--blocks", orphan.blocks, "Blocks per protocol")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  s_orphan->add_option("--window", orphan.window, "Orphan window (s)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  auto* s_ds = app.add_subcommand("doublespend", "Doublespend race sweep over q and z");
  add_common(s_ds, common);
  s_ds->add_option("--protocol", ds.protocol, "Protocols")
      ->delimiter(',')
      ->check(CLI::IsMember({"bitcoin", "radium"}))
      ->capture_default_str();
  s_ds->add_option("--q", ds.q, "Attacker hash fractions")->delimiter(',')->capture_default_str();
  s_ds->add_option("--z", ds.z, "Embargo periods (blocks)")->delimiter(',')->capture_default_str();
  s_ds->add_option("--trials", ds.trials, "Trials per point")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  s_ds->add_option("--max-deficit", ds.max_deficit, "Attacker gives up this far behind")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  s_ds->add_option("--horizon", ds.horizon, "Honest chain length at which the attacker gives up")
      ->capture_default_str();
  s_ds->add_option("--clock", ds.clock,
                   "per-height: both parties redraw at every block; "
                   "per-chain: each chain keeps its own clock")
      ->check(CLI::IsMember({"per-height", "per-chain"}))
      ->capture_default_str();

  auto* s_sw = app.add_subcommand("switch-mine", "Reward per second under switch mining");
  add_common(s_sw, common, /*with_k=*/false);
  s_sw->add_option("--k", sw.k, "Security exponents")->delimiter(',')->capture_default_str();
  s_sw->add_option("--x", sw.x, "Hash-rate multiples")->delimiter(',')->capture_default_str();
  s_sw->add_option("--trials", sw.trials, "Episodes per point")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  auto* s_var = app.add_subcommand("variance", "Block-time variance ratio against exponential");
  add_common(s_var, common, /*with_k=*/false);
  s_var->add_option("--k", var.k, "Security exponents")->delimiter(',')->capture_default_str();
  s_var->add_option("--draws", var.draws, "Monte Carlo draws for a sample estimate (0 = none)")
      ->capture_default_str();

  auto* s_bnd = app.add_subcommand("bounds", "Closed-form future-mining success bound");
  add_common(s_bnd, common);
  s_bnd->add_option("--q", bnd.q, "Attacker hash fraction")->capture_default_str();
  s_bnd->add_option("--t-star", bnd.t_star, "Future mining time (s)")->capture_default_str();

  auto* s_replay = app.add_subcommand("replay", "Re-run the experiment recorded in a manifest");
  s_replay->add_option("manifest", manifest_file, "Path to <out>.manifest.json")->required();
  std::string replay_out;
  s_replay->add_option("--out", replay_out, "Write to this path instead of the recorded one");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  CLI::App* chosen = app.get_subcommands().front();
  const std::string name = chosen->get_name();
  if (name == "defacto" && preempt_opt->count() > 0) df.preemptor = preemptor;

  try {
    if (name == "replay") return replay(manifest_file, replay_out, out, err);

    Outcome outcome;
    if (name == "future-mine") outcome = run_future_mine(common, fm);
    else if (name == "defacto") outcome = run_defacto(common, df);
    else if (name == "daa-sim") outcome = run_daa(common, daa);
    else if (name == "orphan") outcome = run_orphan(common, orphan);
    else if (name == "doublespend") outcome = run_doublespend_cmd(common, ds);
    else if (name == "switch-mine") outcome = run_switch(common, sw);
    else if (name == "variance") outcome = run_variance(common, var);
    else outcome = run_bounds(common, bnd);
    emit(name, common, std::move(outcome), args, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << chosen->help();
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace radium::cli
