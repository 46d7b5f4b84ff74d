#include "osp/harness.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "osp/hedge.hpp"
#include "osp/prng.hpp"
#include "osp/reference.hpp"

namespace osp {

namespace fs = std::filesystem;

std::string to_string(EnvironmentKind k) {
  switch (k) {
    case EnvironmentKind::case1: return "case1";
    case EnvironmentKind::case2: return "case2";
    case EnvironmentKind::case3: return "case3";
    case EnvironmentKind::case4: return "case4";
    case EnvironmentKind::stationary: return "stationary";
    case EnvironmentKind::nereg_cancel: return "nereg_cancel";
    case EnvironmentKind::custom: return "custom";
  }
  return "unknown";
}

std::string to_string(AlgorithmKind k) {
  switch (k) {
    case AlgorithmKind::oppm: return "oppm";
    case AlgorithmKind::optoppm: return "optoppm";
    case AlgorithmKind::optoppm_multi: return "optoppm_multi";
  }
  return "unknown";
}

EnvironmentKind environment_from_string(const std::string& s) {
  for (EnvironmentKind k :
       {EnvironmentKind::case1, EnvironmentKind::case2, EnvironmentKind::case3,
        EnvironmentKind::case4, EnvironmentKind::stationary, EnvironmentKind::nereg_cancel,
        EnvironmentKind::custom}) {
    if (to_string(k) == s) return k;
  }
  throw ConfigError("config: unknown environment \"" + s + "\"");
}

AlgorithmKind algorithm_from_string(const std::string& s) {
  for (AlgorithmKind k :
       {AlgorithmKind::oppm, AlgorithmKind::optoppm, AlgorithmKind::optoppm_multi}) {
    if (to_string(k) == s) return k;
  }
  throw ConfigError("config: unknown algorithm \"" + s + "\"");
}

std::vector<long> ExperimentConfig::effective_lags() const {
  if (!lags.empty()) return lags;
  if (algorithm == AlgorithmKind::optoppm_multi) return {4, 5, 6};
  return {4};
}

std::string ExperimentConfig::label() const {
  if (!name.empty()) return name;
  return to_string(environment) + "_" + to_string(algorithm);
}

EnvironmentSpec ExperimentConfig::environment_spec() const {
  switch (environment) {
    case EnvironmentKind::stationary:
      return EnvironmentSpec::stationary_at(stationary_saddle_x, stationary_saddle_y);
    case EnvironmentKind::custom:
      return EnvironmentSpec::custom_cycle(custom_saddles);
    default:
      return EnvironmentSpec::make(environment);
  }
}

void ExperimentConfig::validate() const {
  if (t_max < 1) throw ConfigError("config: t_max must be at least 1");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
    throw ConfigError("config: epsilon must be a positive finite number");
  for (auto [v, key] : {std::pair{budget, "budget"}, {budget_x, "budget_x"}, {budget_y, "budget_y"}}) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw ConfigError(std::string("config: ") + key + " must be a positive finite number");
  }
  if (record_stride < 0) throw ConfigError("config: record_stride must be nonnegative");
  if (hedge_horizon < 0) throw ConfigError("config: hedge_horizon must be nonnegative");
  for (long lag : lags) {
    if (lag < 1) throw ConfigError("config: lags must all be at least 1");
  }
  if (algorithm == AlgorithmKind::optoppm && lags.size() > 1)
    throw ConfigError("config: optoppm takes a single lag");
  if (algorithm == AlgorithmKind::optoppm_multi && hedge_horizon != 0 &&
      hedge_horizon <= static_cast<long>(effective_lags().size()))
    throw ConfigError("config: hedge_horizon must exceed the number of predictors");
  if (environment == EnvironmentKind::custom && custom_saddles.empty())
    throw ConfigError("config: custom environment needs custom_saddles");
  try {
    Environment probe(environment_spec());
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

namespace {

long require_integer(const nlohmann::json& v, const char* key) {
  if (!v.is_number_integer())
    throw ConfigError(std::string("config: ") + key + " must be an integer");
  return v.get<long>();
}

double require_number(const nlohmann::json& v, const char* key) {
  if (!v.is_number()) throw ConfigError(std::string("config: ") + key + " must be a number");
  return v.get<double>();
}

std::string require_string(const nlohmann::json& v, const char* key) {
  if (!v.is_string()) throw ConfigError(std::string("config: ") + key + " must be a string");
  return v.get<std::string>();
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  const nlohmann::json j = nlohmann::json::parse(json_text, nullptr, false);
  if (j.is_discarded()) throw ConfigError("config: invalid JSON");
  if (!j.is_object()) throw ConfigError("config: top level must be an object");

  ExperimentConfig cfg;
  bool saw_env = false, saw_algo = false;
  for (const auto& [key, value] : j.items()) {
    if (key == "name") {
      cfg.name = require_string(value, "name");
    } else if (key == "environment") {
      cfg.environment = environment_from_string(require_string(value, "environment"));
      saw_env = true;
    } else if (key == "algorithm") {
      cfg.algorithm = algorithm_from_string(require_string(value, "algorithm"));
      saw_algo = true;
    } else if (key == "t_max") {
      cfg.t_max = require_integer(value, "t_max");
    } else if (key == "seed") {
      const long s = require_integer(value, "seed");
      if (s < 0) throw ConfigError("config: seed must be nonnegative");
      cfg.seed = static_cast<std::uint64_t>(s);
    } else if (key == "epsilon") {
      cfg.epsilon = require_number(value, "epsilon");
    } else if (key == "budget") {
      cfg.budget = require_number(value, "budget");
    } else if (key == "budget_x") {
      cfg.budget_x = require_number(value, "budget_x");
    } else if (key == "budget_y") {
      cfg.budget_y = require_number(value, "budget_y");
    } else if (key == "lags") {
      if (!value.is_array()) throw ConfigError("config: lags must be an array of integers");
      cfg.lags.clear();
      for (const auto& item : value) cfg.lags.push_back(require_integer(item, "lags"));
    } else if (key == "hedge_horizon") {
      cfg.hedge_horizon = require_integer(value, "hedge_horizon");
    } else if (key == "record_stride") {
      cfg.record_stride = require_integer(value, "record_stride");
    } else if (key == "stationary_saddle") {
      if (!value.is_array() || value.size() != 2)
        throw ConfigError("config: stationary_saddle must be [a, b]");
      cfg.stationary_saddle_x = require_number(value[0], "stationary_saddle");
      cfg.stationary_saddle_y = require_number(value[1], "stationary_saddle");
    } else if (key == "custom_saddles") {
      if (!value.is_array()) throw ConfigError("config: custom_saddles must be an array of [a, b]");
      cfg.custom_saddles.clear();
      for (const auto& item : value) {
        if (!item.is_array() || item.size() != 2)
          throw ConfigError("config: custom_saddles entries must be [a, b]");
        cfg.custom_saddles.emplace_back(require_number(item[0], "custom_saddles"),
                                        require_number(item[1], "custom_saddles"));
      }
    } else if (key == "out_csv") {
      cfg.out_csv = require_string(value, "out_csv");
    } else if (key == "out_svg") {
      cfg.out_svg = require_string(value, "out_svg");
    } else {
      throw ConfigError("config: unknown key \"" + key + "\"");
    }
  }
  if (!saw_env) throw ConfigError("config: missing required key \"environment\"");
  if (!saw_algo) throw ConfigError("config: missing required key \"algorithm\"");
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot open \"" + path + "\"");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

bool is_checkpoint(long t, long t_max, long stride) {
  if (t == 1 || t == t_max) return true;
  if (stride > 0) return t % stride == 0;
  if (t % 100 == 0) return true;
  long p = 1;
  while (p < t && p <= std::numeric_limits<long>::max() / 10) {
    p *= 10;
    if (p == t) return true;
  }
  return false;
}

namespace {

std::unique_ptr<SaddleAlgorithm> make_algorithm(const ExperimentConfig& cfg, const BoxSet& box_x,
                                                const BoxSet& box_y, StrategyPair initial) {
  switch (cfg.algorithm) {
    case AlgorithmKind::oppm: {
      OppmSettings s;
      s.epsilon = cfg.epsilon;
      s.budget = cfg.budget;
      return std::make_unique<Oppm>(box_x, box_y, std::move(initial), s);
    }
    case AlgorithmKind::optoppm: {
      OptOppmSettings s;
      s.epsilon = cfg.epsilon;
      s.budget_x = cfg.budget_x;
      s.budget_y = cfg.budget_y;
      return std::make_unique<LaggedOptOppm>(box_x, box_y, std::move(initial),
                                             cfg.effective_lags()[0], s);
    }
    case AlgorithmKind::optoppm_multi: {
      MultiPredictorSettings s;
      s.inner.epsilon = cfg.epsilon;
      s.inner.budget_x = cfg.budget_x;
      s.inner.budget_y = cfg.budget_y;
      s.hedge_horizon = cfg.hedge_horizon;
      return std::make_unique<MultiPredictorOptOppm>(box_x, box_y, std::move(initial),
                                                     cfg.effective_lags(), s);
    }
  }
  throw std::logic_error("unreachable algorithm kind");
}

}  // namespace

InvariantMonitor::InvariantMonitor(const SaddleAlgorithm& algo) : algo_(&algo) {
  oppm_ = dynamic_cast<const Oppm*>(&algo);
  if (const auto* lagged = dynamic_cast<const LaggedOptOppm*>(&algo)) core_ = &lagged->core();
  if (const auto* multi = dynamic_cast<const MultiPredictorOptOppm*>(&algo)) {
    core_ = &multi->core();
    multi_ = multi;
  }
  if (core_ != nullptr) {
    prev_aux_x_ = core_->aux_x();
    prev_aux_y_ = core_->aux_y();
  }
}

void InvariantMonitor::flag(long t, const std::string& what) {
  ++violations_;
  if (first_message_.empty()) first_message_ = "round " + std::to_string(t) + ": " + what;
}

void InvariantMonitor::check(long t, const PayoffPtr& f, const StrategyPair& pair,
                             const RoundDiagnostics& diag, const RoundIncrements& inc,
                             const Vec& br_x, const Vec& br_y) {
  const BoxSet& bx = algo_->box_x();
  const BoxSet& by = algo_->box_y();
  if (!bx.contains(pair.x) || !by.contains(pair.y)) flag(t, "played pair left its box");
  if (!bx.contains(br_x) || !by.contains(br_y)) flag(t, "best response left its box");
  if (inc.dgap < -1e-12) flag(t, "negative duality gap increment");
  if (!(diag.eta > 0.0) || !(diag.gamma > 0.0)) flag(t, "nonpositive prox rate");
  if (have_prev_) {
    if (diag.stage_x == prev_stage_x_ && diag.eta > prev_eta_ * (1.0 + 1e-12) + 1e-12)
      flag(t, "x rate increased inside a stage");
    if (diag.stage_y == prev_stage_y_ && diag.gamma > prev_gamma_ * (1.0 + 1e-12) + 1e-12)
      flag(t, "y rate increased inside a stage");
  }
  const double gx = f->grad_bound_x(bx, by);
  const double gy = f->grad_bound_y(bx, by);
  if (oppm_ != nullptr) {
    if (oppm_->telescoping_gap() != 0.0) flag(t, "denominator increments stopped telescoping");
    // the played pair and the prox output are consecutive iterates, so the
    // step obeys the rate times the payoff gradient bound
    if (distance(pair.x, diag.solve.x) > diag.eta * gx + 1e-9)
      flag(t, "x step exceeded its rate bound");
    if (distance(pair.y, diag.solve.y) > diag.gamma * gy + 1e-9)
      flag(t, "y step exceeded its rate bound");
  }
  if (core_ != nullptr) {
    if (diag.delta1 < -kDeltaSlack || diag.delta2 < -kDeltaSlack)
      flag(t, "denominator increment went negative");
    if (distance(core_->aux_x(), prev_aux_x_) > diag.eta * gx + 1e-9)
      flag(t, "x anchor step exceeded its rate bound");
    if (distance(core_->aux_y(), prev_aux_y_) > diag.gamma * gy + 1e-9)
      flag(t, "y anchor step exceeded its rate bound");
    prev_aux_x_ = core_->aux_x();
    prev_aux_y_ = core_->aux_y();
  }
  if (multi_ != nullptr) {
    double total = 0.0;
    double lowest = std::numeric_limits<double>::infinity();
    for (double w : diag.weights) {
      total += w;
      lowest = std::min(lowest, w);
    }
    if (std::abs(total - 1.0) > 1e-12) flag(t, "expert weights left the simplex");
    // the mix predates this round's hedge step; the clip floor only shrinks
    // when the horizon doubles, so today's floor lower-bounds it either way
    if (!diag.weights.empty() &&
        lowest < multi_->hedge().alpha() / static_cast<double>(diag.weights.size()) - 1e-12)
      flag(t, "expert weight fell below the clip floor");
    if (!(diag.hedge_theta > 0.0)) flag(t, "hedge temperature lost positivity");
  }
  have_prev_ = true;
  prev_eta_ = diag.eta;
  prev_gamma_ = diag.gamma;
  prev_stage_x_ = diag.stage_x;
  prev_stage_y_ = diag.stage_y;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const Environment env(cfg.environment_spec());
  SplitMix64 rng(cfg.seed);
  // x is drawn before y; pinning the order keeps seeds portable
  StrategyPair initial;
  initial.x = env.box_x().sample(rng);
  initial.y = env.box_y().sample(rng);

  auto algo = make_algorithm(cfg, env.box_x(), env.box_y(), initial);
  MetricsAccumulator metrics(env.box_x(), env.box_y());
  InvariantMonitor monitor(*algo);

  ExperimentResult result;
  result.summary.name = cfg.label();
  result.summary.environment = to_string(cfg.environment);
  result.summary.algorithm = to_string(cfg.algorithm);
  result.summary.initial = initial;

  bool doubled_since_record = false;
  for (long t = 1; t <= cfg.t_max; ++t) {
    const StrategyPair pair = algo->emit();
    const PayoffPtr f = env.next_payoff(t, pair);
    RoundDiagnostics diag = algo->observe(f);
    const RoundIncrements inc =
        metrics.record_round(f, pair, std::move(diag.br_x), std::move(diag.br_y));
    monitor.check(t, f, pair, diag, inc, inc.br_x, inc.br_y);
    doubled_since_record = doubled_since_record || diag.doubled;

    if (is_checkpoint(t, cfg.t_max, cfg.record_stride)) {
      const MetricsSnapshot snap = metrics.snapshot();
      RoundRecord rec;
      rec.t = t;
      rec.x = pair.x[0];
      rec.y = pair.y[0];
      rec.x_br = inc.br_x[0];
      rec.y_br = inc.br_y[0];
      rec.dgap_avg = snap.dgap_avg;
      rec.nereg_avg = snap.nereg_avg;
      rec.reg1_avg = snap.reg1_avg;
      rec.reg2_avg = snap.reg2_avg;
      rec.nereg_available = snap.nereg_available;
      rec.path = snap.path;
      rec.vt = snap.vt;
      rec.eta = diag.eta;
      rec.gamma = diag.gamma;
      rec.stage = diag.stage;
      rec.doubled = doubled_since_record;
      rec.weights = diag.weights;
      result.records.push_back(std::move(rec));
      doubled_since_record = false;
    }
    if (t == cfg.t_max) {
      result.summary.final_eta = diag.eta;
      result.summary.final_gamma = diag.gamma;
      result.summary.stage = diag.stage;
    }
  }

  result.summary.rounds = cfg.t_max;
  result.summary.final_metrics = metrics.snapshot();
  result.summary.dgap_sum = metrics.dgap_sum();
  result.summary.reg1_sum = metrics.reg1_sum();
  result.summary.reg2_sum = metrics.reg2_sum();
  result.summary.nereg_signed = metrics.nereg_signed();
  result.summary.violations = monitor.violations();
  result.summary.first_violation = monitor.first_message();
  return result;
}

namespace {

int thread_budget(int requested, std::size_t cells) {
  long limit;
  if (requested >= 0) {
    limit = requested == 0 ? 1 : requested;
  } else if (const char* env = std::getenv("OSP_PROX_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 0)
      throw ConfigError("OSP_PROX_THREADS must be a nonnegative integer");
    limit = v == 0 ? 1 : v;
  } else {
    const unsigned hw = std::thread::hardware_concurrency();
    limit = hw == 0 ? 1 : static_cast<long>(hw);
  }
  return static_cast<int>(std::clamp<long>(limit, 1, static_cast<long>(cells)));
}

}  // namespace

std::vector<ExperimentSummary> grid_run(const GridOptions& opts) {
  if (opts.rounds < 1) throw ConfigError("grid: rounds must be at least 1");
  const std::array<EnvironmentKind, 4> cases{EnvironmentKind::case1, EnvironmentKind::case2,
                                             EnvironmentKind::case3, EnvironmentKind::case4};
  const std::array<AlgorithmKind, 3> algos{AlgorithmKind::oppm, AlgorithmKind::optoppm,
                                           AlgorithmKind::optoppm_multi};

  std::vector<ExperimentConfig> cfgs;
  for (EnvironmentKind env : cases) {
    for (AlgorithmKind algo : algos) {
      ExperimentConfig cfg;
      cfg.environment = env;
      cfg.algorithm = algo;
      cfg.t_max = opts.rounds;
      cfg.seed = opts.seed + cfgs.size();
      cfgs.push_back(std::move(cfg));
    }
  }

  std::error_code ec;
  fs::create_directories(opts.out_dir, ec);
  if (ec) throw std::runtime_error("grid: cannot create \"" + opts.out_dir + "\": " + ec.message());

  std::vector<ExperimentResult> results(cfgs.size());
  std::vector<std::exception_ptr> errors(cfgs.size());
  std::atomic<std::size_t> cursor{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= cfgs.size()) return;
      try {
        results[i] = run_experiment(cfgs[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int threads = thread_budget(opts.threads, cfgs.size());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  for (const auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }

  // outputs written serially in a fixed order so reruns are byte-identical
  for (std::size_t i = 0; i < cfgs.size(); ++i) {
    write_csv_file(results[i].records, (fs::path(opts.out_dir) / (cfgs[i].label() + ".csv")).string());
  }
  for (std::size_t ci = 0; ci < cases.size(); ++ci) {
    std::vector<TraceSeries> gap, nereg;
    for (std::size_t ai = 0; ai < algos.size(); ++ai) {
      const auto& records = results[ci * algos.size() + ai].records;
      TraceSeries g{to_string(algos[ai]), {}};
      TraceSeries n{to_string(algos[ai]), {}};
      for (const auto& rec : records) {
        g.points.emplace_back(static_cast<double>(rec.t), rec.dgap_avg);
        if (rec.nereg_available) n.points.emplace_back(static_cast<double>(rec.t), rec.nereg_avg);
      }
      gap.push_back(std::move(g));
      nereg.push_back(std::move(n));
    }
    const std::string base = to_string(cases[ci]);
    render_svg_file(gap, base + " average duality gap",
                    (fs::path(opts.out_dir) / (base + "_dgap.svg")).string());
    render_svg_file(nereg, base + " average equilibrium regret",
                    (fs::path(opts.out_dir) / (base + "_nereg.svg")).string());
  }

  std::vector<ExperimentSummary> summaries;
  summaries.reserve(results.size());
  for (auto& res : results) summaries.push_back(std::move(res.summary));
  return summaries;
}

std::vector<VerifyCheck> run_verification(long rounds, std::uint64_t seed) {
  if (rounds < 1) throw ConfigError("verify: rounds must be at least 1");
  std::vector<VerifyCheck> out;

  {
    VerifyCheck check{"engine-invariants", true, ""};
    const std::pair<EnvironmentKind, AlgorithmKind> cells[] = {
        {EnvironmentKind::case2, AlgorithmKind::oppm},
        {EnvironmentKind::nereg_cancel, AlgorithmKind::oppm},
        {EnvironmentKind::case3, AlgorithmKind::optoppm},
        {EnvironmentKind::case1, AlgorithmKind::optoppm_multi},
    };
    for (const auto& [env, algo] : cells) {
      ExperimentConfig cfg;
      cfg.environment = env;
      cfg.algorithm = algo;
      cfg.t_max = rounds;
      cfg.seed = seed;
      const ExperimentResult res = run_experiment(cfg);
      const MetricsSnapshot& m = res.summary.final_metrics;
      if (res.summary.violations > 0) {
        check.ok = false;
        check.detail = res.summary.name + ": " + res.summary.first_violation;
      } else if (std::abs(m.dgap_avg - m.reg1_avg - m.reg2_avg) > 1e-9) {
        check.ok = false;
        check.detail = res.summary.name + ": gap no longer splits into the two regrets";
      } else if (m.nereg_available && m.nereg_avg > m.dgap_avg + 1e-9) {
        check.ok = false;
        check.detail = res.summary.name + ": equilibrium regret exceeded the duality gap";
      }
      if (!check.ok) break;
    }
    out.push_back(std::move(check));
  }

  {
    VerifyCheck check{"clipped-projection-oracle", true, ""};
    SplitMix64 rng(seed + 1000);
    double worst = 0.0;
    for (int i = 0; i < 400; ++i) {
      const std::size_t d = 2 + static_cast<std::size_t>(rng.next() % 4);
      Vec w(d);
      for (double& v : w) {
        v = rng.uniform() < 0.1 ? 0.0 : std::exp(rng.uniform(-20.0, 5.0));
      }
      if (*std::max_element(w.begin(), w.end()) == 0.0) w[0] = 1.0;
      const double alpha = std::pow(10.0, rng.uniform(-3.0, 0.0));
      const Vec got = clipped_simplex_solve(w, alpha);
      const Vec want = reference_clipped_projection(w, alpha);
      for (std::size_t k = 0; k < d; ++k) worst = std::max(worst, std::abs(got[k] - want[k]));
    }
    check.ok = worst <= 1e-8;
    check.detail = "sup deviation " + format_double(worst);
    out.push_back(std::move(check));
  }

  {
    VerifyCheck check{"prox-grid-oracle", true, ""};
    SplitMix64 rng(seed + 2000);
    const BoxSet box = BoxSet::symmetric(4.0);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      const auto payoff =
          std::make_shared<QuadraticSaddle>(rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0));
      const ProxProblem prob{payoff,
                             std::pow(10.0, rng.uniform(-2.0, 1.2)),
                             std::pow(10.0, rng.uniform(-2.0, 1.2)),
                             box.sample(rng),
                             box.sample(rng),
                             box,
                             box};
      const SolveReport rep = solve_joint_prox(prob);
      const GridSaddleResult grid = reference_grid_prox(*payoff, prob.eta, prob.gamma,
                                                        prob.x_anchor[0], prob.y_anchor[0], box, box);
      worst = std::max({worst, std::abs(rep.x[0] - grid.x), std::abs(rep.y[0] - grid.y)});
    }
    check.ok = worst <= 2e-3;
    check.detail = "worst coordinate deviation " + format_double(worst);
    out.push_back(std::move(check));
  }

  {
    VerifyCheck check{"prox-method-agreement", true, ""};
    SplitMix64 rng(seed + 3000);
    const BoxSet box = BoxSet::symmetric(4.0);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      const ProxProblem prob{
          std::make_shared<QuadraticSaddle>(rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)),
          std::pow(10.0, rng.uniform(-2.0, 1.2)),
          std::pow(10.0, rng.uniform(-2.0, 1.2)),
          box.sample(rng),
          box.sample(rng),
          box,
          box};
      SolveOptions closed;
      closed.method = SolveOptions::Method::closed_form;
      SolveOptions iterative;
      iterative.method = SolveOptions::Method::iterative;
      const SolveReport a = solve_joint_prox(prob, closed);
      const SolveReport b = solve_joint_prox(prob, iterative);
      worst = std::max({worst, std::abs(a.x[0] - b.x[0]), std::abs(a.y[0] - b.y[0])});
    }
    check.ok = worst <= 1e-7;
    check.detail = "worst coordinate deviation " + format_double(worst);
    out.push_back(std::move(check));
  }

  {
    VerifyCheck check{"replay-determinism", true, ""};
    ExperimentConfig cfg;
    cfg.environment = EnvironmentKind::case1;
    cfg.algorithm = AlgorithmKind::optoppm;
    cfg.t_max = rounds;
    cfg.seed = seed;
    const std::string first = csv_text(run_experiment(cfg).records);
    const std::string second = csv_text(run_experiment(cfg).records);
    check.ok = first == second;
    if (!check.ok) check.detail = "identical configs produced different traces";
    out.push_back(std::move(check));
  }

  {
    VerifyCheck check{"environment-obliviousness", true, ""};
    for (EnvironmentKind kind : {EnvironmentKind::case1, EnvironmentKind::case2,
                                 EnvironmentKind::case3, EnvironmentKind::stationary}) {
      const Environment env(EnvironmentSpec::make(kind));
      for (long t : {1L, 7L, 123L}) {
        const StrategyPair a{Vec{0.5}, Vec{-1.0}};
        const StrategyPair b{Vec{-3.0}, Vec{2.5}};
        const auto fa = env.next_payoff(t, a)->quadratic_form();
        const auto fb = env.next_payoff(t, b)->quadratic_form();
        const bool same = fa && fb && fa->xx == fb->xx && fa->xy == fb->xy && fa->yy == fb->yy &&
                          fa->bx == fb->bx && fa->by == fb->by && fa->c == fb->c;
        if (!same) {
          check.ok = false;
          check.detail = to_string(kind) + " reacted to the played pair at round " + std::to_string(t);
        }
      }
    }
    out.push_back(std::move(check));
  }

  return out;
}

}  // namespace osp
