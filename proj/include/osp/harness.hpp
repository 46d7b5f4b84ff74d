#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "osp/algorithms.hpp"
#include "osp/environments.hpp"
#include "osp/metrics.hpp"

namespace osp {

// invalid configuration input (file, JSON, or field values); the CLI maps
// this to exit code 2, every other failure to 1
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class AlgorithmKind { oppm, optoppm, optoppm_multi };

std::string to_string(EnvironmentKind k);
std::string to_string(AlgorithmKind k);
EnvironmentKind environment_from_string(const std::string& s);  // throws ConfigError
AlgorithmKind algorithm_from_string(const std::string& s);      // throws ConfigError

struct ExperimentConfig {
  std::string name;  // label; empty picks "<environment>_<algorithm>"
  EnvironmentKind environment = EnvironmentKind::stationary;
  AlgorithmKind algorithm = AlgorithmKind::oppm;
  long t_max = 100000;
  std::uint64_t seed = 1;
  double epsilon = 0.1;
  double budget = 1.0;                   // shared path preset (oppm)
  double budget_x = 1.0, budget_y = 1.0;  // per-player presets (optimistic)
  std::vector<long> lags;                // empty picks {4} or {4,5,6}
  long hedge_horizon = 0;                // 0 picks 2*d+1
  long record_stride = 0;                // 0 picks the checkpoint schedule
  double stationary_saddle_x = 1.0, stationary_saddle_y = 1.0;
  std::vector<std::pair<double, double>> custom_saddles;
  std::string out_csv, out_svg;  // optional explicit output paths

  std::vector<long> effective_lags() const;
  std::string label() const;
  EnvironmentSpec environment_spec() const;
  void validate() const;  // throws ConfigError
};

ExperimentConfig parse_config(const std::string& json_text);  // throws ConfigError
ExperimentConfig load_config_file(const std::string& path);   // throws ConfigError

struct RoundRecord {
  long t = 0;
  double x = 0.0, y = 0.0, x_br = 0.0, y_br = 0.0;
  double dgap_avg = 0.0, nereg_avg = 0.0, reg1_avg = 0.0, reg2_avg = 0.0;
  bool nereg_available = true;  // false leaves the nereg cell empty
  double path = 0.0, vt = 0.0;
  double eta = 0.0, gamma = 0.0;
  long stage = 0;
  bool doubled = false;  // any doubling since the previous record
  Vec weights;
};

struct ExperimentSummary {
  std::string name, environment, algorithm;
  long rounds = 0;
  MetricsSnapshot final_metrics;
  double dgap_sum = 0.0, reg1_sum = 0.0, reg2_sum = 0.0;
  double nereg_signed = 0.0;  // before the absolute value
  long violations = 0;
  std::string first_violation;
  double final_eta = 0.0, final_gamma = 0.0;
  long stage = 0;
  StrategyPair initial;
};

struct ExperimentResult {
  std::vector<RoundRecord> records;
  ExperimentSummary summary;
};

// records land at round 1, the final round, and either every `stride` rounds
// or, when stride is 0, every multiple of 100 plus every power of 10
bool is_checkpoint(long t, long t_max, long stride);

// watches one run for the facts the engines are supposed to guarantee;
// failures are counted, not thrown, so a broken trajectory stays inspectable
class InvariantMonitor {
 public:
  explicit InvariantMonitor(const SaddleAlgorithm& algo);
  void check(long t, const PayoffPtr& f, const StrategyPair& pair, const RoundDiagnostics& diag,
             const RoundIncrements& inc, const Vec& br_x, const Vec& br_y);
  long violations() const { return violations_; }
  const std::string& first_message() const { return first_message_; }

 private:
  void flag(long t, const std::string& what);

  const SaddleAlgorithm* algo_;
  const Oppm* oppm_ = nullptr;
  const OptOppmCore* core_ = nullptr;
  const MultiPredictorOptOppm* multi_ = nullptr;
  long violations_ = 0;
  std::string first_message_;
  bool have_prev_ = false;
  double prev_eta_ = 0.0, prev_gamma_ = 0.0;
  long prev_stage_x_ = 0, prev_stage_y_ = 0;
  Vec prev_aux_x_, prev_aux_y_;
};

ExperimentResult run_experiment(const ExperimentConfig& cfg);

// shortest decimal that round-trips to the same double
std::string format_double(double v);

std::string csv_text(const std::vector<RoundRecord>& records);
void write_csv_file(const std::vector<RoundRecord>& records, const std::string& path);

struct TraceSeries {
  std::string name;
  std::vector<std::pair<double, double>> points;  // (round, value)
};

// log-x line chart; byte-deterministic for identical inputs
std::string render_svg(const std::vector<TraceSeries>& traces, const std::string& title);
void render_svg_file(const std::vector<TraceSeries>& traces, const std::string& title,
                     const std::string& path);

struct GridOptions {
  std::string out_dir = ".";
  long rounds = 100000;
  std::uint64_t seed = 1;
  int threads = -1;  // -1 reads OSP_PROX_THREADS, 0 means serial
};

// the four drifting/oscillating cases crossed with the three engines; writes
// one CSV per cell and a gap/regret panel pair per case; returns the summaries
std::vector<ExperimentSummary> grid_run(const GridOptions& opts);

struct VerifyCheck {
  std::string name;
  bool ok = true;
  std::string detail;
};

// invariant suites plus oracle cross-checks, sized to finish in seconds
std::vector<VerifyCheck> run_verification(long rounds, std::uint64_t seed);

}  // namespace osp
