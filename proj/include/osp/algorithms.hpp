#pragma once

#include <deque>
#include <string_view>
#include <vector>

#include "osp/geometry.hpp"
#include "osp/hedge.hpp"
#include "osp/inner_solvers.hpp"
#include "osp/payoffs.hpp"
#include "osp/vec.hpp"

namespace osp {

// recorded per-player denominator increments may dip this far below zero
// before the engine treats the run as corrupted
inline constexpr double kDeltaSlack = 1e-9;

// everything the harness wants to know about one emit/observe cycle
struct RoundDiagnostics {
  long t = 0;
  StrategyPair pair;               // strategies played this round
  Vec br_x, br_y;                  // best responses under the revealed payoff
  double eta = 0.0, gamma = 0.0;   // rates in effect this round, post-cap
  double path = 0.0;               // comparator path length so far, both players
  long stage = 0;                  // total doubling events so far
  long stage_x = 0, stage_y = 0;   // per-player stage the round's rates were computed under
  bool doubled = false;            // some preset or horizon doubled this round
  double sigma1 = 0.0, sigma2 = 0.0;  // clipped per-player regret proxies
  double delta1 = 0.0, delta2 = 0.0;  // denominator increments recorded this round
  double hedge_theta = 0.0, hedge_sigma = 0.0;
  Vec weights;                     // expert mix used at emit, empty elsewhere
  SolveReport solve;               // the joint prox performed this round
};

class SaddleAlgorithm {
 public:
  SaddleAlgorithm(BoxSet box_x, BoxSet box_y)
      : box_x_(std::move(box_x)), box_y_(std::move(box_y)) {}
  virtual ~SaddleAlgorithm() = default;

  virtual StrategyPair emit() = 0;
  virtual RoundDiagnostics observe(const PayoffPtr& f_t) = 0;
  virtual std::string_view name() const = 0;

  const BoxSet& box_x() const { return box_x_; }
  const BoxSet& box_y() const { return box_y_; }

 protected:
  BoxSet box_x_, box_y_;
};

struct OppmSettings {
  double epsilon = 0.1;
  double budget = 1.0;  // initial preset on the comparator path, doubled on overflow
  SolveOptions solve{};
};

// proximal point on the revealed payoff, anchored at the played pair, with a
// shared self-tuning rate for both players
class Oppm final : public SaddleAlgorithm {
 public:
  Oppm(BoxSet box_x, BoxSet box_y, StrategyPair initial, OppmSettings settings = {});

  StrategyPair emit() override { return pair_; }
  RoundDiagnostics observe(const PayoffPtr& f_t) override;
  std::string_view name() const override { return "oppm"; }

  // rate the next observe will use, barring a doubling event
  double rate_preview() const;
  long round() const { return t_; }
  long stage() const { return stage_; }
  double budget() const { return budget_; }
  double path() const { return path_; }
  double delta_sum() const { return delta_sum_; }
  double running_max() const { return running_max_; }
  // drift between the accumulated increments and the running max they
  // telescope to; any nonzero value means broken bookkeeping
  double telescoping_gap() const { return delta_sum_ - running_max_; }

 private:
  OppmSettings settings_;
  double scale_l_, scale_d_;  // regularizer lipschitz / diameter bounds
  StrategyPair pair_;
  long t_ = 0;
  double budget_;
  long stage_ = 0;
  double path_ = 0.0;
  double raw1_ = 0.0, raw2_ = 0.0;  // signed sums inside the clipped regret proxies
  double running_max_ = 0.0, delta_sum_ = 0.0;
  // the regret-proxy summand of round t needs next round's best response, so
  // one round stays buffered here until it can be finalized
  bool have_prev_ = false, pending_ = false;
  PayoffPtr f_prev_;
  StrategyPair prev_pair_;
  Vec prev_brx_, prev_bry_;
};

struct OptOppmSettings {
  double epsilon = 0.1;
  double budget_x = 1.0, budget_y = 1.0;  // per-player path presets
  SolveOptions solve{};
};

// optimistic variant: the pair comes from a prox on the predictor anchored at
// auxiliary points, which then take a prox step on the revealed payoff.
// emit needs the predictor, so this core does not implement SaddleAlgorithm;
// the lagged and multi-predictor wrappers below do
class OptOppmCore {
 public:
  OptOppmCore(BoxSet box_x, BoxSet box_y, StrategyPair initial_aux, OptOppmSettings settings = {});

  // idempotent until the matching observe; the same predictor instance must
  // be passed to both calls
  StrategyPair emit_with(const PayoffPtr& predictor);
  RoundDiagnostics observe_with(const PayoffPtr& f_t, const PayoffPtr& predictor);

  const BoxSet& box_x() const { return box_x_; }
  const BoxSet& box_y() const { return box_y_; }
  const Vec& aux_x() const { return aux_x_; }
  const Vec& aux_y() const { return aux_y_; }
  long round() const { return t_; }
  long stage_x() const { return stage_x_; }
  long stage_y() const { return stage_y_; }
  double budget_x() const { return budget_x_; }
  double budget_y() const { return budget_y_; }
  double path_x() const { return path_x_; }
  double path_y() const { return path_y_; }
  double delta1_sum() const { return delta1_sum_; }
  double delta2_sum() const { return delta2_sum_; }
  double rate_preview_x() const;
  double rate_preview_y() const;

 private:
  OptOppmSettings settings_;
  BoxSet box_x_, box_y_;
  double l_phi_, l_psi_, d_x_, d_y_;
  Vec aux_x_, aux_y_;
  StrategyPair pair_;
  long t_ = 0;
  double budget_x_, budget_y_;
  long stage_x_ = 0, stage_y_ = 0;
  double path_x_ = 0.0, path_y_ = 0.0;
  double delta1_sum_ = 0.0, delta2_sum_ = 0.0;
  bool have_prev_br_ = false;
  Vec prev_brx_, prev_bry_;
  bool emitted_ = false;
  PayoffPtr pending_h_;
  SolveReport last_solve_;
  double eta_used_ = 0.0, gamma_used_ = 0.0;
  long stage_x_emit_ = 0, stage_y_emit_ = 0;
};

// serves h_t = f_{t-lag_k} for each configured lag, zero payoff before
// enough history exists
class PredictorBank {
 public:
  explicit PredictorBank(std::vector<long> lags);

  std::size_t dim() const { return lags_.size(); }
  const std::vector<long>& lags() const { return lags_; }
  std::vector<PayoffPtr> predictors() const;  // for the upcoming round
  void push(PayoffPtr f);                     // once per round, after observe

 private:
  std::vector<long> lags_;
  long max_lag_;
  std::deque<PayoffPtr> history_;
  PayoffPtr zero_;
};

class LaggedOptOppm final : public SaddleAlgorithm {
 public:
  LaggedOptOppm(BoxSet box_x, BoxSet box_y, StrategyPair initial_aux, long lag = 4,
                OptOppmSettings settings = {});

  StrategyPair emit() override;
  RoundDiagnostics observe(const PayoffPtr& f_t) override;
  std::string_view name() const override { return "optoppm"; }

  const OptOppmCore& core() const { return core_; }
  long lag() const { return bank_.lags()[0]; }

 private:
  OptOppmCore core_;
  PredictorBank bank_;
};

struct MultiPredictorSettings {
  OptOppmSettings inner{};
  long hedge_horizon = 0;  // 0 picks 2*d+1
};

// mixes the bank's predictors with multiplicative weights driven by each
// predictor's worst error at the points the optimistic update touched
class MultiPredictorOptOppm final : public SaddleAlgorithm {
 public:
  MultiPredictorOptOppm(BoxSet box_x, BoxSet box_y, StrategyPair initial_aux,
                        std::vector<long> lags = {4, 5, 6}, MultiPredictorSettings settings = {});

  StrategyPair emit() override;
  RoundDiagnostics observe(const PayoffPtr& f_t) override;
  std::string_view name() const override { return "optoppm_multi"; }

  const OptOppmCore& core() const { return core_; }
  const PredictorBank& bank() const { return bank_; }
  const HedgeState& hedge() const { return hedge_; }

 private:
  OptOppmCore core_;
  PredictorBank bank_;
  HedgeState hedge_;
  std::vector<PayoffPtr> preds_;  // bank snapshot for the in-flight round
  PayoffPtr h_mix_;
  Vec weights_used_;
  bool emitted_ = false;
};

}  // namespace osp
