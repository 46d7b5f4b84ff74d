#include "osp/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace osp {

namespace {

void check_initial(const StrategyPair& p, const BoxSet& bx, const BoxSet& by) {
  if (!bx.contains(p.x) || !by.contains(p.y))
    throw std::invalid_argument("algorithm: initial pair outside the boxes");
}

}  // namespace

Oppm::Oppm(BoxSet box_x, BoxSet box_y, StrategyPair initial, OppmSettings settings)
    : SaddleAlgorithm(std::move(box_x), std::move(box_y)),
      settings_(settings),
      pair_(std::move(initial)),
      budget_(settings.budget) {
  check_initial(pair_, box_x_, box_y_);
  if (!(settings_.epsilon > 0.0)) throw std::invalid_argument("oppm: epsilon must be positive");
  if (!(settings_.budget > 0.0)) throw std::invalid_argument("oppm: budget must be positive");
  SquareNormRegularizer reg;
  scale_l_ = std::max(reg.lipschitz(box_x_), reg.lipschitz(box_y_));
  scale_d_ = std::max(box_x_.diameter(), box_y_.diameter());
}

double Oppm::rate_preview() const {
  return scale_l_ * (2.0 * scale_d_ + budget_) / (settings_.epsilon + delta_sum_);
}

RoundDiagnostics Oppm::observe(const PayoffPtr& f) {
  if (!f) throw std::invalid_argument("observe: payoff required");
  ++t_;
  RoundDiagnostics diag;
  diag.t = t_;
  diag.pair = pair_;

  // comparator best responses under the revealed payoff
  Vec brx = f->best_response_x(pair_.y, box_x_);
  Vec bry = f->best_response_y(pair_.x, box_y_);

  if (have_prev_) path_ += distance(brx, prev_brx_) + distance(bry, prev_bry_);
  while (path_ > budget_) {
    budget_ *= 2.0;
    ++stage_;
    diag.doubled = true;
    // a fresh stage starts with an empty rate denominator; the buffered
    // summand belongs to the finished stage and is discarded with it
    raw1_ = raw2_ = 0.0;
    running_max_ = 0.0;
    delta_sum_ = 0.0;
    pending_ = false;
  }

  // the buffered summand has not landed yet, so this denominator covers
  // increments through round t-2, as the schedule prescribes
  const double eta = scale_l_ * (2.0 * scale_d_ + budget_) / (settings_.epsilon + delta_sum_);

  ProxProblem prob{f, eta, eta, pair_.x, pair_.y, box_x_, box_y_};
  diag.solve = solve_joint_prox(prob, settings_.solve);
  StrategyPair next{diag.solve.x, diag.solve.y};
  diag.eta = diag.solve.eta_used;
  diag.gamma = diag.solve.gamma_used;

  // finalize round t-1's regret-proxy summands, now that this round's best
  // responses and pair exist
  if (pending_) {
    const PayoffOracle& g = *f_prev_;
    const double s1 = g.value(prev_pair_.x, prev_pair_.y) - g.value(pair_.x, pair_.y) +
                      g.value(brx, pair_.y) - g.value(prev_brx_, prev_pair_.y);
    const double s2 = g.value(prev_pair_.x, prev_bry_) - g.value(pair_.x, bry) +
                      g.value(pair_.x, pair_.y) - g.value(prev_pair_.x, prev_pair_.y);
    raw1_ += s1;
    raw2_ += s2;
    const double clipped1 = std::max(raw1_, 0.0);
    const double clipped2 = std::max(raw2_, 0.0);
    const double sigma = std::max(clipped1, clipped2);
    const double delta = sigma > running_max_ ? sigma - running_max_ : 0.0;
    delta_sum_ += delta;
    running_max_ = std::max(running_max_, sigma);
    diag.sigma1 = clipped1;
    diag.sigma2 = clipped2;
    diag.delta1 = delta;
  }

  f_prev_ = f;
  prev_pair_ = pair_;
  prev_brx_ = brx;
  prev_bry_ = bry;
  have_prev_ = true;
  pending_ = true;
  pair_ = std::move(next);

  diag.br_x = std::move(brx);
  diag.br_y = std::move(bry);
  diag.path = path_;
  diag.stage = stage_;
  diag.stage_x = diag.stage_y = stage_;
  return diag;
}

OptOppmCore::OptOppmCore(BoxSet box_x, BoxSet box_y, StrategyPair initial_aux,
                         OptOppmSettings settings)
    : settings_(settings),
      box_x_(std::move(box_x)),
      box_y_(std::move(box_y)),
      aux_x_(std::move(initial_aux.x)),
      aux_y_(std::move(initial_aux.y)),
      budget_x_(settings.budget_x),
      budget_y_(settings.budget_y) {
  check_initial({aux_x_, aux_y_}, box_x_, box_y_);
  if (!(settings_.epsilon > 0.0)) throw std::invalid_argument("optoppm: epsilon must be positive");
  if (!(settings_.budget_x > 0.0) || !(settings_.budget_y > 0.0))
    throw std::invalid_argument("optoppm: budgets must be positive");
  SquareNormRegularizer reg;
  l_phi_ = reg.lipschitz(box_x_);
  l_psi_ = reg.lipschitz(box_y_);
  d_x_ = box_x_.diameter();
  d_y_ = box_y_.diameter();
}

double OptOppmCore::rate_preview_x() const {
  return l_phi_ * (d_x_ + budget_x_) / (settings_.epsilon + delta1_sum_);
}

double OptOppmCore::rate_preview_y() const {
  return l_psi_ * (d_y_ + budget_y_) / (settings_.epsilon + delta2_sum_);
}

StrategyPair OptOppmCore::emit_with(const PayoffPtr& predictor) {
  if (!predictor) throw std::invalid_argument("emit: predictor required");
  if (emitted_) {
    if (predictor.get() != pending_h_.get())
      throw std::logic_error("emit: predictor changed between repeated emits");
    return pair_;
  }
  ++t_;
  ProxProblem prob{predictor, rate_preview_x(), rate_preview_y(), aux_x_, aux_y_, box_x_, box_y_};
  last_solve_ = solve_joint_prox(prob, settings_.solve);
  pair_ = {last_solve_.x, last_solve_.y};
  eta_used_ = last_solve_.eta_used;
  gamma_used_ = last_solve_.gamma_used;
  // the rates above belong to the stage current right now; observe may double
  // the budgets afterwards, which must not relabel this round
  stage_x_emit_ = stage_x_;
  stage_y_emit_ = stage_y_;
  pending_h_ = predictor;
  emitted_ = true;
  return pair_;
}

RoundDiagnostics OptOppmCore::observe_with(const PayoffPtr& f, const PayoffPtr& predictor) {
  if (!f) throw std::invalid_argument("observe: payoff required");
  if (!emitted_) throw std::logic_error("observe: no emitted pair to score");
  if (predictor.get() != pending_h_.get())
    throw std::logic_error("observe: predictor differs from the one used at emit");

  RoundDiagnostics diag;
  diag.t = t_;
  diag.pair = pair_;
  diag.eta = eta_used_;
  diag.gamma = gamma_used_;
  diag.solve = last_solve_;

  Vec brx = f->best_response_x(pair_.y, box_x_);
  Vec bry = f->best_response_y(pair_.x, box_y_);

  bool doubled_x = false, doubled_y = false;
  if (have_prev_br_) {
    path_x_ += distance(brx, prev_brx_);
    path_y_ += distance(bry, prev_bry_);
  }
  while (path_x_ > budget_x_) {
    budget_x_ *= 2.0;
    ++stage_x_;
    doubled_x = true;
    delta1_sum_ = 0.0;
  }
  while (path_y_ > budget_y_) {
    budget_y_ *= 2.0;
    ++stage_y_;
    doubled_y = true;
    delta2_sum_ = 0.0;
  }

  // auxiliary prox steps on the revealed payoff, at the same capped rates the
  // emit actually used
  Vec aux_x_next = prox_min_step(*f, pair_.y, eta_used_, aux_x_, box_x_, settings_.solve);
  Vec aux_y_next = prox_max_step(*f, pair_.x, gamma_used_, aux_y_, box_y_, settings_.solve);

  const PayoffOracle& h = *predictor;
  const double d1 = f->value(pair_.x, pair_.y) - h.value(pair_.x, pair_.y) +
                    h.value(aux_x_next, pair_.y) - f->value(aux_x_next, pair_.y) -
                    coupling(aux_x_next, pair_.x) / eta_used_;
  const double d2 = f->value(pair_.x, aux_y_next) - h.value(pair_.x, aux_y_next) +
                    h.value(pair_.x, pair_.y) - f->value(pair_.x, pair_.y) -
                    coupling(aux_y_next, pair_.y) / gamma_used_;
  if (d1 < -kDeltaSlack || d2 < -kDeltaSlack)
    throw std::runtime_error(
        "negative-delta: denominator increment fell below zero; emit and "
        "observe likely saw different payoffs");
  diag.delta1 = d1;
  diag.delta2 = d2;
  // a doubling round's increment was produced under the discarded stage's
  // rate, so it does not seed the fresh denominator
  if (!doubled_x) delta1_sum_ += std::max(d1, 0.0);
  if (!doubled_y) delta2_sum_ += std::max(d2, 0.0);

  aux_x_ = std::move(aux_x_next);
  aux_y_ = std::move(aux_y_next);
  prev_brx_ = brx;
  prev_bry_ = bry;
  have_prev_br_ = true;
  emitted_ = false;
  pending_h_.reset();

  diag.br_x = std::move(brx);
  diag.br_y = std::move(bry);
  diag.path = path_x_ + path_y_;
  diag.stage = stage_x_ + stage_y_;
  diag.stage_x = stage_x_emit_;
  diag.stage_y = stage_y_emit_;
  diag.doubled = doubled_x || doubled_y;
  return diag;
}

PredictorBank::PredictorBank(std::vector<long> lags)
    : lags_(std::move(lags)), zero_(std::make_shared<ZeroPayoff>()) {
  if (lags_.empty()) throw std::invalid_argument("predictor bank: need at least one lag");
  for (long n : lags_)
    if (n < 1) throw std::invalid_argument("predictor bank: lags must be >= 1");
  max_lag_ = *std::max_element(lags_.begin(), lags_.end());
}

std::vector<PayoffPtr> PredictorBank::predictors() const {
  std::vector<PayoffPtr> out;
  out.reserve(lags_.size());
  const long have = static_cast<long>(history_.size());
  for (long n : lags_)
    out.push_back(n <= have ? history_[static_cast<std::size_t>(have - n)] : zero_);
  return out;
}

void PredictorBank::push(PayoffPtr f) {
  if (!f) throw std::invalid_argument("predictor bank: null payoff");
  history_.push_back(std::move(f));
  if (static_cast<long>(history_.size()) > max_lag_) history_.pop_front();
}

LaggedOptOppm::LaggedOptOppm(BoxSet box_x, BoxSet box_y, StrategyPair initial_aux, long lag,
                             OptOppmSettings settings)
    : SaddleAlgorithm(std::move(box_x), std::move(box_y)),
      core_(box_x_, box_y_, std::move(initial_aux), settings),
      bank_({lag}) {}

StrategyPair LaggedOptOppm::emit() { return core_.emit_with(bank_.predictors()[0]); }

RoundDiagnostics LaggedOptOppm::observe(const PayoffPtr& f) {
  RoundDiagnostics diag = core_.observe_with(f, bank_.predictors()[0]);
  bank_.push(f);
  return diag;
}

MultiPredictorOptOppm::MultiPredictorOptOppm(BoxSet box_x, BoxSet box_y, StrategyPair initial_aux,
                                             std::vector<long> lags,
                                             MultiPredictorSettings settings)
    : SaddleAlgorithm(std::move(box_x), std::move(box_y)),
      core_(box_x_, box_y_, std::move(initial_aux), settings.inner),
      bank_(std::move(lags)),
      hedge_(bank_.dim(),
             settings.hedge_horizon > 0 ? settings.hedge_horizon
                                        : 2 * static_cast<long>(bank_.dim()) + 1,
             settings.inner.epsilon) {}

StrategyPair MultiPredictorOptOppm::emit() {
  if (!emitted_) {
    preds_ = bank_.predictors();
    weights_used_ = hedge_.weights();
    h_mix_ = combine(weights_used_, preds_);
    emitted_ = true;
  }
  return core_.emit_with(h_mix_);
}

RoundDiagnostics MultiPredictorOptOppm::observe(const PayoffPtr& f) {
  if (!emitted_) throw std::logic_error("observe: no emitted pair to score");
  RoundDiagnostics diag = core_.observe_with(f, h_mix_);
  // the aux anchors now hold next round's values, which are exactly the
  // optimistic probe points this round's predictor errors are scored at
  const Vec loss = loss_vector(*f, preds_, diag.pair.x, core_.aux_x(), diag.pair.y, core_.aux_y());
  const HedgeState::StepResult hs = hedge_.step(loss, diag.t);
  diag.hedge_theta = hs.theta;
  diag.hedge_sigma = hs.sigma;
  diag.doubled = diag.doubled || hs.doubled;
  diag.weights = weights_used_;
  bank_.push(f);
  h_mix_.reset();
  preds_.clear();
  emitted_ = false;
  return diag;
}

}  // namespace osp
