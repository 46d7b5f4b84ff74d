#include "osp/metrics.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace osp {

MetricsAccumulator::MetricsAccumulator(BoxSet box_x, BoxSet box_y)
    : box_x_(std::move(box_x)), box_y_(std::move(box_y)) {}

RoundIncrements MetricsAccumulator::record_round(const PayoffPtr& f, const StrategyPair& pair) {
  if (!f) throw std::invalid_argument("metrics: payoff required");
  return record_round(f, pair, f->best_response_x(pair.y, box_x_),
                      f->best_response_y(pair.x, box_y_));
}

RoundIncrements MetricsAccumulator::record_round(const PayoffPtr& f, const StrategyPair& pair,
                                                 Vec br_x, Vec br_y) {
  if (!f) throw std::invalid_argument("metrics: payoff required");
  if (!box_x_.contains(pair.x, 1e-12) || !box_y_.contains(pair.y, 1e-12))
    throw std::invalid_argument("metrics: pair outside the boxes");
  ++t_;

  RoundIncrements inc;
  const double played = f->value(pair.x, pair.y);
  inc.reg1 = played - f->value(br_x, pair.y);
  inc.reg2 = f->value(pair.x, br_y) - played;
  inc.dgap = inc.reg1 + inc.reg2;
  reg1_ += inc.reg1;
  reg2_ += inc.reg2;
  dgap_ += inc.dgap;

  if (auto v = f->minimax_value(box_x_, box_y_)) {
    inc.nereg = played - *v;
    nereg_signed_ += inc.nereg;
  } else {
    inc.nereg_available = false;
    nereg_ok_ = false;
  }

  if (have_prev_) {
    inc.path = distance(br_x, prev_brx_) + distance(br_y, prev_bry_);
    path_ += inc.path;
    if (auto r = rho_distance(*f, *prev_f_, box_x_, box_y_)) {
      inc.vt = *r;
      vt_ += inc.vt;
    }
  }

  prev_brx_ = br_x;
  prev_bry_ = br_y;
  prev_f_ = f;
  have_prev_ = true;
  inc.br_x = std::move(br_x);
  inc.br_y = std::move(br_y);
  return inc;
}

MetricsSnapshot MetricsAccumulator::snapshot() const {
  MetricsSnapshot s;
  s.t = t_;
  s.path = path_;
  s.vt = vt_;
  s.nereg_available = nereg_ok_;
  if (t_ > 0) {
    const double n = static_cast<double>(t_);
    s.dgap_avg = dgap_ / n;
    s.nereg_avg = std::abs(nereg_signed_) / n;
    s.reg1_avg = reg1_ / n;
    s.reg2_avg = reg2_ / n;
  }
  return s;
}

}  // namespace osp
