#pragma once

#include "osp/geometry.hpp"
#include "osp/payoffs.hpp"
#include "osp/vec.hpp"

namespace osp {

struct RoundIncrements {
  double dgap = 0.0, reg1 = 0.0, reg2 = 0.0;
  double nereg = 0.0;  // signed; meaningless when nereg_available is false
  double path = 0.0, vt = 0.0;
  bool nereg_available = true;
  Vec br_x, br_y;
};

struct MetricsSnapshot {
  long t = 0;
  double dgap_avg = 0.0, nereg_avg = 0.0, reg1_avg = 0.0, reg2_avg = 0.0;
  double path = 0.0, vt = 0.0;
  bool nereg_available = true;
};

// online sums of the per-round gap quantities; the equilibrium regret is kept
// as a signed sum so cancellation shows up, with |.| applied at snapshot time
class MetricsAccumulator {
 public:
  MetricsAccumulator(BoxSet box_x, BoxSet box_y);

  // computes this round's best responses itself
  RoundIncrements record_round(const PayoffPtr& f, const StrategyPair& pair);
  // reuses best responses the caller already computed, keeping its path
  // bookkeeping bit-identical with the algorithm's
  RoundIncrements record_round(const PayoffPtr& f, const StrategyPair& pair, Vec br_x, Vec br_y);

  MetricsSnapshot snapshot() const;
  long rounds() const { return t_; }
  double dgap_sum() const { return dgap_; }
  double reg1_sum() const { return reg1_; }
  double reg2_sum() const { return reg2_; }
  double nereg_signed() const { return nereg_signed_; }
  double path_sum() const { return path_; }
  double vt_sum() const { return vt_; }
  bool nereg_available() const { return nereg_ok_; }

 private:
  BoxSet box_x_, box_y_;
  long t_ = 0;
  double dgap_ = 0.0, reg1_ = 0.0, reg2_ = 0.0, nereg_signed_ = 0.0;
  double path_ = 0.0, vt_ = 0.0;
  bool nereg_ok_ = true;
  bool have_prev_ = false;
  Vec prev_brx_, prev_bry_;
  PayoffPtr prev_f_;
};

}  // namespace osp
