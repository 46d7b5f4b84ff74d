#pragma once

#include <vector>

#include "osp/payoffs.hpp"
#include "osp/vec.hpp"

namespace osp {

// KL-projection of the normalized weight vector onto the alpha-clipped
// simplex { w : sum w = 1, w_i >= alpha/d }; expected O(d) threshold search
Vec clipped_simplex_solve(const Vec& w, double alpha);

double kl_divergence(const Vec& p, const Vec& q);

// multiplicative-weights step over the clipped simplex with a self-tuning
// temperature; the horizon guess doubles whenever the round index passes it
class HedgeState {
 public:
  HedgeState(std::size_t d, long horizon_guess, double epsilon);

  const Vec& weights() const { return weights_; }
  std::size_t dim() const { return weights_.size(); }
  long horizon_guess() const { return horizon_guess_; }
  double alpha() const { return alpha_; }
  double sigma_sum() const { return sigma_sum_; }

  struct StepResult {
    double theta = 0.0, sigma = 0.0;
    bool doubled = false;
  };
  StepResult step(const Vec& loss, long t);

 private:
  Vec weights_;
  long horizon_guess_;
  double epsilon_, alpha_, sigma_sum_ = 0.0;
};

// per-expert loss: worst absolute payoff-prediction gap over the three probe
// points the optimistic update touched this round
Vec loss_vector(const PayoffOracle& payoff, const std::vector<PayoffPtr>& predictors,
                const Vec& x_t, const Vec& x_aux_next, const Vec& y_t, const Vec& y_aux_next);

}  // namespace osp
