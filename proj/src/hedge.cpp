#include "osp/hedge.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace osp {

Vec clipped_simplex_solve(const Vec& w, double alpha) {
  const std::size_t d = w.size();
  if (d == 0) throw std::invalid_argument("clipped simplex: empty weights");
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::invalid_argument("clipped simplex: alpha must be in (0, 1]");
  double total = 0.0;
  for (double v : w) {
    if (!std::isfinite(v) || v < 0.0)
      throw std::invalid_argument("clipped simplex: weights must be non-negative and finite");
    total += v;
  }
  if (!(total > 0.0)) throw std::invalid_argument("clipped simplex: all weights are zero");

  const double dd = static_cast<double>(d);
  std::vector<std::size_t> cur(d);
  std::iota(cur.begin(), cur.end(), std::size_t{0});
  double clipped_count = 0.0, clipped_mass = 0.0;
  double cut = -std::numeric_limits<double>::infinity();

  std::vector<double> scratch;
  while (!cur.empty()) {
    // median of the undecided entries as the threshold candidate
    scratch.clear();
    for (auto i : cur) scratch.push_back(w[i]);
    const std::size_t mid = scratch.size() / 2;
    std::nth_element(scratch.begin(), scratch.begin() + mid, scratch.end());
    const double med = scratch[mid];

    std::vector<std::size_t> low, high;
    double low_mass = 0.0, mid_mass = 0.0;
    double mid_count = 0.0;
    for (auto i : cur) {
      if (w[i] < med) {
        low.push_back(i);
        low_mass += w[i];
      } else if (w[i] > med) {
        high.push_back(i);
      } else {
        mid_count += 1.0;
        mid_mass += w[i];
      }
    }

    const double scaled = med * (dd - (clipped_count + static_cast<double>(low.size())) * alpha) /
                          (total - (clipped_mass + low_mass));
    if (scaled < alpha) {
      // the candidate itself lands below the floor: clip it and all below
      clipped_count += static_cast<double>(low.size()) + mid_count;
      clipped_mass += low_mass + mid_mass;
      cut = med;
      if (high.empty()) {
        // everything undecided got clipped; the threshold moves to the next
        // distinct value above so equal entries stay in the floor branch
        double next_up = std::numeric_limits<double>::infinity();
        for (double v : w)
          if (v > med) next_up = std::min(next_up, v);
        cut = next_up;
      }
      cur = std::move(high);
    } else {
      cut = med;
      cur = std::move(low);
    }
  }

  Vec out(d);
  const double floor = alpha / dd;
  for (std::size_t i = 0; i < d; ++i) {
    if (w[i] < cut)
      out[i] = floor;
    else
      out[i] = (w[i] / dd) * (dd - clipped_count * alpha) / (total - clipped_mass);
  }
  return out;
}

double kl_divergence(const Vec& p, const Vec& q) {
  if (p.size() != q.size()) throw std::invalid_argument("kl: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(p[i] > 0.0) || !(q[i] > 0.0))
      throw std::invalid_argument("kl: supports must be strictly positive");
    s += p[i] * std::log(p[i] / q[i]);
  }
  return s;
}

HedgeState::HedgeState(std::size_t d, long horizon_guess, double epsilon)
    : weights_(d, d > 0 ? 1.0 / static_cast<double>(d) : 0.0),
      horizon_guess_(horizon_guess),
      epsilon_(epsilon) {
  if (d == 0) throw std::invalid_argument("hedge: need at least one expert");
  if (horizon_guess_ <= static_cast<long>(d))
    throw std::invalid_argument("hedge: horizon guess must exceed the expert count");
  if (!(epsilon_ > 0.0)) throw std::invalid_argument("hedge: epsilon must be positive");
  alpha_ = static_cast<double>(d) / static_cast<double>(horizon_guess_);
}

HedgeState::StepResult HedgeState::step(const Vec& loss, long t) {
  const std::size_t d = weights_.size();
  if (loss.size() != d) throw std::invalid_argument("hedge: loss dimension mismatch");
  if (!all_finite(loss)) throw std::runtime_error("hedge: non-finite loss");

  StepResult res;
  while (t > horizon_guess_) {
    horizon_guess_ *= 2;
    res.doubled = true;
  }
  alpha_ = static_cast<double>(d) / static_cast<double>(horizon_guess_);

  res.theta = std::log(static_cast<double>(horizon_guess_)) / (epsilon_ + sigma_sum_);

  // multiplicative update in log space, max-shifted before exponentiation
  Vec logs(d);
  double shift = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < d; ++i) {
    logs[i] = std::log(weights_[i]) - res.theta * loss[i];
    shift = std::max(shift, logs[i]);
  }
  Vec w(d);
  for (std::size_t i = 0; i < d; ++i) w[i] = std::exp(logs[i] - shift);

  Vec next = clipped_simplex_solve(w, alpha_);
  if (!all_finite(next)) throw std::runtime_error("hedge: non-finite weights");

  double gain = 0.0;
  for (std::size_t i = 0; i < d; ++i) gain += loss[i] * (weights_[i] - next[i]);
  res.sigma = gain - kl_divergence(next, weights_) / res.theta;
  sigma_sum_ += res.sigma;
  if (!(epsilon_ + sigma_sum_ > 0.0))
    throw std::runtime_error("hedge: temperature denominator lost positivity");

  weights_ = std::move(next);
  return res;
}

Vec loss_vector(const PayoffOracle& payoff, const std::vector<PayoffPtr>& predictors,
                const Vec& x_t, const Vec& x_aux_next, const Vec& y_t, const Vec& y_aux_next) {
  Vec out(predictors.size(), 0.0);
  const double f_play = payoff.value(x_t, y_t);
  const double f_aux_x = payoff.value(x_aux_next, y_t);
  const double f_aux_y = payoff.value(x_t, y_aux_next);
  for (std::size_t k = 0; k < predictors.size(); ++k) {
    const PayoffOracle& h = *predictors[k];
    const double a = std::abs(f_play - h.value(x_t, y_t));
    const double b = std::abs(f_aux_x - h.value(x_aux_next, y_t));
    const double c = std::abs(f_aux_y - h.value(x_t, y_aux_next));
    out[k] = std::max({a, b, c});
  }
  return out;
}

}  // namespace osp
