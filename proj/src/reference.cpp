#include "osp/reference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace osp {

namespace {

std::vector<double> grid_points(const BoxSet& box, double step) {
  const double lo = box.lower()[0], hi = box.upper()[0];
  std::vector<double> pts;
  const long n = static_cast<long>(std::floor((hi - lo) / step));
  pts.reserve(static_cast<std::size_t>(n) + 2);
  for (long i = 0; i <= n; ++i) pts.push_back(lo + step * static_cast<double>(i));
  if (pts.back() < hi) pts.push_back(hi);
  return pts;
}

}  // namespace

Vec reference_clipped_projection(const Vec& w, double alpha) {
  const std::size_t d = w.size();
  if (d == 0) throw std::invalid_argument("reference projection: empty weights");
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::invalid_argument("reference projection: alpha must be in (0, 1]");
  double total = 0.0;
  for (double v : w) {
    if (!std::isfinite(v) || v < 0.0)
      throw std::invalid_argument("reference projection: weights must be non-negative and finite");
    total += v;
  }
  if (!(total > 0.0)) throw std::invalid_argument("reference projection: all weights are zero");

  const double floor = alpha / static_cast<double>(d);
  const auto mass = [&](double c) {
    double s = 0.0;
    for (double v : w) s += std::max(floor, c * v);
    return s;
  };
  if (mass(0.0) >= 1.0) return Vec(d, floor);  // only possible when alpha == 1

  double lo = 0.0, hi = 1.0 / total;
  while (mass(hi) < 1.0) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (mass(mid) < 1.0 ? lo : hi) = mid;
  }
  const double c = 0.5 * (lo + hi);
  Vec out(d);
  for (std::size_t i = 0; i < d; ++i) out[i] = std::max(floor, c * w[i]);
  return out;
}

GridSaddleResult reference_grid_prox(const PayoffOracle& payoff, double eta, double gamma,
                                     double x_anchor, double y_anchor, const BoxSet& box_x,
                                     const BoxSet& box_y, double step) {
  if (box_x.dim() != 1 || box_y.dim() != 1)
    throw std::invalid_argument("grid prox: scalar boxes required");
  const std::vector<double> xs = grid_points(box_x, step);
  const std::vector<double> ys = grid_points(box_y, step);

  const auto objective = [&](double x, double y) {
    return payoff.value({x}, {y}) + 0.5 * (x - x_anchor) * (x - x_anchor) / eta -
           0.5 * (y - y_anchor) * (y - y_anchor) / gamma;
  };

  GridSaddleResult best;
  double best_outer = std::numeric_limits<double>::infinity();
  std::size_t j = 0;
  for (double x : xs) {
    double cur = objective(x, ys[j]);
    while (j + 1 < ys.size()) {
      const double nxt = objective(x, ys[j + 1]);
      if (nxt < cur) break;
      cur = nxt;
      ++j;
    }
    if (cur < best_outer) {
      best_outer = cur;
      best = {x, ys[j], cur};
    }
  }
  return best;
}

double reference_grid_min_step(const PayoffOracle& payoff, double y_fixed, double eta,
                               double anchor, const BoxSet& box, double step) {
  if (box.dim() != 1) throw std::invalid_argument("grid min: scalar box required");
  double best_x = 0.0, best_v = std::numeric_limits<double>::infinity();
  for (double x : grid_points(box, step)) {
    const double v = eta * payoff.value({x}, {y_fixed}) + 0.5 * (x - anchor) * (x - anchor);
    if (v < best_v) {
      best_v = v;
      best_x = x;
    }
  }
  return best_x;
}

}  // namespace osp
