#include "osp/payoffs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace osp {

namespace {

double scalar(const Vec& v, const char* what) {
  if (v.size() != 1) throw std::invalid_argument(std::string(what) + ": expected a scalar point");
  return v[0];
}

double clamp1(double v, const BoxSet& box) {
  if (box.dim() != 1) throw std::invalid_argument("payoff: expected a 1-d box");
  return std::min(std::max(v, box.lower()[0]), box.upper()[0]);
}

// max_{z in [lo, hi]} |z - a|
double max_abs_dev(double a, const BoxSet& box) {
  if (box.dim() != 1) throw std::invalid_argument("payoff: expected a 1-d box");
  return std::max(std::abs(box.lower()[0] - a), std::abs(box.upper()[0] - a));
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + ": non-finite parameter");
}

}  // namespace

QuadraticSaddle::QuadraticSaddle(double a, double b) : a_(a), b_(b) {
  require_finite(a, "quadratic saddle");
  require_finite(b, "quadratic saddle");
}

double QuadraticSaddle::value(const Vec& x, const Vec& y) const {
  return value(scalar(x, "value"), scalar(y, "value"));
}

Vec QuadraticSaddle::grad_x(const Vec& x, const Vec& y) const {
  return {(scalar(x, "grad") - a_) + (scalar(y, "grad") - b_)};
}

Vec QuadraticSaddle::grad_y(const Vec& x, const Vec& y) const {
  return {(scalar(x, "grad") - a_) - (scalar(y, "grad") - b_)};
}

Vec QuadraticSaddle::best_response_x(const Vec& y, const BoxSet& box_x) const {
  return {clamp1(a_ - (scalar(y, "best response") - b_), box_x)};
}

Vec QuadraticSaddle::best_response_y(const Vec& x, const BoxSet& box_y) const {
  return {clamp1(b_ + (scalar(x, "best response") - a_), box_y)};
}

std::optional<double> QuadraticSaddle::minimax_value(const BoxSet& box_x,
                                                     const BoxSet& box_y) const {
  if (!box_x.contains_interior({a_}) || !box_y.contains_interior({b_}))
    throw std::runtime_error("saddle-not-interior: minimax oracle needs the saddle inside the boxes");
  return 0.0;
}

double QuadraticSaddle::grad_bound_x(const BoxSet& box_x, const BoxSet& box_y) const {
  return max_abs_dev(a_, box_x) + max_abs_dev(b_, box_y);
}

double QuadraticSaddle::grad_bound_y(const BoxSet& box_x, const BoxSet& box_y) const {
  return max_abs_dev(a_, box_x) + max_abs_dev(b_, box_y);
}

std::optional<QuadraticForm> QuadraticSaddle::quadratic_form() const {
  QuadraticForm f;
  f.xx = 1.0;
  f.xy = 1.0;
  f.yy = 1.0;
  f.bx = -a_ - b_;
  f.by = b_ - a_;
  f.c = 0.5 * a_ * a_ - 0.5 * b_ * b_ + a_ * b_;
  return f;
}

SeparableQuadratic::SeparableQuadratic(double a, double b) : a_(a), b_(b) {
  require_finite(a, "separable quadratic");
  require_finite(b, "separable quadratic");
}

double SeparableQuadratic::value(const Vec& x, const Vec& y) const {
  return value(scalar(x, "value"), scalar(y, "value"));
}

Vec SeparableQuadratic::grad_x(const Vec& x, const Vec& y) const {
  (void)y;
  return {2.0 * (scalar(x, "grad") - a_)};
}

Vec SeparableQuadratic::grad_y(const Vec& x, const Vec& y) const {
  (void)x;
  return {-2.0 * (scalar(y, "grad") - b_)};
}

Vec SeparableQuadratic::best_response_x(const Vec& y, const BoxSet& box_x) const {
  (void)y;
  return {clamp1(a_, box_x)};
}

Vec SeparableQuadratic::best_response_y(const Vec& x, const BoxSet& box_y) const {
  (void)x;
  return {clamp1(b_, box_y)};
}

std::optional<double> SeparableQuadratic::minimax_value(const BoxSet& box_x,
                                                        const BoxSet& box_y) const {
  // closed containment suffices here: without a cross term the best responses
  // sit at the saddle even when it touches the boundary
  if (!box_x.contains({a_}) || !box_y.contains({b_}))
    throw std::runtime_error("saddle-not-interior: minimax oracle needs the saddle inside the boxes");
  return 0.0;
}

double SeparableQuadratic::grad_bound_x(const BoxSet& box_x, const BoxSet& box_y) const {
  (void)box_y;
  return 2.0 * max_abs_dev(a_, box_x);
}

double SeparableQuadratic::grad_bound_y(const BoxSet& box_x, const BoxSet& box_y) const {
  (void)box_x;
  return 2.0 * max_abs_dev(b_, box_y);
}

std::optional<QuadraticForm> SeparableQuadratic::quadratic_form() const {
  QuadraticForm f;
  f.xx = 2.0;
  f.xy = 0.0;
  f.yy = 2.0;
  f.bx = -2.0 * a_;
  f.by = 2.0 * b_;
  f.c = a_ * a_ - b_ * b_;
  return f;
}

double ZeroPayoff::value(const Vec&, const Vec&) const { return 0.0; }
Vec ZeroPayoff::grad_x(const Vec& x, const Vec&) const { return Vec(x.size(), 0.0); }
Vec ZeroPayoff::grad_y(const Vec&, const Vec& y) const { return Vec(y.size(), 0.0); }

Vec ZeroPayoff::best_response_x(const Vec&, const BoxSet& box_x) const {
  return box_x.project(Vec(box_x.dim(), 0.0));
}

Vec ZeroPayoff::best_response_y(const Vec&, const BoxSet& box_y) const {
  return box_y.project(Vec(box_y.dim(), 0.0));
}

std::optional<double> ZeroPayoff::minimax_value(const BoxSet&, const BoxSet&) const { return 0.0; }
double ZeroPayoff::grad_bound_x(const BoxSet&, const BoxSet&) const { return 0.0; }
double ZeroPayoff::grad_bound_y(const BoxSet&, const BoxSet&) const { return 0.0; }
std::optional<QuadraticForm> ZeroPayoff::quadratic_form() const { return QuadraticForm{}; }

WeightedPayoff::WeightedPayoff(Vec weights, std::vector<PayoffPtr> members)
    : weights_(std::move(weights)), members_(std::move(members)) {
  if (weights_.empty() || weights_.size() != members_.size())
    throw std::invalid_argument("weighted payoff: weights and members must match and be non-empty");
  double sum = 0.0;
  for (double w : weights_) {
    if (!std::isfinite(w) || w < -1e-12)
      throw std::invalid_argument("weighted payoff: weights must be non-negative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("weighted payoff: weights must sum to 1");
  for (const auto& m : members_)
    if (!m) throw std::invalid_argument("weighted payoff: null member");

  QuadraticForm combined;
  bool have = true;
  for (std::size_t k = 0; k < members_.size(); ++k) {
    auto f = members_[k]->quadratic_form();
    if (!f) {
      have = false;
      break;
    }
    const double w = weights_[k];
    combined.xx += w * f->xx;
    combined.xy += w * f->xy;
    combined.yy += w * f->yy;
    combined.bx += w * f->bx;
    combined.by += w * f->by;
    combined.c += w * f->c;
  }
  if (have) form_ = combined;
}

double WeightedPayoff::value(const Vec& x, const Vec& y) const {
  double s = 0.0;
  for (std::size_t k = 0; k < members_.size(); ++k) s += weights_[k] * members_[k]->value(x, y);
  return s;
}

Vec WeightedPayoff::grad_x(const Vec& x, const Vec& y) const {
  Vec out(x.size(), 0.0);
  for (std::size_t k = 0; k < members_.size(); ++k) {
    const Vec g = members_[k]->grad_x(x, y);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += weights_[k] * g[i];
  }
  return out;
}

Vec WeightedPayoff::grad_y(const Vec& x, const Vec& y) const {
  Vec out(y.size(), 0.0);
  for (std::size_t k = 0; k < members_.size(); ++k) {
    const Vec g = members_[k]->grad_y(x, y);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += weights_[k] * g[i];
  }
  return out;
}

Vec WeightedPayoff::best_response_x(const Vec& y, const BoxSet& box_x) const {
  if (form_) {
    const double yv = scalar(y, "best response");
    const double lin = form_->xy * yv + form_->bx;
    if (form_->xx > 0.0) return {clamp1(-lin / form_->xx, box_x)};
    if (lin > 0.0) return {box_x.lower()[0]};
    if (lin < 0.0) return {box_x.upper()[0]};
    return box_x.project({0.0});  // flat section
  }
  if (box_x.dim() != 1)
    throw std::runtime_error("weighted payoff: no best-response oracle for this member set");
  return {golden_section_min([&](double xv) { return value({xv}, y); }, box_x.lower()[0],
                             box_x.upper()[0])};
}

Vec WeightedPayoff::best_response_y(const Vec& x, const BoxSet& box_y) const {
  if (form_) {
    const double xv = scalar(x, "best response");
    const double lin = form_->xy * xv + form_->by;
    if (form_->yy > 0.0) return {clamp1(lin / form_->yy, box_y)};
    if (lin > 0.0) return {box_y.upper()[0]};
    if (lin < 0.0) return {box_y.lower()[0]};
    return box_y.project({0.0});
  }
  if (box_y.dim() != 1)
    throw std::runtime_error("weighted payoff: no best-response oracle for this member set");
  return {golden_section_min([&](double yv) { return -value(x, {yv}); }, box_y.lower()[0],
                             box_y.upper()[0])};
}

std::optional<double> WeightedPayoff::minimax_value(const BoxSet&, const BoxSet&) const {
  return std::nullopt;
}

double WeightedPayoff::grad_bound_x(const BoxSet& box_x, const BoxSet& box_y) const {
  double s = 0.0;
  for (std::size_t k = 0; k < members_.size(); ++k)
    s += weights_[k] * members_[k]->grad_bound_x(box_x, box_y);
  return s;
}

double WeightedPayoff::grad_bound_y(const BoxSet& box_x, const BoxSet& box_y) const {
  double s = 0.0;
  for (std::size_t k = 0; k < members_.size(); ++k)
    s += weights_[k] * members_[k]->grad_bound_y(box_x, box_y);
  return s;
}

std::optional<QuadraticForm> WeightedPayoff::quadratic_form() const { return form_; }

PayoffPtr combine(Vec weights, std::vector<PayoffPtr> members) {
  return std::make_shared<WeightedPayoff>(std::move(weights), std::move(members));
}

std::optional<double> rho_distance(const PayoffOracle& f, const PayoffOracle& g,
                                   const BoxSet& box_x, const BoxSet& box_y) {
  const auto ff = f.quadratic_form();
  const auto gf = g.quadratic_form();
  if (!ff || !gf) return std::nullopt;
  if (box_x.dim() != 1 || box_y.dim() != 1) return std::nullopt;
  // only when the difference is affine is the corner evaluation exact
  if (std::abs(ff->xx - gf->xx) > 1e-12 || std::abs(ff->xy - gf->xy) > 1e-12 ||
      std::abs(ff->yy - gf->yy) > 1e-12)
    return std::nullopt;
  const double dbx = ff->bx - gf->bx, dby = ff->by - gf->by, dc = ff->c - gf->c;
  double best = 0.0;
  for (double xv : {box_x.lower()[0], box_x.upper()[0]})
    for (double yv : {box_y.lower()[0], box_y.upper()[0]})
      best = std::max(best, std::abs(dbx * xv + dby * yv + dc));
  return best;
}

double golden_section_min(const std::function<double(double)>& fn, double lo, double hi,
                          double tol, int max_iter) {
  if (!(lo <= hi)) throw std::invalid_argument("golden section: empty interval");
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = fn(c), fd = fn(d);
  for (int i = 0; i < max_iter && (b - a) > tol; ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = fn(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = fn(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace osp
