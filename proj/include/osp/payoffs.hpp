#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "osp/geometry.hpp"
#include "osp/vec.hpp"

namespace osp {

// scalar convex-concave quadratic
//   f(x, y) = 0.5*xx*x^2 + xy*x*y - 0.5*yy*y^2 + bx*x + by*y + c,  xx, yy >= 0
// every shipped payoff reduces to this form, which is what gives the inner
// solver its exact path; mixtures combine linearly in the coefficients
struct QuadraticForm {
  double xx = 0.0, xy = 0.0, yy = 0.0, bx = 0.0, by = 0.0, c = 0.0;

  double value(double x, double y) const {
    return 0.5 * xx * x * x + xy * x * y - 0.5 * yy * y * y + bx * x + by * y + c;
  }
  double grad_x(double x, double y) const { return xx * x + xy * y + bx; }
  double grad_y(double x, double y) const { return xy * x - yy * y + by; }
  bool is_zero() const {
    return xx == 0.0 && xy == 0.0 && yy == 0.0 && bx == 0.0 && by == 0.0 && c == 0.0;
  }
};

// one round's payoff f_t; the x player minimizes, the y player maximizes.
// best responses and minimax are oracle methods rather than generic solves:
// the shipped families have closed forms, custom payoffs supply their own
// (golden_section_min below helps with smooth scalar sections)
class PayoffOracle {
 public:
  virtual ~PayoffOracle() = default;

  virtual double value(const Vec& x, const Vec& y) const = 0;
  virtual Vec grad_x(const Vec& x, const Vec& y) const = 0;
  virtual Vec grad_y(const Vec& x, const Vec& y) const = 0;

  virtual Vec best_response_x(const Vec& y, const BoxSet& box_x) const = 0;
  virtual Vec best_response_y(const Vec& x, const BoxSet& box_y) const = 0;

  // max over y of min over x; nullopt when no oracle is available
  virtual std::optional<double> minimax_value(const BoxSet& box_x, const BoxSet& box_y) const = 0;

  virtual double grad_bound_x(const BoxSet& box_x, const BoxSet& box_y) const = 0;
  virtual double grad_bound_y(const BoxSet& box_x, const BoxSet& box_y) const = 0;

  // present for the scalar quadratic family; enables closed-form prox solves
  virtual std::optional<QuadraticForm> quadratic_form() const { return std::nullopt; }
};

using PayoffPtr = std::shared_ptr<const PayoffOracle>;

// f(x, y) = 0.5*(x-a)^2 - 0.5*(y-b)^2 + (x-a)*(y-b), saddle at (a, b)
class QuadraticSaddle final : public PayoffOracle {
 public:
  QuadraticSaddle(double a, double b);
  double a() const { return a_; }
  double b() const { return b_; }

  double value(double x, double y) const {
    const double u = x - a_, v = y - b_;
    return 0.5 * u * u - 0.5 * v * v + u * v;
  }

  double value(const Vec& x, const Vec& y) const override;
  Vec grad_x(const Vec& x, const Vec& y) const override;
  Vec grad_y(const Vec& x, const Vec& y) const override;
  Vec best_response_x(const Vec& y, const BoxSet& box_x) const override;
  Vec best_response_y(const Vec& x, const BoxSet& box_y) const override;
  std::optional<double> minimax_value(const BoxSet& box_x, const BoxSet& box_y) const override;
  double grad_bound_x(const BoxSet& box_x, const BoxSet& box_y) const override;
  double grad_bound_y(const BoxSet& box_x, const BoxSet& box_y) const override;
  std::optional<QuadraticForm> quadratic_form() const override;

 private:
  double a_, b_;
};

// f(x, y) = (x-a)^2 - (y-b)^2; no cross term, so each best response is just
// the clamped saddle coordinate
class SeparableQuadratic final : public PayoffOracle {
 public:
  SeparableQuadratic(double a, double b);
  double a() const { return a_; }
  double b() const { return b_; }

  double value(double x, double y) const {
    const double u = x - a_, v = y - b_;
    return u * u - v * v;
  }

  double value(const Vec& x, const Vec& y) const override;
  Vec grad_x(const Vec& x, const Vec& y) const override;
  Vec grad_y(const Vec& x, const Vec& y) const override;
  Vec best_response_x(const Vec& y, const BoxSet& box_x) const override;
  Vec best_response_y(const Vec& x, const BoxSet& box_y) const override;
  std::optional<double> minimax_value(const BoxSet& box_x, const BoxSet& box_y) const override;
  double grad_bound_x(const BoxSet& box_x, const BoxSet& box_y) const override;
  double grad_bound_y(const BoxSet& box_x, const BoxSet& box_y) const override;
  std::optional<QuadraticForm> quadratic_form() const override;

 private:
  double a_, b_;
};

// identically zero; the placeholder predictor before history exists
class ZeroPayoff final : public PayoffOracle {
 public:
  double value(const Vec& x, const Vec& y) const override;
  Vec grad_x(const Vec& x, const Vec& y) const override;
  Vec grad_y(const Vec& x, const Vec& y) const override;
  Vec best_response_x(const Vec& y, const BoxSet& box_x) const override;
  Vec best_response_y(const Vec& x, const BoxSet& box_y) const override;
  std::optional<double> minimax_value(const BoxSet& box_x, const BoxSet& box_y) const override;
  double grad_bound_x(const BoxSet& box_x, const BoxSet& box_y) const override;
  double grad_bound_y(const BoxSet& box_x, const BoxSet& box_y) const override;
  std::optional<QuadraticForm> quadratic_form() const override;
};

// convex combination of member payoffs, evaluated pointwise so constant
// offsets survive; never replaced by a mean-parameter member
class WeightedPayoff final : public PayoffOracle {
 public:
  WeightedPayoff(Vec weights, std::vector<PayoffPtr> members);
  const Vec& weights() const { return weights_; }
  const std::vector<PayoffPtr>& members() const { return members_; }

  double value(const Vec& x, const Vec& y) const override;
  Vec grad_x(const Vec& x, const Vec& y) const override;
  Vec grad_y(const Vec& x, const Vec& y) const override;
  Vec best_response_x(const Vec& y, const BoxSet& box_x) const override;
  Vec best_response_y(const Vec& x, const BoxSet& box_y) const override;
  std::optional<double> minimax_value(const BoxSet& box_x, const BoxSet& box_y) const override;
  double grad_bound_x(const BoxSet& box_x, const BoxSet& box_y) const override;
  double grad_bound_y(const BoxSet& box_x, const BoxSet& box_y) const override;
  std::optional<QuadraticForm> quadratic_form() const override;

 private:
  Vec weights_;
  std::vector<PayoffPtr> members_;
  std::optional<QuadraticForm> form_;  // combined coefficients when all members expose one
};

PayoffPtr combine(Vec weights, std::vector<PayoffPtr> members);

// sup-norm distance between two payoffs over the boxes; exact (corner
// evaluation) when both expose forms with equal quadratic parts, which makes
// their difference affine; nullopt otherwise
std::optional<double> rho_distance(const PayoffOracle& f, const PayoffOracle& g,
                                   const BoxSet& box_x, const BoxSet& box_y);

// helper for custom oracles: minimize a smooth scalar section on [lo, hi]
double golden_section_min(const std::function<double(double)>& fn, double lo, double hi,
                          double tol = 1e-10, int max_iter = 200);

}  // namespace osp
