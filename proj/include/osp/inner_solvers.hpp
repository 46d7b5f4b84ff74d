#pragma once

#include "osp/geometry.hpp"
#include "osp/payoffs.hpp"

namespace osp {

// rates at or above this are clamped before solving; the cap shows up in the
// report so callers divide by the value actually used
inline constexpr double kRateCap = 1e12;

// min over x in box_x, max over y in box_y of
//   payoff(x, y) + coupling(x, x_anchor)/eta - coupling(y, y_anchor)/gamma
struct ProxProblem {
  PayoffPtr payoff;
  double eta = 1.0, gamma = 1.0;
  Vec x_anchor, y_anchor;
  BoxSet box_x, box_y;
};

enum class SolveMethod { closed_form, iterative };

struct SolveReport {
  Vec x, y;
  double residual = 0.0;
  long iterations = 0;
  SolveMethod method = SolveMethod::closed_form;
  double eta_used = 0.0, gamma_used = 0.0;
  bool rate_capped = false;
};

struct SolveOptions {
  double tol = 1e-10;
  long max_iter = 100000;
  enum class Method { automatic, closed_form, iterative } method = Method::automatic;
};

SolveReport solve_joint_prox(const ProxProblem& problem, const SolveOptions& opts = {});

// argmin over the box of eta*payoff(x, y_fixed) + coupling(x, anchor)
Vec prox_min_step(const PayoffOracle& payoff, const Vec& y_fixed, double eta, const Vec& anchor,
                  const BoxSet& box, const SolveOptions& opts = {});

// argmax over the box of gamma*payoff(x_fixed, y) - coupling(y, anchor)
Vec prox_max_step(const PayoffOracle& payoff, const Vec& x_fixed, double gamma, const Vec& anchor,
                  const BoxSet& box, const SolveOptions& opts = {});

// projected-gradient fixed-point gap of a candidate solution, probe step
// min(eta, gamma, 1); zero exactly at the composite saddle point
double fixed_point_residual(const PayoffOracle& payoff, double eta, double gamma,
                            const Vec& x_anchor, const Vec& y_anchor, const Vec& x, const Vec& y,
                            const BoxSet& box_x, const BoxSet& box_y);

}  // namespace osp
