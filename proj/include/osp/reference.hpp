#pragma once

#include "osp/geometry.hpp"
#include "osp/payoffs.hpp"
#include "osp/vec.hpp"

namespace osp {

// slow, structurally independent implementations used to cross-check the
// fast paths; they share no code with the production solvers

// stationarity form of the clipped KL projection: w_i = max(alpha/d, c*W_i)
// with the scale c found by bisection on the simplex constraint
Vec reference_clipped_projection(const Vec& w, double alpha);

struct GridSaddleResult {
  double x = 0.0, y = 0.0, value = 0.0;
};

// brute-force grid argmin over x of (max over y) of the prox-regularized
// objective; the inner argmax pointer only ever walks forward, which is valid
// for the shipped payoff family because its cross coefficient is never
// negative
GridSaddleResult reference_grid_prox(const PayoffOracle& payoff, double eta, double gamma,
                                     double x_anchor, double y_anchor, const BoxSet& box_x,
                                     const BoxSet& box_y, double step = 1e-3);

// grid minimizer of eta*f(x, y_fixed) + (x - anchor)^2/2 over the box
double reference_grid_min_step(const PayoffOracle& payoff, double y_fixed, double eta,
                               double anchor, const BoxSet& box, double step = 1e-3);

}  // namespace osp
