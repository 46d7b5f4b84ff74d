#include "osp/inner_solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace osp {

namespace {

double cap_rate(double r, bool* capped) {
  if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("prox: rate must be positive");
  if (r > kRateCap) {
    if (capped) *capped = true;
    return kRateCap;
  }
  return r;
}

// payoff-gradient curvature bound for step sizing; exact for form payoffs,
// probed by finite differences otherwise
double curvature_bound(const PayoffOracle& payoff, const BoxSet& box_x, const BoxSet& box_y) {
  if (auto f = payoff.quadratic_form())
    return std::max(f->xx, f->yy) + std::abs(f->xy);
  SplitMix64 rng(0x5eedC0DEULL);
  double best = 0.0;
  for (int i = 0; i < 16; ++i) {
    const Vec x1 = box_x.sample(rng), y1 = box_y.sample(rng);
    const Vec x2 = box_x.sample(rng), y2 = box_y.sample(rng);
    Vec d1 = payoff.grad_x(x1, y1), d2 = payoff.grad_x(x2, y2);
    Vec e1 = payoff.grad_y(x1, y1), e2 = payoff.grad_y(x2, y2);
    double num = 0.0;
    for (std::size_t j = 0; j < d1.size(); ++j) num += (d1[j] - d2[j]) * (d1[j] - d2[j]);
    for (std::size_t j = 0; j < e1.size(); ++j) num += (e1[j] - e2[j]) * (e1[j] - e2[j]);
    const double den = distance(x1, x2) * distance(x1, x2) + distance(y1, y2) * distance(y1, y2);
    if (den > 1e-16) best = std::max(best, std::sqrt(num / den));
  }
  return 1.5 * best;
}

struct Candidate {
  double x, y, residual;
};

}  // namespace

double fixed_point_residual(const PayoffOracle& payoff, double eta, double gamma,
                            const Vec& x_anchor, const Vec& y_anchor, const Vec& x, const Vec& y,
                            const BoxSet& box_x, const BoxSet& box_y) {
  const double s = std::min({eta, gamma, 1.0});
  const Vec gx = payoff.grad_x(x, y), gy = payoff.grad_y(x, y);
  Vec px(x.size()), py(y.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    px[i] = x[i] - s * (gx[i] + (x[i] - x_anchor[i]) / eta);
  for (std::size_t i = 0; i < y.size(); ++i)
    py[i] = y[i] + s * (gy[i] - (y[i] - y_anchor[i]) / gamma);
  return distance(x, box_x.project(px)) + distance(y, box_y.project(py));
}

SolveReport solve_joint_prox(const ProxProblem& problem, const SolveOptions& opts) {
  if (!problem.payoff) throw std::invalid_argument("prox: null payoff");
  if (problem.x_anchor.size() != problem.box_x.dim() ||
      problem.y_anchor.size() != problem.box_y.dim())
    throw std::invalid_argument("prox: anchor dimension mismatch");
  if (!all_finite(problem.x_anchor) || !all_finite(problem.y_anchor))
    throw std::invalid_argument("prox: non-finite anchor");

  SolveReport rep;
  rep.rate_capped = false;
  rep.eta_used = cap_rate(problem.eta, &rep.rate_capped);
  rep.gamma_used = cap_rate(problem.gamma, &rep.rate_capped);
  const double eta = rep.eta_used, gamma = rep.gamma_used;
  const PayoffOracle& f = *problem.payoff;
  const auto form = f.quadratic_form();

  const bool closed_ok = form && problem.box_x.dim() == 1 && problem.box_y.dim() == 1;
  const bool want_closed = opts.method != SolveOptions::Method::iterative && closed_ok;
  if (opts.method == SolveOptions::Method::closed_form && !closed_ok)
    throw std::invalid_argument("prox: closed form requires a scalar quadratic payoff");

  if (want_closed) {
    if (form->is_zero()) {
      // pure coupling: the solution is the projected anchor pair
      rep.x = problem.box_x.project(problem.x_anchor);
      rep.y = problem.box_y.project(problem.y_anchor);
      rep.method = SolveMethod::closed_form;
      rep.residual = fixed_point_residual(f, eta, gamma, problem.x_anchor, problem.y_anchor,
                                          rep.x, rep.y, problem.box_x, problem.box_y);
      return rep;
    }

    // stationarity of the composite, A x + q y = e and q x + D y = g:
    //   (xx + 1/eta) x + xy y + bx + (x - xa)/eta = 0
    //   xy x - (yy + 1/gamma) y + by - (y - ya)/gamma = 0
    const double xa = problem.x_anchor[0], ya = problem.y_anchor[0];
    const double xlo = problem.box_x.lower()[0], xhi = problem.box_x.upper()[0];
    const double ylo = problem.box_y.lower()[0], yhi = problem.box_y.upper()[0];
    const double A = form->xx + 1.0 / eta;
    const double q = form->xy;
    const double D = -(form->yy + 1.0 / gamma);
    const double e = -form->bx + xa / eta;
    const double g = -form->by - ya / gamma;
    const double det = A * D - q * q;  // strictly negative

    auto residual_at = [&](double xv, double yv) {
      return fixed_point_residual(f, eta, gamma, problem.x_anchor, problem.y_anchor, {xv}, {yv},
                                  problem.box_x, problem.box_y);
    };

    // enumerate the active-set cases: each player free or pinned at a bound;
    // the fixed-point residual selects the one that satisfies the saddle KKT
    Candidate best{0.0, 0.0, std::numeric_limits<double>::infinity()};
    auto consider = [&](double xv, double yv) {
      if (!(xv >= xlo - 1e-12 && xv <= xhi + 1e-12)) return;
      if (!(yv >= ylo - 1e-12 && yv <= yhi + 1e-12)) return;
      xv = std::min(std::max(xv, xlo), xhi);
      yv = std::min(std::max(yv, ylo), yhi);
      const double r = residual_at(xv, yv);
      if (r < best.residual) best = {xv, yv, r};
    };

    consider((e * D - q * g) / det, (A * g - q * e) / det);  // both free
    for (double xv : {xlo, xhi}) consider(xv, (q * xv - g) / (-D));  // x pinned, y free
    for (double yv : {ylo, yhi}) consider((e - q * yv) / A, yv);     // y pinned, x free
    for (double xv : {xlo, xhi})
      for (double yv : {ylo, yhi}) consider(xv, yv);

    rep.x = {best.x};
    rep.y = {best.y};
    rep.method = SolveMethod::closed_form;
    rep.residual = best.residual;
    return rep;
  }

  // projected extragradient on the regularized saddle operator; per-block
  // steps so mismatched eta/gamma keep a usable contraction rate
  const double curv = curvature_bound(f, problem.box_x, problem.box_y);
  const double sx = 0.35 / (curv + 1.0 / eta);
  const double sy = 0.35 / (curv + 1.0 / gamma);

  Vec x = problem.box_x.project(problem.x_anchor);
  Vec y = problem.box_y.project(problem.y_anchor);
  Vec fx, fy;
  auto operator_at = [&](const Vec& xi, const Vec& yi) {
    const Vec gx = f.grad_x(xi, yi), gy = f.grad_y(xi, yi);
    fx.resize(xi.size());
    fy.resize(yi.size());
    for (std::size_t i = 0; i < xi.size(); ++i)
      fx[i] = gx[i] + (xi[i] - problem.x_anchor[i]) / eta;
    for (std::size_t i = 0; i < yi.size(); ++i)
      fy[i] = -gy[i] + (yi[i] - problem.y_anchor[i]) / gamma;
  };
  auto advance = [&](const Vec& bx, const Vec& by, Vec* ox, Vec* oy) {
    Vec px(bx.size()), py(by.size());
    for (std::size_t i = 0; i < bx.size(); ++i) px[i] = bx[i] - sx * fx[i];
    for (std::size_t i = 0; i < by.size(); ++i) py[i] = by[i] - sy * fy[i];
    *ox = problem.box_x.project(px);
    *oy = problem.box_y.project(py);
  };

  long it = 0;
  for (; it < opts.max_iter; ++it) {
    Vec xh, yh, xn, yn;
    operator_at(x, y);
    advance(x, y, &xh, &yh);
    operator_at(xh, yh);
    advance(x, y, &xn, &yn);
    x = std::move(xn);
    y = std::move(yn);
    if ((it & 7) == 0) {
      const double r = fixed_point_residual(f, eta, gamma, problem.x_anchor, problem.y_anchor, x,
                                            y, problem.box_x, problem.box_y);
      if (r <= opts.tol) {
        rep.x = x;
        rep.y = y;
        rep.method = SolveMethod::iterative;
        rep.iterations = it + 1;
        rep.residual = r;
        return rep;
      }
    }
  }
  throw std::runtime_error("inner-solve-diverged: extragradient did not reach tolerance");
}

Vec prox_min_step(const PayoffOracle& payoff, const Vec& y_fixed, double eta, const Vec& anchor,
                  const BoxSet& box, const SolveOptions& opts) {
  bool capped = false;
  eta = cap_rate(eta, &capped);
  if (auto form = payoff.quadratic_form()) {
    if (box.dim() != 1 || y_fixed.size() != 1 || anchor.size() != 1)
      throw std::invalid_argument("prox step: scalar quadratic payoff needs 1-d points");
    const double lin = form->xy * y_fixed[0] + form->bx;
    const double x = (anchor[0] - eta * lin) / (1.0 + eta * form->xx);
    return box.project({x});
  }
  // projected gradient on the strongly convex composite
  const double curv = curvature_bound(payoff, box, box);
  const double s = 1.0 / (1.0 + eta * std::max(curv, 1e-12));
  Vec x = box.project(anchor);
  for (long it = 0; it < opts.max_iter; ++it) {
    const Vec g = payoff.grad_x(x, y_fixed);
    Vec p(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) p[i] = x[i] - s * (eta * g[i] + (x[i] - anchor[i]));
    Vec nx = box.project(p);
    const double moved = distance(nx, x);
    x = nx;
    if (moved <= opts.tol) return x;
  }
  throw std::runtime_error("inner-solve-diverged: prox min step did not settle");
}

Vec prox_max_step(const PayoffOracle& payoff, const Vec& x_fixed, double gamma, const Vec& anchor,
                  const BoxSet& box, const SolveOptions& opts) {
  bool capped = false;
  gamma = cap_rate(gamma, &capped);
  if (auto form = payoff.quadratic_form()) {
    if (box.dim() != 1 || x_fixed.size() != 1 || anchor.size() != 1)
      throw std::invalid_argument("prox step: scalar quadratic payoff needs 1-d points");
    const double lin = form->xy * x_fixed[0] + form->by;
    const double y = (anchor[0] + gamma * lin) / (1.0 + gamma * form->yy);
    return box.project({y});
  }
  const double curv = curvature_bound(payoff, box, box);
  const double s = 1.0 / (1.0 + gamma * std::max(curv, 1e-12));
  Vec y = box.project(anchor);
  for (long it = 0; it < opts.max_iter; ++it) {
    const Vec g = payoff.grad_y(x_fixed, y);
    Vec p(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) p[i] = y[i] + s * (gamma * g[i] - (y[i] - anchor[i]));
    Vec ny = box.project(p);
    const double moved = distance(ny, y);
    y = ny;
    if (moved <= opts.tol) return y;
  }
  throw std::runtime_error("inner-solve-diverged: prox max step did not settle");
}

}  // namespace osp
