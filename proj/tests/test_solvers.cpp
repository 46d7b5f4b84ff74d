#include <cmath>
#include <memory>

#include "doctest.h"
#include "osp/inner_solvers.hpp"
#include "osp/payoffs.hpp"
#include "osp/prng.hpp"
#include "osp/reference.hpp"

using namespace osp;

namespace {

ProxProblem instance(const PayoffPtr& payoff, double eta, double gamma, double xa, double ya) {
  const BoxSet box = BoxSet::symmetric(4.0);
  return ProxProblem{payoff, eta, gamma, {xa}, {ya}, box, box};
}

}  // namespace

TEST_SUITE_BEGIN("inner_solvers");

TEST_CASE("frozen interior solution of the unit rate prox") {
  // minimize_x max_y 0.5 x^2 + x y - 0.5 y^2 + 0.5 (x-1)^2 - 0.5 y^2 solves
  // the linear system 2x + y = 1, x - 2y = 0, so (0.4, 0.2)
  const auto f = std::make_shared<QuadraticSaddle>(0.0, 0.0);
  const SolveReport rep = solve_joint_prox(instance(f, 1.0, 1.0, 1.0, 0.0));
  CHECK(rep.x[0] == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(rep.y[0] == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(rep.eta_used == 1.0);
  CHECK(rep.gamma_used == 1.0);
  CHECK_FALSE(rep.rate_capped);
  CHECK(rep.residual <= 1e-8);
}

TEST_CASE("large rates drive the prox to the payoff saddle") {
  const auto f = std::make_shared<QuadraticSaddle>(0.5, -1.5);
  const SolveReport rep = solve_joint_prox(instance(f, 1e9, 1e9, 4.0, 2.0));
  CHECK(rep.x[0] == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(rep.y[0] == doctest::Approx(-1.5).epsilon(1e-6));
}

TEST_CASE("rates at the cap are clamped and reported") {
  const auto f = std::make_shared<QuadraticSaddle>(0.0, 0.0);
  const SolveReport rep = solve_joint_prox(instance(f, 1e15, 2.0, 1.0, 1.0));
  CHECK(rep.rate_capped);
  CHECK(rep.eta_used == kRateCap);
  CHECK(rep.gamma_used == 2.0);
}

TEST_CASE("anchors outside the box are accepted") {
  const auto f = std::make_shared<QuadraticSaddle>(0.0, 0.0);
  const BoxSet box = BoxSet::symmetric(4.0);
  const SolveReport rep = solve_joint_prox(ProxProblem{f, 0.5, 0.5, {9.0}, {-9.0}, box, box});
  CHECK(box.contains(rep.x));
  CHECK(box.contains(rep.y));
  CHECK(rep.residual <= 1e-8);
}

TEST_CASE("solution clamps to the box when the saddle sits outside") {
  // saddle of the composite pulled beyond the feasible interval
  const auto f = std::make_shared<SeparableQuadratic>(6.0, -7.0);
  const SolveReport rep = solve_joint_prox(instance(f, 50.0, 50.0, 3.0, -3.0));
  CHECK(rep.x[0] == doctest::Approx(4.0).epsilon(1e-10));
  CHECK(rep.y[0] == doctest::Approx(-4.0).epsilon(1e-10));
}

TEST_CASE("closed form and iterative solves agree") {
  SplitMix64 rng(101);
  const BoxSet box = BoxSet::symmetric(4.0);
  double worst = 0.0;
  for (int i = 0; i < 30; ++i) {
    const ProxProblem prob{
        std::make_shared<QuadraticSaddle>(rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)),
        std::pow(10.0, rng.uniform(-2.0, 1.5)),
        std::pow(10.0, rng.uniform(-2.0, 1.5)),
        box.sample(rng),
        box.sample(rng),
        box,
        box};
    SolveOptions closed, iterative;
    closed.method = SolveOptions::Method::closed_form;
    iterative.method = SolveOptions::Method::iterative;
    const SolveReport a = solve_joint_prox(prob, closed);
    const SolveReport b = solve_joint_prox(prob, iterative);
    worst = std::max({worst, std::abs(a.x[0] - b.x[0]), std::abs(a.y[0] - b.y[0])});
  }
  CHECK(worst <= 1e-7);
}

TEST_CASE("iterative solver handles widely mismatched rates") {
  const auto f = std::make_shared<QuadraticSaddle>(1.0, -1.0);
  ProxProblem prob = instance(f, 1e3, 1e-3, 2.0, 2.0);
  SolveOptions iterative;
  iterative.method = SolveOptions::Method::iterative;
  const SolveReport rep = solve_joint_prox(prob, iterative);
  SolveOptions closed;
  closed.method = SolveOptions::Method::closed_form;
  const SolveReport want = solve_joint_prox(prob, closed);
  CHECK(rep.x[0] == doctest::Approx(want.x[0]).epsilon(1e-7));
  CHECK(rep.y[0] == doctest::Approx(want.y[0]).epsilon(1e-7));
}

TEST_CASE("exhaustive grid agrees with the closed form") {
  SplitMix64 rng(202);
  const BoxSet box = BoxSet::symmetric(4.0);
  for (int i = 0; i < 5; ++i) {
    const auto payoff =
        std::make_shared<QuadraticSaddle>(rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0));
    const double eta = std::pow(10.0, rng.uniform(-1.0, 1.0));
    const double gamma = std::pow(10.0, rng.uniform(-1.0, 1.0));
    const Vec xa = box.sample(rng), ya = box.sample(rng);
    const SolveReport rep = solve_joint_prox(ProxProblem{payoff, eta, gamma, xa, ya, box, box});
    const GridSaddleResult grid =
        reference_grid_prox(*payoff, eta, gamma, xa[0], ya[0], box, box);
    CHECK(std::abs(rep.x[0] - grid.x) <= 2e-3);
    CHECK(std::abs(rep.y[0] - grid.y) <= 2e-3);
  }
}

TEST_CASE("single sided steps: frozen scalar instances") {
  const QuadraticSaddle f(0.0, 0.0);
  const BoxSet box = BoxSet::symmetric(4.0);
  // minimize 0.5 x^2 + 0.5 x + 0.5 (x-1)^2 over the box: x = 0.25
  const Vec xm = prox_min_step(f, {0.5}, 1.0, {1.0}, box);
  CHECK(xm[0] == doctest::Approx(0.25).epsilon(1e-12));
  // maximize (y - 0.5 y^2) - 0.5 y^2 at x = 1: y = 0.5
  const Vec ym = prox_max_step(f, {1.0}, 1.0, {0.0}, box);
  CHECK(ym[0] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("single sided min step agrees with its grid oracle") {
  SplitMix64 rng(303);
  const BoxSet box = BoxSet::symmetric(4.0);
  for (int i = 0; i < 5; ++i) {
    const QuadraticSaddle f(rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0));
    const double eta = std::pow(10.0, rng.uniform(-1.0, 1.0));
    const double y = rng.uniform(-4.0, 4.0), anchor = rng.uniform(-4.0, 4.0);
    const Vec got = prox_min_step(f, {y}, eta, {anchor}, box);
    const double want = reference_grid_min_step(f, y, eta, anchor, box);
    CHECK(std::abs(got[0] - want) <= 2e-3);
  }
}

TEST_CASE("fixed point residual vanishes only at the solution") {
  const auto f = std::make_shared<QuadraticSaddle>(0.0, 0.0);
  const BoxSet box = BoxSet::symmetric(4.0);
  const double at_solution =
      fixed_point_residual(*f, 1.0, 1.0, {1.0}, {0.0}, {0.4}, {0.2}, box, box);
  const double off_solution =
      fixed_point_residual(*f, 1.0, 1.0, {1.0}, {0.0}, {1.0}, {1.0}, box, box);
  CHECK(at_solution <= 1e-12);
  CHECK(off_solution > 1e-3);
}

TEST_CASE("invalid problems are rejected") {
  const auto f = std::make_shared<QuadraticSaddle>(0.0, 0.0);
  CHECK_THROWS(solve_joint_prox(instance(nullptr, 1.0, 1.0, 0.0, 0.0)));
  CHECK_THROWS(solve_joint_prox(instance(f, -1.0, 1.0, 0.0, 0.0)));
  CHECK_THROWS(solve_joint_prox(instance(f, 1.0, 0.0, 0.0, 0.0)));
}

TEST_SUITE_END();
