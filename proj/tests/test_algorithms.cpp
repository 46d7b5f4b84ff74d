#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

#include "doctest.h"
#include "osp/algorithms.hpp"
#include "osp/payoffs.hpp"
#include "osp/prng.hpp"

using namespace osp;

namespace {

BoxSet wide() { return BoxSet::symmetric(4.0); }

PayoffPtr saddle(double a, double b) { return std::make_shared<QuadraticSaddle>(a, b); }

}  // namespace

TEST_SUITE_BEGIN("algorithms");

TEST_CASE("oppm first rate is the frozen cold-start value") {
  Oppm algo(wide(), wide(), {{0.0}, {0.0}});
  // diameter 8 twice plus unit budget, scaled by the regularizer bound 8,
  // over the bare epsilon: 8 * 17 / 0.1
  CHECK(algo.rate_preview() == 1360.0);
  const StrategyPair played = algo.emit();
  CHECK(played.x[0] == 0.0);
  const RoundDiagnostics diag = algo.observe(saddle(1.0, 1.0));
  CHECK(diag.eta == 1360.0);
  CHECK(diag.gamma == 1360.0);
  CHECK(diag.pair.x == played.x);
  CHECK(diag.pair.y == played.y);
  CHECK(diag.stage == 0);
  CHECK_FALSE(diag.doubled);
  // the first summand is still buffered, so the denominator has not moved
  CHECK(algo.delta_sum() == 0.0);
  CHECK(algo.telescoping_gap() == 0.0);
}

TEST_CASE("optimistic first round plays the anchor under the empty predictor") {
  LaggedOptOppm algo(wide(), wide(), {{0.5}, {-1.5}});
  const StrategyPair played = algo.emit();
  // no history yet: the predictor is the zero payoff, so the prox returns
  // the projected anchor unchanged
  CHECK(played.x[0] == 0.5);
  CHECK(played.y[0] == -1.5);
  const RoundDiagnostics diag = algo.observe(saddle(0.0, 0.0));
  CHECK(diag.eta == 720.0);
  CHECK(diag.gamma == 720.0);
  CHECK(diag.stage_x == 0);
  CHECK(diag.stage_y == 0);
}

TEST_CASE("rigging epsilon to the numerator gives a unit rate prox") {
  OptOppmSettings s;
  s.epsilon = 72.0;  // equals the rate numerator 8 * (8 + 1) for these boxes
  OptOppmCore core(wide(), wide(), {{1.0}, {0.0}}, s);
  CHECK(core.rate_preview_x() == 1.0);
  CHECK(core.rate_preview_y() == 1.0);
  const StrategyPair played = core.emit_with(saddle(0.0, 0.0));
  CHECK(played.x[0] == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(played.y[0] == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("a perfect predictor keeps the denominator empty") {
  OptOppmCore core(wide(), wide(), {{0.0}, {0.0}});
  const PayoffPtr f = saddle(1.0, 1.0);
  for (long t = 1; t <= 50; ++t) {
    const StrategyPair played = core.emit_with(f);
    const RoundDiagnostics diag = core.observe_with(f, f);
    // the emit x-block and the aux x-step solve the same problem, so the
    // increment reduces to a vanishing coupling penalty
    CHECK(std::abs(diag.delta1) <= 1e-10);
    CHECK(std::abs(diag.delta2) <= 1e-10);
    CHECK(diag.delta1 >= -kDeltaSlack);
    CHECK(distance(core.aux_x(), played.x) <= 1e-7);
    CHECK(distance(core.aux_y(), played.y) <= 1e-7);
  }
  CHECK(core.delta1_sum() == 0.0);
  CHECK(core.delta2_sum() == 0.0);
  CHECK(core.rate_preview_x() == 720.0);
  CHECK(core.stage_x() == 0);
  CHECK(core.stage_y() == 0);
}

TEST_CASE("oppm bookkeeping replays from the emitted stream alone") {
  const BoxSet box = wide();
  Oppm algo(box, box, {{0.0}, {0.0}});

  const std::vector<PayoffPtr> cycle{saddle(1.0, 0.5), saddle(-0.5, 1.0), saddle(0.0, -1.0)};
  const double kL = 8.0, kD = 8.0, kEps = 0.1;

  bool have_prev = false, pending = false;
  Vec prev_brx, prev_bry;
  StrategyPair prev_pair;
  PayoffPtr f_prev;
  double raw1 = 0.0, raw2 = 0.0, running_max = 0.0, dsum = 0.0;
  double path = 0.0, budget = 1.0;
  long stage = 0;

  for (long t = 1; t <= 200; ++t) {
    const PayoffPtr f = cycle[static_cast<std::size_t>((t - 1) % 3)];
    const StrategyPair played = algo.emit();
    const RoundDiagnostics diag = algo.observe(f);
    REQUIRE(diag.pair.x == played.x);

    const Vec brx = f->best_response_x(played.y, box);
    const Vec bry = f->best_response_y(played.x, box);
    REQUIRE(brx == diag.br_x);
    REQUIRE(bry == diag.br_y);

    if (have_prev) path += distance(brx, prev_brx) + distance(bry, prev_bry);
    bool doubled = false;
    while (path > budget) {
      budget *= 2.0;
      ++stage;
      doubled = true;
      raw1 = raw2 = 0.0;
      running_max = 0.0;
      dsum = 0.0;
      pending = false;
    }
    REQUIRE(diag.doubled == doubled);
    REQUIRE(diag.stage == stage);
    REQUIRE(diag.path == doctest::Approx(path).epsilon(1e-12));

    const double eta = kL * (2.0 * kD + budget) / (kEps + dsum);
    REQUIRE(diag.eta == doctest::Approx(eta).epsilon(1e-12));

    if (pending) {
      const PayoffOracle& g = *f_prev;
      raw1 += g.value(prev_pair.x, prev_pair.y) - g.value(played.x, played.y) +
              g.value(brx, played.y) - g.value(prev_brx, prev_pair.y);
      raw2 += g.value(prev_pair.x, prev_bry) - g.value(played.x, bry) +
              g.value(played.x, played.y) - g.value(prev_pair.x, prev_pair.y);
      const double c1 = std::max(raw1, 0.0), c2 = std::max(raw2, 0.0);
      const double sigma = std::max(c1, c2);
      const double delta = sigma > running_max ? sigma - running_max : 0.0;
      dsum += delta;
      running_max = std::max(running_max, sigma);
      REQUIRE(diag.sigma1 == doctest::Approx(c1).epsilon(1e-12));
      REQUIRE(diag.sigma2 == doctest::Approx(c2).epsilon(1e-12));
      REQUIRE(diag.delta1 == doctest::Approx(delta).epsilon(1e-12));
    }

    f_prev = f;
    prev_pair = played;
    prev_brx = brx;
    prev_bry = bry;
    have_prev = true;
    pending = true;

    REQUIRE(algo.delta_sum() == doctest::Approx(dsum).epsilon(1e-12));
    REQUIRE(algo.telescoping_gap() == 0.0);
  }
  CHECK(stage > 0);  // the cycling comparators must have forced doublings
  CHECK(dsum > 0.0);
}

TEST_CASE("a comparator jump doubles the budget before the rate is set") {
  Oppm algo(wide(), wide(), {{0.0}, {0.0}});
  algo.emit();
  algo.observe(saddle(2.0, 0.0));
  CHECK(algo.stage() == 0);
  algo.emit();
  const RoundDiagnostics diag = algo.observe(saddle(-2.0, 0.0));
  // best responses leapt roughly ten units, so the unit budget doubles four
  // times inside one observe and the rate is computed under the new stage
  CHECK(diag.doubled);
  CHECK(algo.stage() == 4);
  CHECK(algo.budget() == 16.0);
  CHECK(diag.eta == algo.rate_preview());
  CHECK(algo.delta_sum() == 0.0);
  CHECK(algo.telescoping_gap() == 0.0);
}

TEST_CASE("optimistic emits are idempotent until the observe lands") {
  LaggedOptOppm lagged(wide(), wide(), {{0.25}, {-0.75}});
  const StrategyPair a = lagged.emit();
  const StrategyPair b = lagged.emit();
  CHECK(a.x == b.x);
  CHECK(a.y == b.y);
  lagged.observe(saddle(1.0, 0.0));

  MultiPredictorOptOppm multi(wide(), wide(), {{0.25}, {-0.75}});
  const StrategyPair c = multi.emit();
  const StrategyPair d = multi.emit();
  CHECK(c.x == d.x);
  CHECK(c.y == d.y);
  multi.observe(saddle(1.0, 0.0));
}

TEST_CASE("observe before emit and predictor swaps are rejected") {
  OptOppmCore core(wide(), wide(), {{0.0}, {0.0}});
  const PayoffPtr f = saddle(1.0, 0.0);
  CHECK_THROWS_AS(core.observe_with(f, f), std::logic_error);
  const PayoffPtr h1 = saddle(0.0, 0.0), h2 = saddle(0.0, 0.0);
  core.emit_with(h1);
  CHECK_THROWS_AS(core.emit_with(h2), std::logic_error);
  CHECK_THROWS_AS(core.observe_with(f, h2), std::logic_error);
  core.observe_with(f, h1);

  MultiPredictorOptOppm multi(wide(), wide(), {{0.0}, {0.0}});
  CHECK_THROWS_AS(multi.observe(f), std::logic_error);
}

TEST_CASE("predictor bank serves lagged payoffs with a zero fallback") {
  PredictorBank bank({1, 3});
  const PayoffPtr f1 = saddle(1.0, 0.0), f2 = saddle(2.0, 0.0), f3 = saddle(3.0, 0.0);

  auto preds = bank.predictors();
  CHECK(preds[0]->value({1.0}, {1.0}) == 0.0);
  CHECK(preds[1]->value({1.0}, {1.0}) == 0.0);

  bank.push(f1);
  preds = bank.predictors();
  CHECK(preds[0].get() == f1.get());
  CHECK(preds[1]->value({1.0}, {1.0}) == 0.0);

  bank.push(f2);
  bank.push(f3);
  preds = bank.predictors();
  CHECK(preds[0].get() == f3.get());
  CHECK(preds[1].get() == f1.get());

  CHECK_THROWS(PredictorBank({}));
  CHECK_THROWS(PredictorBank({0}));
  CHECK_THROWS(bank.push(nullptr));
}

TEST_CASE("a single-expert mixture reproduces the plain optimistic run") {
  LaggedOptOppm lagged(wide(), wide(), {{0.0}, {0.0}}, 4);
  MultiPredictorOptOppm multi(wide(), wide(), {{0.0}, {0.0}}, {4});
  SplitMix64 rng(505);
  for (long t = 1; t <= 200; ++t) {
    const PayoffPtr f = saddle(rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0));
    const StrategyPair a = lagged.emit();
    const StrategyPair b = multi.emit();
    REQUIRE(a.x == b.x);
    REQUIRE(a.y == b.y);
    const RoundDiagnostics da = lagged.observe(f);
    const RoundDiagnostics db = multi.observe(f);
    REQUIRE(da.eta == db.eta);
    REQUIRE(db.weights == Vec{1.0});
  }
}

TEST_CASE("hedge weight moves to the lag matching the payoff period") {
  MultiPredictorSettings ms;
  MultiPredictorOptOppm multi(wide(), wide(), {{0.0}, {0.0}}, {1, 2}, ms);
  const PayoffPtr a = saddle(1.0, 0.5), b = saddle(-0.5, -1.0);
  for (long t = 1; t <= 60; ++t) {
    multi.emit();
    const RoundDiagnostics diag = multi.observe(t % 2 == 1 ? a : b);
    double sum = 0.0;
    for (double w : diag.weights) sum += w;
    REQUIRE(std::abs(sum - 1.0) <= 1e-12);
  }
  const Vec& w = multi.hedge().weights();
  // the lag-2 expert reproduces the alternating payoff exactly from round 3
  CHECK(w[1] > 0.6);
  CHECK(w[1] > w[0]);
  CHECK(w[0] >= multi.hedge().alpha() / 2.0 - 1e-15);
}

TEST_CASE("constructors reject bad starting data") {
  const BoxSet tight = BoxSet::symmetric(1.0);
  CHECK_THROWS_AS(Oppm(tight, tight, {{2.0}, {0.0}}), std::invalid_argument);
  CHECK_THROWS_AS(OptOppmCore(tight, tight, {{0.0}, {-3.0}}), std::invalid_argument);
  OppmSettings bad;
  bad.epsilon = 0.0;
  CHECK_THROWS_AS(Oppm(tight, tight, {{0.0}, {0.0}}, bad), std::invalid_argument);
  OptOppmSettings badb;
  badb.budget_x = -1.0;
  CHECK_THROWS_AS(OptOppmCore(tight, tight, {{0.0}, {0.0}}, badb), std::invalid_argument);
}

TEST_SUITE_END();
