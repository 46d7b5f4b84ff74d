// end-to-end acceptance gate: one pass/fail line per criterion, exit 1 on any
// failure; tolerances are pinned here on purpose so regressions surface as
// diffs of this file rather than silent drift

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "osp/harness.hpp"
#include "osp/hedge.hpp"
#include "osp/inner_solvers.hpp"
#include "osp/payoffs.hpp"
#include "osp/prng.hpp"
#include "osp/reference.hpp"

using namespace osp;

namespace {

constexpr long kShortT = 10000;
constexpr long kPanelT = 100000;

const std::array<EnvironmentKind, 6> kEnvs{EnvironmentKind::case1,      EnvironmentKind::case2,
                                           EnvironmentKind::case3,      EnvironmentKind::case4,
                                           EnvironmentKind::stationary, EnvironmentKind::nereg_cancel};
const std::array<AlgorithmKind, 3> kAlgs{AlgorithmKind::oppm, AlgorithmKind::optoppm,
                                         AlgorithmKind::optoppm_multi};

ExperimentConfig make_cfg(EnvironmentKind env, AlgorithmKind alg, long t_max, std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.environment = env;
  cfg.algorithm = alg;
  cfg.t_max = t_max;
  cfg.seed = seed;
  return cfg;
}

const RoundRecord* record_at(const std::vector<RoundRecord>& records, long t) {
  for (const RoundRecord& r : records)
    if (r.t == t) return &r;
  return nullptr;
}

std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

std::string read_file(const std::filesystem::path& path, bool& ok) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    ok = false;
    return {};
  }
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace

int main() {
  int failures = 0;
  const auto report = [&failures](int idx, const char* name, bool ok, const std::string& detail) {
    std::printf("[%s] %d %s: %s\n", ok ? "PASS" : "FAIL", idx, name, detail.c_str());
    if (!ok) ++failures;
  };

  // shared short-horizon sweep: every environment x algorithm x seeds 1..10
  std::vector<ExperimentSummary> sweep(kEnvs.size() * kAlgs.size() * 10);
  for (std::size_t e = 0; e < kEnvs.size(); ++e)
    for (std::size_t a = 0; a < kAlgs.size(); ++a)
      for (std::uint64_t s = 1; s <= 10; ++s) {
        const ExperimentConfig cfg = make_cfg(kEnvs[e], kAlgs[a], kShortT, s);
        sweep[(e * kAlgs.size() + a) * 10 + (s - 1)] = run_experiment(cfg).summary;
      }
  const auto at = [&sweep](std::size_t e, std::size_t a, std::uint64_t s) -> const ExperimentSummary& {
    return sweep[(e * kAlgs.size() + a) * 10 + (s - 1)];
  };

  {  // 1: the cumulative gap must split exactly into the two player regrets
    double worst = 0.0;
    for (std::size_t e = 0; e < kEnvs.size(); ++e)
      for (std::size_t a = 0; a < kAlgs.size(); ++a)
        for (std::uint64_t s = 1; s <= 3; ++s) {
          const ExperimentSummary& r = at(e, a, s);
          worst = std::max(worst, std::abs(r.dgap_sum - (r.reg1_sum + r.reg2_sum)));
        }
    const double tol = 1e-9 * static_cast<double>(kShortT);
    report(1, "gap additivity", worst <= tol,
           "worst |dgap - (reg1 + reg2)| = " + num(worst) + " over 54 runs, tolerance " + num(tol));
  }

  {  // 2: the signed equilibrium regret can never exceed the cumulative gap
    double worst_excess = -1e300;
    for (std::size_t e = 0; e < kEnvs.size(); ++e)
      for (std::size_t a = 0; a < kAlgs.size(); ++a)
        for (std::uint64_t s = 1; s <= 3; ++s) {
          const ExperimentSummary& r = at(e, a, s);
          worst_excess = std::max(worst_excess, std::abs(r.nereg_signed) - r.dgap_sum);
        }
    const double tol = 1e-9 * static_cast<double>(kShortT);
    report(2, "regret domination", worst_excess <= tol,
           "worst |nereg| - dgap = " + num(worst_excess) + ", tolerance " + num(tol));
  }

  {  // 3: the alternating adversary pins every round's gap at exactly one
    // while the signed equilibrium regret telescopes to at most one
    bool ok = true;
    double worst_nereg = 0.0, worst_gap_err = 0.0;
    const std::size_t e = 5;  // nereg_cancel
    for (std::size_t a = 0; a < kAlgs.size(); ++a) {
      const ExperimentSummary& r = at(e, a, 1);
      worst_nereg = std::max(worst_nereg, std::abs(r.nereg_signed));
      worst_gap_err = std::max(worst_gap_err, std::abs(r.final_metrics.dgap_avg - 1.0));
    }
    ok = worst_nereg <= 1.0 + 1e-6 && worst_gap_err <= 1e-6;
    report(3, "alternating adversary cancellation", ok,
           "max |nereg| = " + num(worst_nereg) + " (cap 1), max |avg gap - 1| = " +
               num(worst_gap_err));
  }

  {  // 4: against a fixed payoff the gap total must flatten out
    const ExperimentConfig cfg = make_cfg(EnvironmentKind::stationary, AlgorithmKind::oppm,
                                          kShortT, 1);
    const ExperimentResult res = run_experiment(cfg);
    const RoundRecord* head = record_at(res.records, 1000);
    const RoundRecord* tail = record_at(res.records, kShortT);
    bool ok = head != nullptr && tail != nullptr;
    std::string detail = "missing checkpoint records";
    if (ok) {
      const double head_sum = head->dgap_avg * 1000.0;
      const double tail_sum = tail->dgap_avg * static_cast<double>(kShortT) - head_sum;
      const QuadraticSaddle f(1.0, 1.0);
      const BoxSet box = BoxSet::symmetric(4.0);
      const Vec brx = f.best_response_x({tail->y}, box);
      const Vec bry = f.best_response_y({tail->x}, box);
      const double inst = f.value({tail->x}, bry) - f.value(brx, {tail->y});
      ok = tail_sum <= 0.01 * head_sum && inst <= 1e-3;
      detail = "tail gap " + num(tail_sum) + " vs 1% of head " + num(0.01 * head_sum) +
               ", final instantaneous gap " + num(inst);
    }
    report(4, "stationary tail decay", ok, detail);
  }

  {  // 5: long-horizon panel, one cell per drifting case and engine
    struct Cell {
      double head = 0.0, final_gap = 0.0, final_nereg = 0.0;
    };
    Cell panel[4][3];
    bool have_records = true;
    for (int ci = 0; ci < 4; ++ci)
      for (int ai = 0; ai < 3; ++ai) {
        const ExperimentConfig cfg =
            make_cfg(kEnvs[static_cast<std::size_t>(ci)], kAlgs[static_cast<std::size_t>(ai)],
                     kPanelT, 1 + static_cast<std::uint64_t>(ci * 3 + ai));
        const ExperimentResult res = run_experiment(cfg);
        const RoundRecord* head = record_at(res.records, 1000);
        if (head == nullptr || res.records.empty()) {
          have_records = false;
          continue;
        }
        panel[ci][ai] = {head->dgap_avg, res.records.back().dgap_avg,
                         res.records.back().nereg_avg};
      }
    bool ok = have_records;
    std::string why;
    if (ok) {
      for (int ai = 0; ai < 3 && ok; ++ai)
        if (!(panel[0][ai].final_gap <= 0.25 * panel[0][ai].head)) {
          ok = false;
          why = "slow drift cell " + std::to_string(ai) + " failed to converge";
        }
      if (ok && !(panel[1][1].final_gap <= 0.25 * panel[1][1].head &&
                  panel[1][2].final_gap <= 0.25 * panel[1][2].head))
        ok = false, why = "optimistic engines stalled under the alternating drift";
      if (ok && !(panel[1][0].final_gap >= 2.0 * panel[1][1].final_gap))
        ok = false, why = "plain engine unexpectedly matched the optimistic one";
      if (ok && !(panel[2][2].final_gap <= 0.25 * panel[2][2].head))
        ok = false, why = "expert mixture stalled under the three phase drift";
      if (ok && !(panel[2][1].final_gap >= 2.0 * panel[2][2].final_gap))
        ok = false, why = "mismatched single lag unexpectedly converged";
      for (int ai = 0; ai < 3 && ok; ++ai) {
        if (!(panel[3][ai].final_gap >= 0.5 * panel[3][ai].head)) {
          ok = false;
          why = "reactive adversary cell " + std::to_string(ai) + " converged, it must not";
        } else if (!(panel[3][ai].final_nereg <= 0.2 * panel[3][ai].final_gap)) {
          ok = false;
          why = "reactive adversary cell " + std::to_string(ai) + " shows no cancellation";
        }
      }
    }
    if (ok)
      why = "ratio guards hold on all 12 cells, e.g. alternating drift: plain " +
            num(panel[1][0].final_gap) + " vs optimistic " + num(panel[1][1].final_gap);
    report(5, "long horizon panel", ok, why);
  }

  {  // 6: the per-round engine invariants must hold on every sweep run
    long total = 0;
    std::string first;
    for (const ExperimentSummary& r : sweep) {
      total += r.violations;
      if (first.empty() && !r.first_violation.empty())
        first = r.environment + "/" + r.algorithm + ": " + r.first_violation;
    }
    report(6, "engine invariants", total == 0,
           total == 0 ? "0 violations across 180 runs" : num(double(total)) + " violations, first: " + first);
  }

  {  // 7: production solvers against their independent oracles
    bool ok = true;
    std::string detail;

    SplitMix64 rng(2024);
    double worst = 0.0, worst_feas = 0.0;
    bool order_ok = true;
    for (int it = 0; it < 1000; ++it) {
      const std::size_t d = 2 + static_cast<std::size_t>(it % 4);
      Vec w(d);
      for (auto& v : w) v = std::exp(rng.uniform(-20.0, 5.0));
      if (it % 10 == 0) w[0] = 0.0;
      const double alpha = std::pow(10.0, rng.uniform(-3.0, 0.0));
      const Vec got = clipped_simplex_solve(w, alpha);
      const Vec want = reference_clipped_projection(w, alpha);
      double sum = 0.0, mn = 1.0;
      for (std::size_t i = 0; i < d; ++i) {
        worst = std::max(worst, std::abs(got[i] - want[i]));
        sum += got[i];
        mn = std::min(mn, got[i]);
        for (std::size_t j = i + 1; j < d; ++j)
          if ((w[i] - w[j]) * (got[i] - got[j]) < -1e-12) order_ok = false;
      }
      worst_feas = std::max({worst_feas, std::abs(sum - 1.0),
                             alpha / static_cast<double>(d) - mn});
    }
    if (worst > 1e-8 || worst_feas > 1e-12 || !order_ok) {
      ok = false;
      detail = "simplex projection off oracle by " + num(worst) + ", feasibility slack " +
               num(worst_feas) + (order_ok ? "" : ", order broken");
    }

    const BoxSet box = BoxSet::symmetric(4.0);
    double worst_grid = 0.0;
    for (int it = 0; it < 100 && ok; ++it) {
      const auto payoff =
          std::make_shared<QuadraticSaddle>(rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0));
      const double eta = std::pow(10.0, rng.uniform(-1.0, 1.0));
      const double gamma = std::pow(10.0, rng.uniform(-1.0, 1.0));
      const Vec xa = box.sample(rng), ya = box.sample(rng);
      const SolveReport rep = solve_joint_prox(ProxProblem{payoff, eta, gamma, xa, ya, box, box});
      const GridSaddleResult grid =
          reference_grid_prox(*payoff, eta, gamma, xa[0], ya[0], box, box);
      worst_grid = std::max({worst_grid, std::abs(rep.x[0] - grid.x), std::abs(rep.y[0] - grid.y)});
    }
    if (ok && worst_grid > 2e-3) {
      ok = false;
      detail = "closed form left the brute force grid by " + num(worst_grid);
    }

    double worst_pair = 0.0;
    for (int it = 0; it < 100 && ok; ++it) {
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
      worst_pair = std::max({worst_pair, std::abs(a.x[0] - b.x[0]), std::abs(a.y[0] - b.y[0])});
    }
    if (ok && worst_pair > 1e-7) {
      ok = false;
      detail = "closed form and iterative solves disagree by " + num(worst_pair);
    }
    if (ok)
      detail = "simplex sup " + num(worst) + ", grid sup " + num(worst_grid) +
               ", method agreement " + num(worst_pair);
    report(7, "solver oracles", ok, detail);
  }

  {  // 8: the full grid must be byte reproducible, independent of threading
    namespace fs = std::filesystem;
    const fs::path dir_a = "acceptance_grid_a", dir_b = "acceptance_grid_b";
    std::error_code ec;
    fs::remove_all(dir_a, ec);
    fs::remove_all(dir_b, ec);
    bool ok = true;
    std::string detail = "12 csv files byte-identical across thread counts";
    try {
      GridOptions ga;
      ga.out_dir = dir_a.string();
      ga.rounds = 2000;
      ga.seed = 1;
      ga.threads = 2;
      grid_run(ga);
      GridOptions gb = ga;
      gb.out_dir = dir_b.string();
      gb.threads = 1;
      grid_run(gb);
      for (const char* env : {"case1", "case2", "case3", "case4"})
        for (const char* alg : {"oppm", "optoppm", "optoppm_multi"}) {
          const std::string name = std::string(env) + "_" + alg + ".csv";
          bool found = true;
          const std::string a = read_file(dir_a / name, found);
          const std::string b = read_file(dir_b / name, found);
          if (!found || a.empty() || a != b) {
            ok = false;
            detail = name + (found ? " differs between runs" : " missing");
          }
        }
    } catch (const std::exception& e) {
      ok = false;
      detail = std::string("grid run threw: ") + e.what();
    }
    fs::remove_all(dir_a, ec);
    fs::remove_all(dir_b, ec);
    report(8, "grid determinism", ok, detail);
  }

  if (failures == 0)
    std::printf("all 8 criteria passed\n");
  else
    std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
