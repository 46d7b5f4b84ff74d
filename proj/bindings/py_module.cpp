#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

#include "osp/algorithms.hpp"
#include "osp/environments.hpp"
#include "osp/harness.hpp"
#include "osp/hedge.hpp"
#include "osp/inner_solvers.hpp"
#include "osp/metrics.hpp"
#include "osp/payoffs.hpp"

namespace py = pybind11;
using namespace osp;

namespace {

SolveOptions make_options(double tol, long max_iter, const std::string& method) {
  SolveOptions opts;
  opts.tol = tol;
  opts.max_iter = max_iter;
  if (method == "automatic") {
    opts.method = SolveOptions::Method::automatic;
  } else if (method == "closed_form") {
    opts.method = SolveOptions::Method::closed_form;
  } else if (method == "iterative") {
    opts.method = SolveOptions::Method::iterative;
  } else {
    throw std::invalid_argument("method must be automatic, closed_form, or iterative");
  }
  return opts;
}

py::dict summary_dict(const ExperimentSummary& s) {
  py::dict d;
  d["name"] = s.name;
  d["environment"] = s.environment;
  d["algorithm"] = s.algorithm;
  d["rounds"] = s.rounds;
  d["dgap_avg"] = s.final_metrics.dgap_avg;
  d["nereg_avg"] = s.final_metrics.nereg_avg;
  d["nereg_available"] = s.final_metrics.nereg_available;
  d["reg1_avg"] = s.final_metrics.reg1_avg;
  d["reg2_avg"] = s.final_metrics.reg2_avg;
  d["path"] = s.final_metrics.path;
  d["vt"] = s.final_metrics.vt;
  d["violations"] = s.violations;
  d["first_violation"] = s.first_violation;
  d["final_eta"] = s.final_eta;
  d["final_gamma"] = s.final_gamma;
  d["stage"] = s.stage;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "online saddle point engines, inner solvers, and benchmark harness";

  py::class_<BoxSet>(m, "BoxSet")
      .def(py::init<Vec, Vec>(), py::arg("lower"), py::arg("upper"))
      .def_static("symmetric", &BoxSet::symmetric, py::arg("half_width"), py::arg("dim") = 1)
      .def_property_readonly("dim", &BoxSet::dim)
      .def_property_readonly("lower", &BoxSet::lower)
      .def_property_readonly("upper", &BoxSet::upper)
      .def("project", &BoxSet::project, py::arg("p"))
      .def("contains", &BoxSet::contains, py::arg("p"), py::arg("slack") = 0.0)
      .def("diameter", &BoxSet::diameter);

  py::class_<StrategyPair>(m, "StrategyPair")
      .def(py::init([](Vec x, Vec y) {
             return StrategyPair{std::move(x), std::move(y)};
           }),
           py::arg("x"), py::arg("y"))
      .def_readwrite("x", &StrategyPair::x)
      .def_readwrite("y", &StrategyPair::y);

  py::class_<PayoffOracle, std::shared_ptr<PayoffOracle>>(m, "Payoff")
      .def("value", &PayoffOracle::value, py::arg("x"), py::arg("y"))
      .def("grad_x", &PayoffOracle::grad_x, py::arg("x"), py::arg("y"))
      .def("grad_y", &PayoffOracle::grad_y, py::arg("x"), py::arg("y"))
      .def("best_response_x", &PayoffOracle::best_response_x, py::arg("y"), py::arg("box_x"))
      .def("best_response_y", &PayoffOracle::best_response_y, py::arg("x"), py::arg("box_y"))
      .def("minimax_value", &PayoffOracle::minimax_value, py::arg("box_x"), py::arg("box_y"));

  m.def(
      "quadratic_saddle",
      [](double a, double b) -> std::shared_ptr<PayoffOracle> {
        return std::make_shared<QuadraticSaddle>(a, b);
      },
      py::arg("a"), py::arg("b"));
  m.def(
      "separable_quadratic",
      [](double a, double b) -> std::shared_ptr<PayoffOracle> {
        return std::make_shared<SeparableQuadratic>(a, b);
      },
      py::arg("a"), py::arg("b"));
  m.def("zero_payoff", []() -> std::shared_ptr<PayoffOracle> {
    return std::make_shared<ZeroPayoff>();
  });
  m.def(
      "combine",
      [](Vec weights, std::vector<PayoffPtr> members) -> PayoffPtr {
        return combine(std::move(weights), std::move(members));
      },
      py::arg("weights"), py::arg("members"));
  m.def(
      "rho_distance",
      [](const PayoffPtr& f, const PayoffPtr& g, const BoxSet& bx, const BoxSet& by) {
        return rho_distance(*f, *g, bx, by);
      },
      py::arg("f"), py::arg("g"), py::arg("box_x"), py::arg("box_y"));

  py::class_<SolveReport>(m, "SolveReport")
      .def_readonly("x", &SolveReport::x)
      .def_readonly("y", &SolveReport::y)
      .def_readonly("residual", &SolveReport::residual)
      .def_readonly("iterations", &SolveReport::iterations)
      .def_readonly("eta_used", &SolveReport::eta_used)
      .def_readonly("gamma_used", &SolveReport::gamma_used)
      .def_readonly("rate_capped", &SolveReport::rate_capped);

  m.def(
      "joint_prox",
      [](const PayoffPtr& payoff, double eta, double gamma, Vec x_anchor, Vec y_anchor,
         const BoxSet& box_x, const BoxSet& box_y, double tol, long max_iter,
         const std::string& method) {
        ProxProblem prob{payoff, eta, gamma, std::move(x_anchor), std::move(y_anchor), box_x, box_y};
        return solve_joint_prox(prob, make_options(tol, max_iter, method));
      },
      py::arg("payoff"), py::arg("eta"), py::arg("gamma"), py::arg("x_anchor"),
      py::arg("y_anchor"), py::arg("box_x"), py::arg("box_y"), py::arg("tol") = 1e-10,
      py::arg("max_iter") = 100000, py::arg("method") = "automatic");

  m.def("clipped_simplex_solve", &clipped_simplex_solve, py::arg("w"), py::arg("alpha"));
  m.def("kl_divergence", &kl_divergence, py::arg("p"), py::arg("q"));

  py::class_<HedgeState>(m, "HedgeState")
      .def(py::init<std::size_t, long, double>(), py::arg("dim"), py::arg("horizon"),
           py::arg("epsilon") = 0.1)
      .def(
          "step",
          [](HedgeState& self, const Vec& losses, long t) {
            const HedgeState::StepResult r = self.step(losses, t);
            py::dict d;
            d["theta"] = r.theta;
            d["sigma"] = r.sigma;
            d["doubled"] = r.doubled;
            return d;
          },
          py::arg("losses"), py::arg("t"))
      .def_property_readonly("weights", &HedgeState::weights)
      .def_property_readonly("alpha", &HedgeState::alpha);

  py::class_<RoundDiagnostics>(m, "RoundDiagnostics")
      .def_readonly("t", &RoundDiagnostics::t)
      .def_readonly("eta", &RoundDiagnostics::eta)
      .def_readonly("gamma", &RoundDiagnostics::gamma)
      .def_readonly("path", &RoundDiagnostics::path)
      .def_readonly("stage", &RoundDiagnostics::stage)
      .def_readonly("doubled", &RoundDiagnostics::doubled)
      .def_readonly("delta1", &RoundDiagnostics::delta1)
      .def_readonly("delta2", &RoundDiagnostics::delta2)
      .def_readonly("weights", &RoundDiagnostics::weights)
      .def_property_readonly("pair", [](const RoundDiagnostics& d) { return d.pair; })
      .def_property_readonly("br_x", [](const RoundDiagnostics& d) { return d.br_x; })
      .def_property_readonly("br_y", [](const RoundDiagnostics& d) { return d.br_y; });

  py::class_<SaddleAlgorithm>(m, "SaddleAlgorithm")
      .def("emit", &SaddleAlgorithm::emit)
      .def("observe", &SaddleAlgorithm::observe, py::arg("payoff"))
      .def_property_readonly("name", [](const SaddleAlgorithm& a) { return std::string(a.name()); });

  py::class_<Oppm, SaddleAlgorithm>(m, "Oppm")
      .def(py::init([](const BoxSet& bx, const BoxSet& by, StrategyPair initial, double epsilon,
                       double budget) {
             OppmSettings s;
             s.epsilon = epsilon;
             s.budget = budget;
             return std::make_unique<Oppm>(bx, by, std::move(initial), s);
           }),
           py::arg("box_x"), py::arg("box_y"), py::arg("initial"), py::arg("epsilon") = 0.1,
           py::arg("budget") = 1.0)
      .def_property_readonly("rate_preview", &Oppm::rate_preview)
      .def_property_readonly("stage", &Oppm::stage)
      .def_property_readonly("path", &Oppm::path)
      .def_property_readonly("delta_sum", &Oppm::delta_sum)
      .def_property_readonly("telescoping_gap", &Oppm::telescoping_gap);

  py::class_<LaggedOptOppm, SaddleAlgorithm>(m, "OptOppm")
      .def(py::init([](const BoxSet& bx, const BoxSet& by, StrategyPair initial, long lag,
                       double epsilon, double budget_x, double budget_y) {
             OptOppmSettings s;
             s.epsilon = epsilon;
             s.budget_x = budget_x;
             s.budget_y = budget_y;
             return std::make_unique<LaggedOptOppm>(bx, by, std::move(initial), lag, s);
           }),
           py::arg("box_x"), py::arg("box_y"), py::arg("initial"), py::arg("lag") = 4,
           py::arg("epsilon") = 0.1, py::arg("budget_x") = 1.0, py::arg("budget_y") = 1.0);

  py::class_<MultiPredictorOptOppm, SaddleAlgorithm>(m, "MultiPredictorOptOppm")
      .def(py::init([](const BoxSet& bx, const BoxSet& by, StrategyPair initial,
                       std::vector<long> lags, double epsilon, double budget_x, double budget_y,
                       long hedge_horizon) {
             MultiPredictorSettings s;
             s.inner.epsilon = epsilon;
             s.inner.budget_x = budget_x;
             s.inner.budget_y = budget_y;
             s.hedge_horizon = hedge_horizon;
             return std::make_unique<MultiPredictorOptOppm>(bx, by, std::move(initial),
                                                            std::move(lags), s);
           }),
           py::arg("box_x"), py::arg("box_y"), py::arg("initial"),
           py::arg("lags") = std::vector<long>{4, 5, 6}, py::arg("epsilon") = 0.1,
           py::arg("budget_x") = 1.0, py::arg("budget_y") = 1.0, py::arg("hedge_horizon") = 0);

  py::class_<MetricsSnapshot>(m, "MetricsSnapshot")
      .def_readonly("t", &MetricsSnapshot::t)
      .def_readonly("dgap_avg", &MetricsSnapshot::dgap_avg)
      .def_readonly("nereg_avg", &MetricsSnapshot::nereg_avg)
      .def_readonly("reg1_avg", &MetricsSnapshot::reg1_avg)
      .def_readonly("reg2_avg", &MetricsSnapshot::reg2_avg)
      .def_readonly("path", &MetricsSnapshot::path)
      .def_readonly("vt", &MetricsSnapshot::vt)
      .def_readonly("nereg_available", &MetricsSnapshot::nereg_available);

  py::class_<MetricsAccumulator>(m, "MetricsAccumulator")
      .def(py::init<BoxSet, BoxSet>(), py::arg("box_x"), py::arg("box_y"))
      .def(
          "record_round",
          [](MetricsAccumulator& self, const PayoffPtr& f, const StrategyPair& pair) {
            self.record_round(f, pair);
          },
          py::arg("payoff"), py::arg("pair"))
      .def("snapshot", &MetricsAccumulator::snapshot);

  py::class_<Environment>(m, "Environment")
      .def(py::init([](const std::string& kind) {
             return Environment(EnvironmentSpec::make(environment_from_string(kind)));
           }),
           py::arg("kind"))
      .def_static(
          "stationary",
          [](double a, double b) { return Environment(EnvironmentSpec::stationary_at(a, b)); },
          py::arg("a"), py::arg("b"))
      .def_property_readonly("box_x", &Environment::box_x)
      .def_property_readonly("box_y", &Environment::box_y)
      .def("next_payoff", &Environment::next_payoff, py::arg("t"), py::arg("last_pair"))
      .def("nash_value", &Environment::nash_value, py::arg("t"));

  py::register_exception<ConfigError>(m, "ConfigError");

  m.def(
      "run_experiment",
      [](const std::string& config_json) {
        const ExperimentConfig cfg = parse_config(config_json);
        const ExperimentResult res = run_experiment(cfg);
        py::dict d = summary_dict(res.summary);
        d["csv"] = csv_text(res.records);
        return d;
      },
      py::arg("config_json"), "run one experiment from a JSON config string");

  m.def("format_double", &format_double, py::arg("v"));
}
