#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "osp/harness.hpp"

namespace fs = std::filesystem;

namespace {

int do_run(const std::string& config_path, const std::string& out_dir, const CLI::Option* rounds_opt,
           long rounds, const CLI::Option* seed_opt, std::uint64_t seed) {
  osp::ExperimentConfig cfg = osp::load_config_file(config_path);
  if (rounds_opt->count() > 0) cfg.t_max = rounds;
  if (seed_opt->count() > 0) cfg.seed = seed;
  cfg.validate();

  const osp::ExperimentResult res = osp::run_experiment(cfg);

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("cannot create \"" + out_dir + "\": " + ec.message());
  const std::string csv_path =
      cfg.out_csv.empty() ? (fs::path(out_dir) / (cfg.label() + ".csv")).string() : cfg.out_csv;
  const std::string svg_path =
      cfg.out_svg.empty() ? (fs::path(out_dir) / (cfg.label() + ".svg")).string() : cfg.out_svg;

  osp::write_csv_file(res.records, csv_path);
  osp::TraceSeries gap{"dgap_avg", {}};
  osp::TraceSeries nereg{"nereg_avg", {}};
  for (const osp::RoundRecord& rec : res.records) {
    gap.points.emplace_back(static_cast<double>(rec.t), rec.dgap_avg);
    if (rec.nereg_available) nereg.points.emplace_back(static_cast<double>(rec.t), rec.nereg_avg);
  }
  osp::render_svg_file({gap, nereg}, cfg.label(), svg_path);

  const osp::MetricsSnapshot& m = res.summary.final_metrics;
  std::cout << res.summary.name << ": T=" << res.summary.rounds
            << " dgap_avg=" << osp::format_double(m.dgap_avg);
  if (m.nereg_available) std::cout << " nereg_avg=" << osp::format_double(m.nereg_avg);
  std::cout << " reg1_avg=" << osp::format_double(m.reg1_avg)
            << " reg2_avg=" << osp::format_double(m.reg2_avg)
            << " path=" << osp::format_double(m.path) << " stage=" << res.summary.stage << "\n";
  std::cout << "wrote " << csv_path << "\nwrote " << svg_path << "\n";

  if (res.summary.violations > 0) {
    std::cerr << "invariant violations: " << res.summary.violations << " (first: "
              << res.summary.first_violation << ")\n";
    return 1;
  }
  return 0;
}

int do_grid(const osp::GridOptions& opts) {
  const auto summaries = osp::grid_run(opts);
  long violations = 0;
  for (const osp::ExperimentSummary& s : summaries) {
    const osp::MetricsSnapshot& m = s.final_metrics;
    std::cout << s.name << ": dgap_avg=" << osp::format_double(m.dgap_avg)
              << " nereg_avg=" << osp::format_double(m.nereg_avg) << " stage=" << s.stage << "\n";
    if (s.violations > 0) {
      std::cerr << s.name << ": " << s.violations << " invariant violations (first: "
                << s.first_violation << ")\n";
      violations += s.violations;
    }
  }
  std::cout << "wrote " << opts.out_dir << "\n";
  return violations > 0 ? 1 : 0;
}

int do_verify(long rounds, std::uint64_t seed) {
  bool all_ok = true;
  for (const osp::VerifyCheck& check : osp::run_verification(rounds, seed)) {
    std::cout << (check.ok ? "[ok]   " : "[fail] ") << check.name;
    if (!check.detail.empty()) std::cout << " (" << check.detail << ")";
    std::cout << "\n";
    all_ok = all_ok && check.ok;
  }
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"online saddle point benchmark harness"};
  app.require_subcommand(1);

  std::string config_path;
  std::string run_out = ".";
  long run_rounds = 0;
  std::uint64_t run_seed = 0;
  CLI::App* run = app.add_subcommand("run", "run one experiment from a JSON config");
  run->add_option("--config", config_path, "JSON config file")->required();
  run->add_option("--out", run_out, "output directory (default .)");
  const CLI::Option* run_rounds_opt =
      run->add_option("--rounds", run_rounds, "override the config horizon");
  const CLI::Option* run_seed_opt = run->add_option("--seed", run_seed, "override the config seed");

  osp::GridOptions grid_opts;
  CLI::App* grid = app.add_subcommand("grid", "run the four drifting cases against all engines");
  grid->add_option("--out", grid_opts.out_dir, "output directory (default .)");
  grid->add_option("--rounds", grid_opts.rounds, "horizon per cell (default 100000)");
  grid->add_option("--seed", grid_opts.seed, "base seed; cell i uses seed+i (default 1)");
  grid->add_option("--threads", grid_opts.threads,
                   "worker threads, 0 = serial (default OSP_PROX_THREADS or hardware)");

  long verify_rounds = 2000;
  std::uint64_t verify_seed = 7;
  CLI::App* verify = app.add_subcommand("verify", "invariant and oracle cross-checks");
  verify->add_option("--rounds", verify_rounds, "horizon for the engine runs (default 2000)");
  verify->add_option("--seed", verify_seed, "seed for the sampled instances (default 7)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed())
      return do_run(config_path, run_out, run_rounds_opt, run_rounds, run_seed_opt, run_seed);
    if (grid->parsed()) return do_grid(grid_opts);
    if (verify->parsed()) return do_verify(verify_rounds, verify_seed);
  } catch (const osp::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
