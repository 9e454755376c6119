// Command-line front end: Monte-Carlo sweeps, running-time tables, and
// plot-ready data extraction.

#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "cs/bench.hpp"

namespace {

cs::ReportFormat parse_format(const std::string& name) {
  if (name == "csv") return cs::ReportFormat::Csv;
  if (name == "json") return cs::ReportFormat::Json;
  throw std::invalid_argument("format must be csv or json");
}

cs::PlotMeasure parse_measure(const std::string& name) {
  if (name == "srnr") return cs::PlotMeasure::Srnr;
  if (name == "asce") return cs::PlotMeasure::Asce;
  throw std::invalid_argument("measure must be srnr or asce");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Greedy sparse-recovery benchmark harness"};
  app.require_subcommand(1);

  std::string config_path, out_path, in_path;
  std::string format = "csv";
  std::string measure = "srnr";
  int workers = 1;
  int reps = 10;
  std::uint64_t seed = 0;
  bool seed_set = false;

  CLI::App* sweep = app.add_subcommand("sweep", "Run a Monte-Carlo sweep");
  sweep->add_option("--config", config_path, "Experiment config (JSON)")
      ->required();
  sweep->add_option("--out", out_path, "Output report path")->required();
  sweep->add_option("--format", format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));
  sweep->add_option("--workers", workers, "Concurrent workers")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--seed", seed, "Override the config's master_seed")
      ->each([&](const std::string&) { seed_set = true; });

  CLI::App* timing =
      app.add_subcommand("time", "Measure per-recovery running time");
  timing->add_option("--config", config_path, "Experiment config (JSON)")
      ->required();
  timing->add_option("--out", out_path, "Output table path")->required();
  timing->add_option("--reps", reps, "Timed repetitions per algorithm")
      ->check(CLI::PositiveNumber);

  CLI::App* plot =
      app.add_subcommand("plot-data", "Extract plot columns from a report");
  plot->add_option("--in", in_path, "Report JSON produced by sweep")
      ->required();
  plot->add_option("--measure", measure, "srnr|asce")
      ->check(CLI::IsMember({"srnr", "asce"}));
  plot->add_option("--out", out_path, "Output data path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (sweep->parsed()) {
      cs::ExperimentConfig config = cs::load_experiment_config(config_path);
      if (seed_set) config.master_seed = seed;
      cs::ExperimentReport report = cs::run_sweep(config, workers);
      cs::emit_report(report, parse_format(format), out_path);
    } else if (timing->parsed()) {
      cs::ExperimentConfig config = cs::load_experiment_config(config_path);
      cs::emit_timing_table(cs::measure_running_time(config, reps), out_path);
    } else if (plot->parsed()) {
      std::ifstream in(in_path);
      if (!in) throw std::runtime_error("cannot open report: " + in_path);
      std::stringstream buffer;
      buffer << in.rdbuf();
      cs::ExperimentReport report = cs::report_from_json(buffer.str());
      cs::emit_plot_data(report, parse_measure(measure), out_path);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
