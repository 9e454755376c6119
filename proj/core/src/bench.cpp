#include "cs/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <limits>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace cs {

namespace {

using nlohmann::json;

std::string fmt17(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_short(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

}  // namespace

std::string AlgorithmSpec::label() const {
  std::string name = algorithm_name(algo);
  switch (algo) {
    case Algorithm::Omp:
    case Algorithm::Ols:
    case Algorithm::Sp:
      return name;
    case Algorithm::Pomp:
    case Algorithm::Laols:
      return name + "_L" + std::to_string(potential_atoms);
    case Algorithm::Sols:
      return name + "_L" + std::to_string(potential_atoms) + "_g" +
             fmt_short(gamma);
  }
  return name;
}

int ExperimentConfig::measurements_for(double alpha) const {
  return static_cast<int>(std::llround(alpha * N));
}

void ExperimentConfig::validate() const {
  if (N < 1 || K < 1 || K >= N)
    throw std::invalid_argument("ExperimentConfig: require 1 <= K < N");
  if (S < 1 || T < 1)
    throw std::invalid_argument("ExperimentConfig: require S, T >= 1");
  if (alpha_list.empty())
    throw std::invalid_argument("ExperimentConfig: alpha_list is empty");
  if (smnr_db_list.empty())
    throw std::invalid_argument("ExperimentConfig: smnr_db_list is empty");
  if (algorithms.empty())
    throw std::invalid_argument("ExperimentConfig: no algorithms configured");
  for (double alpha : alpha_list) {
    if (alpha <= 0.0 || alpha > 1.0)
      throw std::invalid_argument("ExperimentConfig: alpha must be in (0, 1]");
    double product = alpha * N;
    if (std::abs(product - std::llround(product)) > 1e-9)
      throw std::invalid_argument(
          "ExperimentConfig: alpha * N must be an integer");
    if (K >= measurements_for(alpha))
      throw std::invalid_argument(
          "ExperimentConfig: K must be below M for every alpha");
  }
  for (const AlgorithmSpec& spec : algorithms) {
    PursuitConfig pc;
    pc.sparsity = K;
    pc.potential_atoms = spec.potential_atoms;
    pc.gamma = spec.gamma;
    pc.use_recursive_gram = use_recursive_gram;
    pc.validate();
  }
}

const ReportCell& ExperimentReport::cell(const std::string& algorithm_label,
                                         double alpha,
                                         std::optional<double> smnr_db) const {
  for (const ReportCell& c : cells)
    if (c.algorithm == algorithm_label && c.alpha == alpha &&
        c.smnr_db == smnr_db)
      return c;
  throw std::out_of_range("ExperimentReport: no such cell");
}

namespace {

PursuitConfig pursuit_config_for(const ExperimentConfig& config,
                                 const AlgorithmSpec& spec) {
  PursuitConfig pc;
  pc.sparsity = config.K;
  pc.potential_atoms = spec.potential_atoms;
  pc.gamma = spec.gamma;
  pc.use_recursive_gram = config.use_recursive_gram;
  return pc;
}

// Partial results of one (alpha, matrix) unit of work, indexed
// [smnr_index * #algorithms + algorithm_index].
struct TaskResult {
  std::vector<MetricsAccumulator> metrics;
  std::vector<OpCounters> counters;
  std::vector<double> seconds;
  std::vector<long> failures;
};

TaskResult run_task(const ExperimentConfig& config, int alpha_index, int t) {
  const double alpha = config.alpha_list[alpha_index];
  const int M = config.measurements_for(alpha);
  const int n_algos = static_cast<int>(config.algorithms.size());
  const int n_cells = static_cast<int>(config.smnr_db_list.size()) * n_algos;

  TaskResult out;
  out.metrics.assign(n_cells, MetricsAccumulator(config.K));
  out.counters.assign(n_cells, OpCounters{});
  out.seconds.assign(n_cells, 0.0);
  out.failures.assign(n_cells, 0);

  SeededRng matrix_rng(derive_seed(
      config.master_seed, {1, static_cast<std::uint64_t>(alpha_index),
                           static_cast<std::uint64_t>(t)}));
  Matrix A = generate_sensing_matrix(M, config.N, matrix_rng);

  for (int s = 0; s < config.S; ++s) {
    SeededRng signal_rng(derive_seed(
        config.master_seed, {2, static_cast<std::uint64_t>(alpha_index),
                             static_cast<std::uint64_t>(t),
                             static_cast<std::uint64_t>(s)}));
    SparseSignal x =
        generate_sparse_signal(config.N, config.K, config.signal_kind,
                               signal_rng);

    for (int w = 0; w < static_cast<int>(config.smnr_db_list.size()); ++w) {
      NoiseSpec noise = NoiseSpec::clean();
      if (config.smnr_db_list[w].has_value())
        noise = NoiseSpec::gaussian(noise_sigma_for_smnr(
            config.K, M, *config.smnr_db_list[w], config.signal_kind));
      SeededRng noise_rng(derive_seed(
          config.master_seed, {3, static_cast<std::uint64_t>(alpha_index),
                               static_cast<std::uint64_t>(t),
                               static_cast<std::uint64_t>(s),
                               static_cast<std::uint64_t>(w)}));
      Vector y = apply_measurement(A, x, noise, noise_rng);

      for (int a = 0; a < n_algos; ++a) {
        const int cell = w * n_algos + a;
        try {
          PursuitConfig pc = pursuit_config_for(config, config.algorithms[a]);
          auto started = std::chrono::steady_clock::now();
          RecoveryResult result =
              run_algorithm(config.algorithms[a].algo, A, y, pc);
          if (config.measure_time) {
            auto elapsed = std::chrono::steady_clock::now() - started;
            out.seconds[cell] +=
                std::chrono::duration<double>(elapsed).count();
          }
          accumulate(out.metrics[cell], x, result.estimate, result.support);
          out.counters[cell] += result.counters;
        } catch (const std::exception&) {
          out.failures[cell] += 1;
        }
      }
    }
  }
  return out;
}

}  // namespace

ExperimentReport run_sweep(const ExperimentConfig& config, int workers) {
  config.validate();
  const int n_alphas = static_cast<int>(config.alpha_list.size());
  const int n_smnrs = static_cast<int>(config.smnr_db_list.size());
  const int n_algos = static_cast<int>(config.algorithms.size());
  const int n_tasks = n_alphas * config.T;

  std::vector<TaskResult> results(n_tasks);
  int threads = std::max(1, workers);
  if (threads == 1) {
    for (int i = 0; i < n_tasks; ++i)
      results[i] = run_task(config, i / config.T, i % config.T);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int w = 0; w < threads; ++w)
      pool.emplace_back([&] {
        for (int i = next.fetch_add(1); i < n_tasks; i = next.fetch_add(1))
          results[i] = run_task(config, i / config.T, i % config.T);
      });
    for (auto& th : pool) th.join();
  }

  ExperimentReport report;
  report.config = config;
  report.cells.reserve(static_cast<size_t>(n_alphas) * n_smnrs * n_algos);
  for (int ai = 0; ai < n_alphas; ++ai)
    for (int w = 0; w < n_smnrs; ++w)
      for (int a = 0; a < n_algos; ++a) {
        ReportCell cell;
        cell.algorithm = config.algorithms[a].label();
        cell.alpha = config.alpha_list[ai];
        cell.M = config.measurements_for(cell.alpha);
        cell.smnr_db = config.smnr_db_list[w];
        cell.metrics = MetricsAccumulator(config.K);
        // Merge per-matrix partials in fixed t order so the aggregate is
        // independent of worker scheduling.
        for (int t = 0; t < config.T; ++t) {
          const TaskResult& part = results[ai * config.T + t];
          const int idx = w * n_algos + a;
          cell.metrics.merge(part.metrics[idx]);
          cell.counter_sums += part.counters[idx];
          cell.seconds_sum += part.seconds[idx];
          cell.failures += part.failures[idx];
        }
        report.cells.push_back(std::move(cell));
      }
  return report;
}

std::vector<TimingRow> measure_running_time(const ExperimentConfig& config,
                                            int repetitions) {
  if (repetitions < 1)
    throw std::invalid_argument("measure_running_time: repetitions >= 1");
  double log_n = config.log_base > 0.0
                     ? std::log(config.N) / std::log(config.log_base)
                     : std::log(config.N);
  int M = static_cast<int>(std::ceil(config.K * log_n));
  M = std::min(M, config.N);

  SeededRng matrix_rng(derive_seed(config.master_seed, {4}));
  Matrix A = generate_sensing_matrix(M, config.N, matrix_rng);
  double sigma = noise_sigma_for_smnr(config.K, M, 20.0, config.signal_kind);

  std::vector<TimingRow> rows;
  for (const AlgorithmSpec& spec : config.algorithms) {
    PursuitConfig pc = pursuit_config_for(config, spec);
    TimingRow row;
    row.algorithm = spec.label();
    row.N = config.N;
    row.K = config.K;
    row.M = M;
    row.repetitions = repetitions;

    OpCounters totals;
    double seconds = 0.0;
    for (int rep = -1; rep < repetitions; ++rep) {
      SeededRng signal_rng(derive_seed(
          config.master_seed, {5, static_cast<std::uint64_t>(rep + 1)}));
      SparseSignal x = generate_sparse_signal(config.N, config.K,
                                              config.signal_kind, signal_rng);
      SeededRng noise_rng(derive_seed(
          config.master_seed, {6, static_cast<std::uint64_t>(rep + 1)}));
      Vector y =
          apply_measurement(A, x, NoiseSpec::gaussian(sigma), noise_rng);
      auto started = std::chrono::steady_clock::now();
      RecoveryResult result = run_algorithm(spec.algo, A, y, pc);
      auto elapsed = std::chrono::steady_clock::now() - started;
      if (rep < 0) continue;  // warm-up excluded
      seconds += std::chrono::duration<double>(elapsed).count();
      totals += result.counters;
    }
    row.mean_seconds = seconds / repetitions;
    row.mean_counters.matched_filters = totals.matched_filters / repetitions;
    row.mean_counters.projections = totals.projections / repetitions;
    row.mean_counters.lookahead_matched_filters =
        totals.lookahead_matched_filters / repetitions;
    row.mean_counters.lookahead_projections =
        totals.lookahead_projections / repetitions;
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

json smnr_to_json(const std::optional<double>& smnr) {
  if (!smnr.has_value()) return json("clean");
  return json(*smnr);
}

std::optional<double> smnr_from_json(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "clean") return std::nullopt;
    throw std::invalid_argument("smnr entry must be a number or \"clean\"");
  }
  return j.get<double>();
}

json config_to_json(const ExperimentConfig& config) {
  json algos = json::array();
  for (const AlgorithmSpec& spec : config.algorithms)
    algos.push_back({{"name", algorithm_name(spec.algo)},
                     {"L", spec.potential_atoms},
                     {"gamma", spec.gamma}});
  json smnrs = json::array();
  for (const auto& s : config.smnr_db_list) smnrs.push_back(smnr_to_json(s));
  return json{
      {"N", config.N},
      {"K", config.K},
      {"alpha_list", config.alpha_list},
      {"smnr_db_list", smnrs},
      {"signal_kind",
       config.signal_kind == SignalKind::Gaussian ? "gaussian" : "binary"},
      {"S", config.S},
      {"T", config.T},
      {"algorithms", algos},
      {"master_seed", config.master_seed},
      {"use_recursive_gram", config.use_recursive_gram},
      {"measure_time", config.measure_time},
      {"log_base", config.log_base},
  };
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig config;
  config.N = j.at("N").get<int>();
  config.K = j.at("K").get<int>();
  config.alpha_list = j.at("alpha_list").get<std::vector<double>>();
  for (const json& s : j.at("smnr_db_list"))
    config.smnr_db_list.push_back(smnr_from_json(s));
  std::string kind = j.at("signal_kind").get<std::string>();
  if (kind == "gaussian")
    config.signal_kind = SignalKind::Gaussian;
  else if (kind == "binary")
    config.signal_kind = SignalKind::Binary;
  else
    throw std::invalid_argument("signal_kind must be gaussian or binary");
  config.S = j.at("S").get<int>();
  config.T = j.at("T").get<int>();
  for (const json& a : j.at("algorithms")) {
    AlgorithmSpec spec;
    spec.algo = algorithm_from_name(a.at("name").get<std::string>());
    spec.potential_atoms = a.value("L", 1);
    spec.gamma = a.value("gamma", 0.0);
    config.algorithms.push_back(spec);
  }
  config.master_seed = j.at("master_seed").get<std::uint64_t>();
  config.use_recursive_gram = j.value("use_recursive_gram", true);
  config.measure_time = j.value("measure_time", false);
  config.log_base = j.value("log_base", 0.0);
  return config;
}

json cell_to_json(const ReportCell& cell) {
  double s = cell.trials() > 0 ? srnr_db(cell.metrics)
                               : std::numeric_limits<double>::quiet_NaN();
  return json{
      {"algorithm", cell.algorithm},
      {"alpha", cell.alpha},
      {"M", cell.M},
      {"smnr_db", smnr_to_json(cell.smnr_db)},
      {"srnr_db", std::isinf(s) ? json("inf") : json(s)},
      {"asce", cell.trials() > 0 ? asce(cell.metrics) : 0.0},
      {"sum_signal_energy", cell.metrics.sum_signal_energy},
      {"sum_error_energy", cell.metrics.sum_error_energy},
      {"sum_support_distortion", cell.metrics.sum_support_distortion},
      {"trials", cell.trials()},
      {"matched_filters", cell.counter_sums.matched_filters},
      {"projections", cell.counter_sums.projections},
      {"lookahead_matched_filters",
       cell.counter_sums.lookahead_matched_filters},
      {"lookahead_projections", cell.counter_sums.lookahead_projections},
      {"seconds_sum", cell.seconds_sum},
      {"failures", cell.failures},
  };
}

ReportCell cell_from_json(const json& j, int sparsity) {
  ReportCell cell;
  cell.algorithm = j.at("algorithm").get<std::string>();
  cell.alpha = j.at("alpha").get<double>();
  cell.M = j.at("M").get<int>();
  cell.smnr_db = smnr_from_json(j.at("smnr_db"));
  cell.metrics = MetricsAccumulator(sparsity);
  cell.metrics.sum_signal_energy = j.at("sum_signal_energy").get<double>();
  cell.metrics.sum_error_energy = j.at("sum_error_energy").get<double>();
  cell.metrics.sum_support_distortion =
      j.at("sum_support_distortion").get<double>();
  cell.metrics.trials = j.at("trials").get<long>();
  cell.counter_sums.matched_filters = j.at("matched_filters").get<long>();
  cell.counter_sums.projections = j.at("projections").get<long>();
  cell.counter_sums.lookahead_matched_filters =
      j.at("lookahead_matched_filters").get<long>();
  cell.counter_sums.lookahead_projections =
      j.at("lookahead_projections").get<long>();
  cell.seconds_sum = j.at("seconds_sum").get<double>();
  cell.failures = j.at("failures").get<long>();
  return cell;
}

}  // namespace

std::string report_to_json(const ExperimentReport& report) {
  json j;
  j["config"] = config_to_json(report.config);
  j["cells"] = json::array();
  for (const ReportCell& cell : report.cells)
    j["cells"].push_back(cell_to_json(cell));
  return j.dump(2);
}

ExperimentReport report_from_json(const std::string& json_text) {
  json j = json::parse(json_text);
  ExperimentReport report;
  report.config = config_from_json(j.at("config"));
  for (const json& c : j.at("cells"))
    report.cells.push_back(cell_from_json(c, report.config.K));
  return report;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open config file: " + path);
  json j = json::parse(in);
  return config_from_json(j);
}

void emit_report(const ExperimentReport& report, ReportFormat format,
                 const std::string& destination) {
  if (report.cells.empty())
    throw std::runtime_error("emit_report: empty report");
  std::ofstream out(destination);
  if (!out)
    throw std::runtime_error("emit_report: cannot open " + destination);
  if (format == ReportFormat::Json) {
    out << report_to_json(report) << '\n';
  } else {
    out << "algorithm,alpha,M,smnr_db,srnr_db,asce,mf_ops,proj_ops,"
           "mean_seconds,trials\n";
    for (const ReportCell& cell : report.cells) {
      long n = cell.trials();
      double mean_mf =
          n > 0 ? static_cast<double>(cell.counter_sums.matched_filters +
                                      cell.counter_sums
                                          .lookahead_matched_filters) /
                      n
                : 0.0;
      double mean_proj =
          n > 0 ? static_cast<double>(cell.counter_sums.projections +
                                      cell.counter_sums.lookahead_projections) /
                      n
                : 0.0;
      out << cell.algorithm << ',' << fmt17(cell.alpha) << ',' << cell.M << ','
          << (cell.smnr_db ? fmt17(*cell.smnr_db) : "clean") << ','
          << (n > 0 ? fmt17(srnr_db(cell.metrics)) : "nan") << ','
          << (n > 0 ? fmt17(asce(cell.metrics)) : "nan") << ','
          << fmt17(mean_mf) << ',' << fmt17(mean_proj) << ','
          << fmt17(n > 0 ? cell.seconds_sum / n : 0.0) << ',' << n << '\n';
    }
  }
  if (!out) throw std::runtime_error("emit_report: write failure");
}

void emit_timing_table(const std::vector<TimingRow>& rows,
                       const std::string& destination) {
  std::ofstream out(destination);
  if (!out)
    throw std::runtime_error("emit_timing_table: cannot open " + destination);
  out << "algorithm,N,K,M,repetitions,mean_seconds,mf_ops,proj_ops,"
         "la_mf_ops,la_proj_ops\n";
  for (const TimingRow& row : rows)
    out << row.algorithm << ',' << row.N << ',' << row.K << ',' << row.M << ','
        << row.repetitions << ',' << fmt17(row.mean_seconds) << ','
        << row.mean_counters.matched_filters << ','
        << row.mean_counters.projections << ','
        << row.mean_counters.lookahead_matched_filters << ','
        << row.mean_counters.lookahead_projections << '\n';
  if (!out) throw std::runtime_error("emit_timing_table: write failure");
}

void emit_plot_data(const ExperimentReport& report, PlotMeasure measure,
                    const std::string& destination) {
  if (report.cells.empty())
    throw std::runtime_error("emit_plot_data: empty report");
  std::ofstream out(destination);
  if (!out)
    throw std::runtime_error("emit_plot_data: cannot open " + destination);

  const ExperimentConfig& config = report.config;
  for (const auto& smnr : config.smnr_db_list) {
    out << "# smnr_db = " << (smnr ? fmt_short(*smnr) : "clean") << '\n';
    out << "# alpha";
    for (const AlgorithmSpec& spec : config.algorithms)
      out << ' ' << spec.label();
    out << '\n';
    for (double alpha : config.alpha_list) {
      out << fmt17(alpha);
      for (const AlgorithmSpec& spec : config.algorithms) {
        const ReportCell& cell = report.cell(spec.label(), alpha, smnr);
        double v = measure == PlotMeasure::Srnr ? srnr_db(cell.metrics)
                                                : asce(cell.metrics);
        out << ' ' << fmt17(v);
      }
      out << '\n';
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("emit_plot_data: write failure");
}

}  // namespace cs
