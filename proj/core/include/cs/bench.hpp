#ifndef CS_BENCH_HPP
#define CS_BENCH_HPP

#include <optional>
#include <string>
#include <vector>

#include "cs/metrics.hpp"
#include "cs/pursuit.hpp"
#include "cs/signal.hpp"

namespace cs {

struct AlgorithmSpec {
  Algorithm algo = Algorithm::Omp;
  int potential_atoms = 1;  // L (pomp/laols/sols)
  double gamma = 0.0;       // sols only

  /// Stable column label, e.g. "pomp_L20" or "sols_L20_g0.5".
  std::string label() const;
};

struct ExperimentConfig {
  int N = 0;
  int K = 0;
  std::vector<double> alpha_list;
  // nullopt marks the clean (noise-free) condition.
  std::vector<std::optional<double>> smnr_db_list;
  SignalKind signal_kind = SignalKind::Gaussian;
  int S = 1;  // signals per matrix
  int T = 1;  // matrix realizations
  std::vector<AlgorithmSpec> algorithms;
  std::uint64_t master_seed = 0;
  bool use_recursive_gram = true;
  bool measure_time = false;  // wall-clock per trial; off keeps output seed-deterministic
  double log_base = 0.0;      // 0 = natural log, used by the timing protocol

  int measurements_for(double alpha) const;  // M = alpha * N
  void validate() const;                     // throws std::invalid_argument
};

struct ReportCell {
  std::string algorithm;
  double alpha = 0.0;
  int M = 0;
  std::optional<double> smnr_db;  // nullopt = clean
  MetricsAccumulator metrics;
  OpCounters counter_sums;
  double seconds_sum = 0.0;
  long failures = 0;

  long trials() const { return metrics.trials; }
};

struct ExperimentReport {
  ExperimentConfig config;
  // Ordered (alpha, smnr, algorithm), matching the config lists.
  std::vector<ReportCell> cells;

  const ReportCell& cell(const std::string& algorithm_label, double alpha,
                         std::optional<double> smnr_db) const;
};

/// Full testing sweep: T sensing matrices per alpha, S signals per matrix,
/// every SMNR level, every configured algorithm. Deterministic given
/// (config, master_seed) for any worker count.
ExperimentReport run_sweep(const ExperimentConfig& config, int workers = 1);

struct TimingRow {
  std::string algorithm;
  int N = 0;
  int K = 0;
  int M = 0;
  double mean_seconds = 0.0;
  OpCounters mean_counters;  // per recovery
  long repetitions = 0;
};

/// Running-time protocol: M = ceil(K * log N), SMNR = 20 dB, one warm-up
/// recovery excluded, then `repetitions` timed recoveries per algorithm.
std::vector<TimingRow> measure_running_time(const ExperimentConfig& config,
                                            int repetitions);

enum class ReportFormat { Csv, Json };

/// csv: header + one row per cell, numbers at 17 significant digits,
/// infinite SRNR as "inf". json: full report including config echo.
void emit_report(const ExperimentReport& report, ReportFormat format,
                 const std::string& destination);

void emit_timing_table(const std::vector<TimingRow>& rows,
                       const std::string& destination);

enum class PlotMeasure { Srnr, Asce };

/// Plot-ready columns: alpha then one column per algorithm series, one block
/// per SMNR level.
void emit_plot_data(const ExperimentReport& report, PlotMeasure measure,
                    const std::string& destination);

/// JSON (de)serialization of reports and configs.
std::string report_to_json(const ExperimentReport& report);
ExperimentReport report_from_json(const std::string& json_text);
ExperimentConfig load_experiment_config(const std::string& path);

}  // namespace cs

#endif  // CS_BENCH_HPP
