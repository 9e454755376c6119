#ifndef CS_METRICS_HPP
#define CS_METRICS_HPP

#include "cs/linalg.hpp"
#include "cs/signal.hpp"

namespace cs {

/// Pooled energies behind SRNR and the mean behind ASCE. Accumulators merge
/// by field-wise addition, so per-worker partials combine deterministically.
struct MetricsAccumulator {
  double sum_signal_energy = 0.0;
  double sum_error_energy = 0.0;
  double sum_support_distortion = 0.0;
  long trials = 0;
  int sparsity = 0;  // K

  explicit MetricsAccumulator(int sparsity_k = 0) : sparsity(sparsity_k) {}

  void merge(const MetricsAccumulator& other);
};

/// Adds one trial: ||x||^2, ||x - x_hat||^2, and the support distortion
/// 1 - |I intersect I_hat| / K.
void accumulate(MetricsAccumulator& acc, const SparseSignal& x_true,
                const Vector& x_hat, const SupportSet& support_hat);

/// 10 log10(pooled signal energy / pooled error energy); +infinity when the
/// error energy is exactly zero. Throws std::logic_error on zero trials.
double srnr_db(const MetricsAccumulator& acc);

/// Mean support distortion, in [0, 1]. Throws std::logic_error on zero trials.
double asce(const MetricsAccumulator& acc);

/// Top-K amplitude indices of x_hat (lowest index on ties); scores estimators
/// whose output is not exactly K-sparse.
SupportSet support_of(const Vector& x_hat, int sparsity);

}  // namespace cs

#endif  // CS_METRICS_HPP
