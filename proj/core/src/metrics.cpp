#include "cs/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cs {

void MetricsAccumulator::merge(const MetricsAccumulator& other) {
  sum_signal_energy += other.sum_signal_energy;
  sum_error_energy += other.sum_error_energy;
  sum_support_distortion += other.sum_support_distortion;
  trials += other.trials;
}

void accumulate(MetricsAccumulator& acc, const SparseSignal& x_true,
                const Vector& x_hat, const SupportSet& support_hat) {
  if (x_hat.size() != x_true.length)
    throw std::invalid_argument("accumulate: dimension mismatch");
  if (acc.sparsity <= 0)
    throw std::logic_error("accumulate: accumulator sparsity not set");

  Vector dense = x_true.to_dense();
  acc.sum_signal_energy += dense.squaredNorm();
  acc.sum_error_energy += (dense - x_hat).squaredNorm();
  int hits = x_true.support.intersection_size(support_hat);
  acc.sum_support_distortion +=
      1.0 - static_cast<double>(hits) / acc.sparsity;
  acc.trials += 1;
}

double srnr_db(const MetricsAccumulator& acc) {
  if (acc.trials < 1) throw std::logic_error("srnr_db: no trials");
  if (acc.sum_error_energy <= 0.0)
    return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(acc.sum_signal_energy / acc.sum_error_energy);
}

double asce(const MetricsAccumulator& acc) {
  if (acc.trials < 1) throw std::logic_error("asce: no trials");
  return acc.sum_support_distortion / acc.trials;
}

SupportSet support_of(const Vector& x_hat, int sparsity) {
  if (sparsity > x_hat.size())
    throw std::invalid_argument("support_of: K exceeds vector length");
  return top_amplitude_indices(x_hat, sparsity);
}

}  // namespace cs
