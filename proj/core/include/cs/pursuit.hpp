#ifndef CS_PURSUIT_HPP
#define CS_PURSUIT_HPP

#include <string>
#include <vector>

#include "cs/linalg.hpp"

namespace cs {

enum class Algorithm { Omp, Ols, Sp, Pomp, Laols, Sols };

std::string algorithm_name(Algorithm algo);
Algorithm algorithm_from_name(const std::string& name);

struct PursuitConfig {
  int sparsity = 1;          // K
  int potential_atoms = 1;   // L, 1 <= L <= K
  double gamma = 0.0;        // SOLS reduction, 0 <= gamma < 1
  bool use_recursive_gram = true;
  double beta_tolerance = 1e-12;

  /// L' = L - floor(gamma * L); always >= 1 for valid configs.
  int reduced_atoms() const;
  void validate() const;  // throws std::invalid_argument
};

struct OpCounters {
  long matched_filters = 0;
  long projections = 0;
  long lookahead_matched_filters = 0;
  long lookahead_projections = 0;

  OpCounters& operator+=(const OpCounters& other);
};

struct RecoveryResult {
  Vector estimate;                     // full length N, zero off-support
  SupportSet support;
  std::vector<double> residual_norms;  // ||r_0|| first, retained iterations
  OpCounters counters;
  bool rank_warning = false;
  bool early_stop = false;       // residual increase fired before k = K
  bool clamped_candidates = false;  // fewer than L (or L') candidates available
};

/// Serial matched-filter pursuit: argmax |A^t r| per iteration.
RecoveryResult omp(const Matrix& A, const Vector& y, const PursuitConfig& config);

/// Per iteration picks the atom whose one-step-ahead residual norm is
/// minimal over every non-selected candidate.
RecoveryResult ols(const Matrix& A, const Vector& y, const PursuitConfig& config);

/// Subspace pursuit: refines a full K-element support each iteration.
RecoveryResult sp(const Matrix& A, const Vector& y, const PursuitConfig& config);

/// Projection-based OMP: top-L matched-filter candidates reduced to one atom
/// by a joint LS projection.
RecoveryResult pomp(const Matrix& A, const Vector& y, const PursuitConfig& config);

/// Look-ahead OLS: each of the top-L candidates is scored by the residual
/// norm its full simulated future attains.
RecoveryResult laols(const Matrix& A, const Vector& y, const PursuitConfig& config);

/// Structured OLS: projection-based reduction from L to L' candidates,
/// look-ahead scoring over the survivors.
RecoveryResult sols(const Matrix& A, const Vector& y, const PursuitConfig& config);

RecoveryResult run_algorithm(Algorithm algo, const Matrix& A, const Vector& y,
                             const PursuitConfig& config);

/// LS on I union I_p, coefficients outside I_p zeroed, index of the largest
/// surviving amplitude (in I_p by construction). Counts one projection.
int proj_atom_index(const Matrix& A, const Vector& y, const SupportSet& I,
                    const SupportSet& I_p, OpCounters* counters = nullptr,
                    bool* rank_warning = nullptr);

/// Same projection-and-mask, returning the reduced_count highest-amplitude
/// indices in decreasing amplitude order. reduced_count > |I_p| is clamped.
SupportSet proj_multi_atom_indices(const Matrix& A, const Vector& y,
                                   const SupportSet& I, const SupportSet& I_p,
                                   int reduced_count,
                                   OpCounters* counters = nullptr,
                                   bool* rank_warning = nullptr,
                                   bool* clamped = nullptr);

/// Final residual norm of the simulated OMP future seeded with I union {i}.
/// Adds (future iterations + 1) lookahead projections and (future iterations)
/// lookahead matched filters to `counters`.
double look_ahead_resid_norm(const Matrix& A, const Vector& y, int sparsity,
                             const SupportSet& I, int atom_index,
                             const PursuitConfig& config,
                             OpCounters* counters = nullptr);

}  // namespace cs

#endif  // CS_PURSUIT_HPP
