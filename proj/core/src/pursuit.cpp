#include "cs/pursuit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cs {

std::string algorithm_name(Algorithm algo) {
  switch (algo) {
    case Algorithm::Omp: return "omp";
    case Algorithm::Ols: return "ols";
    case Algorithm::Sp: return "sp";
    case Algorithm::Pomp: return "pomp";
    case Algorithm::Laols: return "laols";
    case Algorithm::Sols: return "sols";
  }
  throw std::invalid_argument("algorithm_name: unknown algorithm");
}

Algorithm algorithm_from_name(const std::string& name) {
  if (name == "omp") return Algorithm::Omp;
  if (name == "ols") return Algorithm::Ols;
  if (name == "sp") return Algorithm::Sp;
  if (name == "pomp") return Algorithm::Pomp;
  if (name == "laols") return Algorithm::Laols;
  if (name == "sols") return Algorithm::Sols;
  throw std::invalid_argument("unknown algorithm: " + name);
}

int PursuitConfig::reduced_atoms() const {
  return potential_atoms -
         static_cast<int>(std::floor(gamma * potential_atoms));
}

void PursuitConfig::validate() const {
  if (sparsity < 1)
    throw std::invalid_argument("PursuitConfig: sparsity must be >= 1");
  if (potential_atoms < 1 || potential_atoms > sparsity)
    throw std::invalid_argument("PursuitConfig: require 1 <= L <= K");
  if (gamma < 0.0 || gamma >= 1.0)
    throw std::invalid_argument("PursuitConfig: require 0 <= gamma < 1");
  if (beta_tolerance <= 0.0)
    throw std::invalid_argument("PursuitConfig: beta_tolerance must be > 0");
}

OpCounters& OpCounters::operator+=(const OpCounters& other) {
  matched_filters += other.matched_filters;
  projections += other.projections;
  lookahead_matched_filters += other.lookahead_matched_filters;
  lookahead_projections += other.lookahead_projections;
  return *this;
}

namespace {

// Incrementally grown LS solve over a support. Prefers the recursive
// Gram-inverse update; falls back to a direct (SVD) solve for the rest of
// the run if the recursion goes near-singular. Copyable, so candidate
// evaluations work on throwaway copies.
class IncrementalSolver {
 public:
  IncrementalSolver(const Matrix& A, const Vector& y,
                    const PursuitConfig& config)
      : A_(&A),
        y_(&y),
        recursive_(config.use_recursive_gram),
        beta_tol_(config.beta_tolerance),
        residual_(y),
        norm_(y.norm()) {}

  void push(int index) {
    SupportSet grown = support_;
    grown.push_back(index);
    if (recursive_ && !direct_mode_) {
      try {
        if (support_.empty())
          state_ = gram_inverse_init(*A_, *y_, grown);
        else
          state_ = gram_inverse_extend(state_, *A_, *y_, index, beta_tol_);
        support_ = std::move(grown);
        coeffs_ = state_.coeffs();
        residual_ = *y_ - columns(*A_, support_) * coeffs_;
        norm_ = residual_.norm();
        return;
      } catch (const NearSingularError&) {
        direct_mode_ = true;
        rank_warning_ = true;
      }
    }
    support_ = std::move(grown);
    Residual res = residual_on_support(*A_, *y_, support_);
    coeffs_ = std::move(res.coeffs);
    residual_ = std::move(res.r);
    norm_ = res.norm;
    rank_warning_ = rank_warning_ || res.ill_conditioned;
  }

  const SupportSet& support() const { return support_; }
  const Vector& residual() const { return residual_; }
  const Vector& coeffs() const { return coeffs_; }
  double norm() const { return norm_; }
  bool rank_warning() const { return rank_warning_; }
  const Matrix& matrix() const { return *A_; }
  const Vector& observation() const { return *y_; }

 private:
  const Matrix* A_;
  const Vector* y_;
  bool recursive_;
  bool direct_mode_ = false;
  bool rank_warning_ = false;
  double beta_tol_;
  SupportSet support_;
  GramInverseState state_;
  Vector coeffs_;
  Vector residual_;
  double norm_;
};

void check_inputs(const Matrix& A, const Vector& y,
                  const PursuitConfig& config) {
  config.validate();
  if (y.size() != A.rows())
    throw std::invalid_argument("pursuit: dimension mismatch");
  if (config.sparsity > A.rows())
    throw std::invalid_argument("pursuit: K must not exceed M");
}

RecoveryResult degenerate_zero_result(const Matrix& A) {
  RecoveryResult result;
  result.estimate = Vector::Zero(A.cols());
  result.residual_norms = {0.0};
  return result;
}

void finalize(RecoveryResult& result, const IncrementalSolver& solver) {
  result.support = solver.support();
  result.estimate = Vector::Zero(solver.matrix().cols());
  for (int j = 0; j < result.support.size(); ++j)
    result.estimate[result.support[j]] = solver.coeffs()[j];
  result.rank_warning = result.rank_warning || solver.rank_warning();
}

// Simulated OMP future from the solver's current support plus `atom`.
// Counts (iterations run) lookahead matched filters and (iterations run + 1)
// lookahead projections, the rolled-back iteration included.
double look_ahead_from(IncrementalSolver solver, int atom, int sparsity,
                       OpCounters& counters) {
  solver.push(atom);
  counters.lookahead_projections += 1;
  double prev_norm = solver.norm();
  while (solver.support().size() < sparsity) {
    Vector corr = matched_filter(solver.matrix(), solver.residual());
    counters.lookahead_matched_filters += 1;
    int next = top_amplitude_indices(corr, 1, solver.support())[0];
    IncrementalSolver snapshot = solver;
    solver.push(next);
    counters.lookahead_projections += 1;
    if (solver.norm() > prev_norm) {
      solver = std::move(snapshot);
      break;
    }
    prev_norm = solver.norm();
  }
  return solver.norm();
}

// Shared serial skeleton: grow the support one atom per iteration, stop on a
// residual-norm increase (restoring the pre-growth snapshot) or after K
// iterations. `select` picks the next atom and does its own counting.
template <typename SelectFn>
RecoveryResult serial_pursuit(const Matrix& A, const Vector& y,
                              const PursuitConfig& config, SelectFn select) {
  check_inputs(A, y, config);
  if (y.isZero(0.0)) return degenerate_zero_result(A);

  RecoveryResult result;
  IncrementalSolver solver(A, y, config);
  result.residual_norms.push_back(solver.norm());

  for (int k = 1; k <= config.sparsity; ++k) {
    int atom = select(solver, result);
    IncrementalSolver snapshot = solver;
    solver.push(atom);
    result.counters.projections += 1;
    if (solver.norm() > result.residual_norms.back()) {
      solver = std::move(snapshot);
      result.early_stop = true;
      break;
    }
    result.residual_norms.push_back(solver.norm());
  }

  finalize(result, solver);
  return result;
}

// Candidate pool for one iteration: top-L matched-filter amplitudes outside
// the current support, clamped to however many candidates remain.
SupportSet potential_atoms(const IncrementalSolver& solver, int count,
                           RecoveryResult& result) {
  Vector corr = matched_filter(solver.matrix(), solver.residual());
  result.counters.matched_filters += 1;
  int available =
      static_cast<int>(solver.matrix().cols()) - solver.support().size();
  if (available < count) result.clamped_candidates = true;
  return top_amplitude_indices(corr, count, solver.support());
}

// Masked-projection selection shared by proj_atom_index and
// proj_multi_atom_indices: LS on I union I_p, keep only I_p's coefficients,
// rank them by decreasing amplitude (lowest index on ties).
std::vector<int> projection_ranked(const Matrix& A, const Vector& y,
                                   const SupportSet& I, const SupportSet& I_p,
                                   bool* rank_warning) {
  if (I_p.empty())
    throw std::invalid_argument("projection selection: empty candidate set");
  for (int i : I_p)
    if (I.contains(i))
      throw std::invalid_argument(
          "projection selection: candidate overlaps support");

  SupportSet merged = I;
  for (int i : I_p) merged.push_back(i);
  LsSolution sol = least_squares_on_support(A, y, merged);
  if (rank_warning && sol.ill_conditioned) *rank_warning = true;

  std::vector<int> ranked(I_p.begin(), I_p.end());
  std::sort(ranked.begin(), ranked.end());  // ties resolve to lower index
  auto amplitude = [&](int index) {
    for (int j = 0; j < merged.size(); ++j)
      if (merged[j] == index) return std::abs(sol.coeffs[j]);
    return 0.0;
  };
  std::stable_sort(ranked.begin(), ranked.end(),
                   [&](int a, int b) { return amplitude(a) > amplitude(b); });
  return ranked;
}

}  // namespace

int proj_atom_index(const Matrix& A, const Vector& y, const SupportSet& I,
                    const SupportSet& I_p, OpCounters* counters,
                    bool* rank_warning) {
  std::vector<int> ranked = projection_ranked(A, y, I, I_p, rank_warning);
  if (counters) counters->projections += 1;
  return ranked.front();
}

SupportSet proj_multi_atom_indices(const Matrix& A, const Vector& y,
                                   const SupportSet& I, const SupportSet& I_p,
                                   int reduced_count, OpCounters* counters,
                                   bool* rank_warning, bool* clamped) {
  if (reduced_count < 1)
    throw std::invalid_argument("proj_multi_atom_indices: count must be >= 1");
  std::vector<int> ranked = projection_ranked(A, y, I, I_p, rank_warning);
  if (counters) counters->projections += 1;
  if (reduced_count > static_cast<int>(ranked.size())) {
    reduced_count = static_cast<int>(ranked.size());
    if (clamped) *clamped = true;
  }
  SupportSet out;
  for (int j = 0; j < reduced_count; ++j) out.push_back(ranked[j]);
  return out;
}

double look_ahead_resid_norm(const Matrix& A, const Vector& y, int sparsity,
                             const SupportSet& I, int atom_index,
                             const PursuitConfig& config,
                             OpCounters* counters) {
  if (I.contains(atom_index))
    throw std::invalid_argument("look_ahead_resid_norm: atom already selected");
  if (I.size() + 1 > sparsity)
    throw std::invalid_argument("look_ahead_resid_norm: support already full");
  IncrementalSolver solver(A, y, config);
  for (int i : I) solver.push(i);
  OpCounters local;
  double norm = look_ahead_from(std::move(solver), atom_index, sparsity, local);
  if (counters) *counters += local;
  return norm;
}

RecoveryResult omp(const Matrix& A, const Vector& y,
                   const PursuitConfig& config) {
  return serial_pursuit(
      A, y, config, [](const IncrementalSolver& solver, RecoveryResult& result) {
        Vector corr = matched_filter(solver.matrix(), solver.residual());
        result.counters.matched_filters += 1;
        return top_amplitude_indices(corr, 1, solver.support())[0];
      });
}

RecoveryResult ols(const Matrix& A, const Vector& y,
                   const PursuitConfig& config) {
  return serial_pursuit(
      A, y, config, [](const IncrementalSolver& solver, RecoveryResult& result) {
        int best = -1;
        double best_norm = std::numeric_limits<double>::infinity();
        for (int i = 0; i < solver.matrix().cols(); ++i) {
          if (solver.support().contains(i)) continue;
          IncrementalSolver trial = solver;
          trial.push(i);
          result.counters.projections += 1;
          if (trial.norm() < best_norm) {  // strict: ties keep the lower index
            best_norm = trial.norm();
            best = i;
          }
        }
        return best;
      });
}

RecoveryResult pomp(const Matrix& A, const Vector& y,
                    const PursuitConfig& config) {
  return serial_pursuit(
      A, y, config,
      [&config](const IncrementalSolver& solver, RecoveryResult& result) {
        SupportSet pool =
            potential_atoms(solver, config.potential_atoms, result);
        return proj_atom_index(solver.matrix(), solver.observation(),
                               solver.support(), pool, &result.counters,
                               &result.rank_warning);
      });
}

RecoveryResult laols(const Matrix& A, const Vector& y,
                     const PursuitConfig& config) {
  return serial_pursuit(
      A, y, config,
      [&config](const IncrementalSolver& solver, RecoveryResult& result) {
        SupportSet pool =
            potential_atoms(solver, config.potential_atoms, result);
        int best = pool[0];
        double best_norm = std::numeric_limits<double>::infinity();
        for (int candidate : pool) {
          double norm = look_ahead_from(solver, candidate, config.sparsity,
                                        result.counters);
          // Exact score ties go to the lowest atom index, independent of the
          // candidate scan order (keeps the look-ahead variants equivalent
          // whenever their candidate sets coincide).
          if (norm < best_norm || (norm == best_norm && candidate < best)) {
            best_norm = norm;
            best = candidate;
          }
        }
        return best;
      });
}

RecoveryResult sols(const Matrix& A, const Vector& y,
                    const PursuitConfig& config) {
  return serial_pursuit(
      A, y, config,
      [&config](const IncrementalSolver& solver, RecoveryResult& result) {
        SupportSet pool =
            potential_atoms(solver, config.potential_atoms, result);
        SupportSet reduced = proj_multi_atom_indices(
            solver.matrix(), solver.observation(), solver.support(), pool,
            config.reduced_atoms(), nullptr, &result.rank_warning,
            &result.clamped_candidates);
        int best = reduced[0];
        double best_norm = std::numeric_limits<double>::infinity();
        for (int candidate : reduced) {
          double norm = look_ahead_from(solver, candidate, config.sparsity,
                                        result.counters);
          if (norm < best_norm || (norm == best_norm && candidate < best)) {
            best_norm = norm;
            best = candidate;
          }
        }
        return best;
      });
}

RecoveryResult sp(const Matrix& A, const Vector& y,
                  const PursuitConfig& config) {
  check_inputs(A, y, config);
  if (y.isZero(0.0)) return degenerate_zero_result(A);

  const int K = config.sparsity;
  RecoveryResult result;
  if (2 * K > A.rows()) result.rank_warning = true;

  Vector corr = matched_filter(A, y);
  result.counters.matched_filters += 1;
  SupportSet support = top_amplitude_indices(corr, K);
  Residual res = residual_on_support(A, y, support);
  result.counters.projections += 1;
  result.rank_warning = result.rank_warning || res.ill_conditioned;
  result.residual_norms.push_back(res.norm);

  // Ranks the merged support's coefficients; returns the K strongest
  // indices (decreasing amplitude, lowest index on ties).
  auto refine = [K](const SupportSet& merged, const Vector& coeffs) {
    std::vector<int> order(merged.begin(), merged.end());
    std::vector<double> amp(merged.size());
    for (int j = 0; j < merged.size(); ++j) amp[j] = std::abs(coeffs[j]);
    std::sort(order.begin(), order.end());
    auto amplitude = [&](int index) {
      for (int j = 0; j < merged.size(); ++j)
        if (merged[j] == index) return amp[j];
      return 0.0;
    };
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return amplitude(a) > amplitude(b);
    });
    SupportSet out;
    for (int j = 0; j < K; ++j) out.push_back(order[j]);
    return out;
  };

  // Hard cap of K refinement passes guarantees termination.
  for (int k = 1; k <= K; ++k) {
    corr = matched_filter(A, res.r);
    result.counters.matched_filters += 1;
    SupportSet picks = top_amplitude_indices(corr, K);
    SupportSet merged = support;
    for (int i : picks)
      if (!merged.contains(i)) merged.push_back(i);

    LsSolution joint = least_squares_on_support(A, y, merged);
    result.counters.projections += 1;
    result.rank_warning = result.rank_warning || joint.ill_conditioned;

    SupportSet next = refine(merged, joint.coeffs);
    Residual next_res = residual_on_support(A, y, next);
    result.counters.projections += 1;
    result.rank_warning = result.rank_warning || next_res.ill_conditioned;

    if (next_res.norm > res.norm) {
      result.early_stop = true;
      break;
    }
    support = std::move(next);
    res = std::move(next_res);
    result.residual_norms.push_back(res.norm);
  }

  result.support = support;
  result.estimate = Vector::Zero(A.cols());
  for (int j = 0; j < support.size(); ++j)
    result.estimate[support[j]] = res.coeffs[j];
  return result;
}

RecoveryResult run_algorithm(Algorithm algo, const Matrix& A, const Vector& y,
                             const PursuitConfig& config) {
  switch (algo) {
    case Algorithm::Omp: return omp(A, y, config);
    case Algorithm::Ols: return ols(A, y, config);
    case Algorithm::Sp: return sp(A, y, config);
    case Algorithm::Pomp: return pomp(A, y, config);
    case Algorithm::Laols: return laols(A, y, config);
    case Algorithm::Sols: return sols(A, y, config);
  }
  throw std::invalid_argument("run_algorithm: unknown algorithm");
}

}  // namespace cs
