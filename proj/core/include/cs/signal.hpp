#ifndef CS_SIGNAL_HPP
#define CS_SIGNAL_HPP

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>

#include "cs/linalg.hpp"

namespace cs {

/// Deterministic random stream. The engine (mt19937_64) and the normal
/// transform (Box-Muller, caching the second deviate) are both fully pinned,
/// so a given seed yields the same draw sequence on every platform.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in (0, 1].
  double uniform();

  /// Standard normal deviate.
  double normal();

  /// Uniform integer in [0, bound).
  std::uint64_t uniform_below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
  bool has_cached_ = false;
  double cached_ = 0.0;
};

/// Mixes a master seed with trial coordinates into an independent sub-seed
/// (splitmix64 finalizer chained over the parts).
std::uint64_t derive_seed(std::uint64_t master,
                          std::initializer_list<std::uint64_t> parts);

enum class SignalKind { Gaussian, Binary };

struct SparseSignal {
  int length = 0;
  SupportSet support;  // |support| = K
  Vector values;       // K nonzero scalars, aligned with support order

  Vector to_dense() const;
};

struct NoiseSpec {
  enum class Kind { Clean, Gaussian };
  Kind kind = Kind::Clean;
  double sigma = 0.0;

  static NoiseSpec clean() { return {Kind::Clean, 0.0}; }
  static NoiseSpec gaussian(double sigma) { return {Kind::Gaussian, sigma}; }
};

/// M x N matrix with entries drawn N(0, 1/M), columns scaled to unit norm.
/// Requires M <= N.
Matrix generate_sensing_matrix(int rows, int cols, SeededRng& rng);

/// K-sparse signal with support uniform without replacement over [0, N).
/// Gaussian kind: i.i.d. standard normal values (exact zeros redrawn);
/// binary kind: all ones. Requires 1 <= K < N.
SparseSignal generate_sparse_signal(int length, int sparsity, SignalKind kind,
                                    SeededRng& rng);

/// sigma_w achieving the requested SMNR (dB) with E||x||^2 = K.
double noise_sigma_for_smnr(int sparsity, int rows, double smnr_db,
                            SignalKind kind);

/// y = A_I x_I + w.
Vector apply_measurement(const Matrix& A, const SparseSignal& x,
                         const NoiseSpec& noise, SeededRng& rng);

/// Binary matrix dump: 8-byte magic "CSMATRIX", u64 rows, u64 cols, then
/// row-major little-endian f64 entries. Used for cross-implementation
/// golden tests.
void write_matrix(std::ostream& out, const Matrix& A);
Matrix read_matrix(std::istream& in);
void write_matrix_file(const std::string& path, const Matrix& A);
Matrix read_matrix_file(const std::string& path);

}  // namespace cs

#endif  // CS_SIGNAL_HPP
