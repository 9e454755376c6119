#ifndef CS_LINALG_HPP
#define CS_LINALG_HPP

#include <Eigen/Dense>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace cs {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Ordered set of column indices. Insertion order is preserved: the atom
/// added at iteration k sits at position k-1.
class SupportSet {
 public:
  SupportSet() = default;
  SupportSet(std::initializer_list<int> indices);

  void push_back(int index);
  bool contains(int index) const;
  bool empty() const { return indices_.empty(); }
  int size() const { return static_cast<int>(indices_.size()); }
  int operator[](int pos) const { return indices_[pos]; }

  auto begin() const { return indices_.begin(); }
  auto end() const { return indices_.end(); }
  const std::vector<int>& indices() const { return indices_; }

  /// Same elements regardless of order.
  bool same_elements(const SupportSet& other) const;
  /// Number of indices shared with `other`.
  int intersection_size(const SupportSet& other) const;

  bool operator==(const SupportSet& other) const {
    return indices_ == other.indices_;
  }

 private:
  std::vector<int> indices_;
};

/// Raised when a Gram matrix (or its rank-1 extension) is numerically
/// singular; carries the offending support.
class NearSingularError : public std::runtime_error {
 public:
  NearSingularError(std::string what, SupportSet support)
      : std::runtime_error(std::move(what)), support_(std::move(support)) {}
  const SupportSet& support() const { return support_; }

 private:
  SupportSet support_;
};

/// Condition number above which least-squares results carry a warning flag.
inline constexpr double kConditionWarnThreshold = 1e10;

/// Submatrix of the columns of A indexed by I, in I's order.
Matrix columns(const Matrix& A, const SupportSet& I);

/// A^t r. Throws std::invalid_argument on dimension mismatch.
Vector matched_filter(const Matrix& A, const Vector& r);

/// Indices of the min(count, #non-excluded) largest |v_i| among indices not
/// in `excluded`, ordered by decreasing amplitude, lowest index on ties.
/// Throws std::invalid_argument when every index is excluded.
SupportSet top_amplitude_indices(const Vector& v, int count,
                                 const SupportSet& excluded = {});

struct LsSolution {
  Vector coeffs;                 // size |I|
  bool ill_conditioned = false;  // estimated condition > 1e10
};

/// Minimizer of ||y - A_I c||_2; minimum-norm solution when A_I is
/// rank-deficient (flagged, never raised).
LsSolution least_squares_on_support(const Matrix& A, const Vector& y,
                                    const SupportSet& I);

struct Residual {
  Vector r;
  double norm = 0.0;
  Vector coeffs;  // the LS coefficients behind the residual
  bool ill_conditioned = false;
};

/// r = y - A_I (A_I^+ y) and its 2-norm. Empty I gives (y, ||y||).
Residual residual_on_support(const Matrix& A, const Vector& y,
                             const SupportSet& I);

/// Running state of the recursive Gram-inverse: (A_I^t A_I)^{-1} plus A_I^t y,
/// extended one column at a time by rank-1 block updates.
struct GramInverseState {
  SupportSet support;
  Matrix gram_inverse;          // |I| x |I|, symmetric
  Vector projected_observation; // A_I^t y

  /// LS coefficients for the current support.
  Vector coeffs() const { return gram_inverse * projected_observation; }
};

/// Direct initialization: gram_inverse = (A_I^t A_I)^{-1}.
/// Throws NearSingularError when the Gram matrix is singular.
GramInverseState gram_inverse_init(const Matrix& A, const Vector& y,
                                   const SupportSet& I);

/// Extends the state to support + {new_index} via the 2x2 block-inverse
/// update: q = A_I^t a, beta = a^t a - q^t P^{-1} q. Throws NearSingularError
/// when beta <= beta_tolerance.
GramInverseState gram_inverse_extend(const GramInverseState& state,
                                     const Matrix& A, const Vector& y,
                                     int new_index,
                                     double beta_tolerance = 1e-12);

}  // namespace cs

#endif  // CS_LINALG_HPP
