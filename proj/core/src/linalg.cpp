#include "cs/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cs {

SupportSet::SupportSet(std::initializer_list<int> indices) {
  for (int i : indices) push_back(i);
}

void SupportSet::push_back(int index) {
  if (contains(index))
    throw std::invalid_argument("SupportSet: duplicate index " +
                                std::to_string(index));
  indices_.push_back(index);
}

bool SupportSet::contains(int index) const {
  return std::find(indices_.begin(), indices_.end(), index) != indices_.end();
}

bool SupportSet::same_elements(const SupportSet& other) const {
  if (size() != other.size()) return false;
  std::vector<int> a = indices_, b = other.indices_;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

int SupportSet::intersection_size(const SupportSet& other) const {
  int n = 0;
  for (int i : indices_)
    if (other.contains(i)) ++n;
  return n;
}

Matrix columns(const Matrix& A, const SupportSet& I) {
  Matrix sub(A.rows(), I.size());
  for (int j = 0; j < I.size(); ++j) {
    if (I[j] < 0 || I[j] >= A.cols())
      throw std::invalid_argument("columns: index out of range");
    sub.col(j) = A.col(I[j]);
  }
  return sub;
}

Vector matched_filter(const Matrix& A, const Vector& r) {
  if (r.size() != A.rows())
    throw std::invalid_argument("matched_filter: dimension mismatch");
  return A.transpose() * r;
}

SupportSet top_amplitude_indices(const Vector& v, int count,
                                 const SupportSet& excluded) {
  if (count < 1)
    throw std::invalid_argument("top_amplitude_indices: count must be >= 1");
  std::vector<int> candidates;
  candidates.reserve(v.size());
  for (int i = 0; i < v.size(); ++i)
    if (!excluded.contains(i)) candidates.push_back(i);
  if (candidates.empty())
    throw std::invalid_argument("top_amplitude_indices: all indices excluded");

  // Decreasing |v_i|; stable so ties keep the lower index first.
  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](int a, int b) { return std::abs(v[a]) > std::abs(v[b]); });

  SupportSet out;
  int take = std::min<int>(count, static_cast<int>(candidates.size()));
  for (int i = 0; i < take; ++i) out.push_back(candidates[i]);
  return out;
}

LsSolution least_squares_on_support(const Matrix& A, const Vector& y,
                                    const SupportSet& I) {
  if (y.size() != A.rows())
    throw std::invalid_argument("least_squares_on_support: dimension mismatch");
  if (I.empty()) return {Vector(0), false};

  Matrix sub = columns(A, I);
  Eigen::JacobiSVD<Matrix> svd(sub, Eigen::ComputeThinU | Eigen::ComputeThinV);
  LsSolution sol;
  sol.coeffs = svd.solve(y);  // minimum-norm LS solution
  const auto& sv = svd.singularValues();
  double smax = sv(0);
  double smin = sv(sv.size() - 1);
  sol.ill_conditioned = (smin <= 0.0) || (smax / smin > kConditionWarnThreshold);
  return sol;
}

Residual residual_on_support(const Matrix& A, const Vector& y,
                             const SupportSet& I) {
  if (y.size() != A.rows())
    throw std::invalid_argument("residual_on_support: dimension mismatch");
  Residual res;
  if (I.empty()) {
    res.r = y;
    res.norm = y.norm();
    res.coeffs = Vector(0);
    return res;
  }
  LsSolution sol = least_squares_on_support(A, y, I);
  res.r = y - columns(A, I) * sol.coeffs;
  res.norm = res.r.norm();
  res.coeffs = std::move(sol.coeffs);
  res.ill_conditioned = sol.ill_conditioned;
  return res;
}

GramInverseState gram_inverse_init(const Matrix& A, const Vector& y,
                                   const SupportSet& I) {
  Matrix sub = columns(A, I);
  Matrix gram = sub.transpose() * sub;
  Eigen::FullPivLU<Matrix> lu(gram);
  if (!lu.isInvertible())
    throw NearSingularError("gram_inverse_init: singular Gram matrix", I);
  GramInverseState state;
  state.support = I;
  state.gram_inverse = lu.inverse();
  // Symmetrize: the exact inverse is symmetric but LU output need not be.
  state.gram_inverse = 0.5 * (state.gram_inverse +
                              state.gram_inverse.transpose().eval());
  state.projected_observation = sub.transpose() * y;
  return state;
}

GramInverseState gram_inverse_extend(const GramInverseState& state,
                                     const Matrix& A, const Vector& y,
                                     int new_index, double beta_tolerance) {
  if (state.support.contains(new_index))
    throw std::invalid_argument("gram_inverse_extend: index already in support");
  const int k = state.support.size();
  Vector a = A.col(new_index);
  // The paper writes the lower-right Gram entry as 1 (unit-norm atoms); using
  // a^t a keeps the update valid for arbitrary column norms.
  double diag = a.squaredNorm();

  SupportSet grown = state.support;
  grown.push_back(new_index);

  Vector q(k);
  for (int j = 0; j < k; ++j) q(j) = A.col(state.support[j]).dot(a);

  Vector u = state.gram_inverse * q;  // P^{-1} q
  double beta = diag - q.dot(u);
  if (beta <= beta_tolerance)
    throw NearSingularError("gram_inverse_extend: beta below tolerance", grown);

  GramInverseState next;
  next.support = std::move(grown);
  next.gram_inverse.resize(k + 1, k + 1);
  next.gram_inverse.topLeftCorner(k, k) =
      state.gram_inverse + (u * u.transpose()) / beta;
  next.gram_inverse.topRightCorner(k, 1) = -u / beta;
  next.gram_inverse.bottomLeftCorner(1, k) = -u.transpose() / beta;
  next.gram_inverse(k, k) = 1.0 / beta;

  next.projected_observation.resize(k + 1);
  next.projected_observation.head(k) = state.projected_observation;
  next.projected_observation(k) = a.dot(y);
  return next;
}

}  // namespace cs
