#include <doctest.h>

#include <cmath>

#include "cs/linalg.hpp"
#include "cs/signal.hpp"

using namespace cs;

namespace {

// Independent oracle: normal-equations solve (A_I^t A_I)^{-1} A_I^t y via a
// direct dense inverse. Deliberately a different route than the SVD path
// under test.
Vector normal_equations_solve(const Matrix& A, const Vector& y,
                              const SupportSet& I) {
  Matrix sub = columns(A, I);
  Matrix gram = sub.transpose() * sub;
  return gram.inverse() * (sub.transpose() * y);
}

Matrix random_matrix(int rows, int cols, SeededRng& rng) {
  Matrix A(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) A(i, j) = rng.normal();
  return A;
}

Vector random_vector(int n, SeededRng& rng) {
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.normal();
  return v;
}

}  // namespace

TEST_CASE("matched_filter basic cases") {
  Matrix I2 = Matrix::Identity(2, 2);
  Vector r(2);
  r << 3, -1;
  Vector out = matched_filter(I2, r);
  CHECK(out(0) == doctest::Approx(3));
  CHECK(out(1) == doctest::Approx(-1));

  Matrix A(3, 2);
  A << 1, 0, 0, 1, 1, 1;
  Vector ones = Vector::Ones(3);
  Vector mf = matched_filter(A, ones);
  CHECK(mf(0) == doctest::Approx(2));
  CHECK(mf(1) == doctest::Approx(2));

  CHECK(matched_filter(A, Vector::Zero(3)).isZero(0.0));
  CHECK_THROWS_AS(matched_filter(A, Vector::Zero(2)), std::invalid_argument);
}

TEST_CASE("top_amplitude_indices ordering, ties, exclusion") {
  Vector v(3);
  v << 0.1, -5, 3;
  SupportSet top = top_amplitude_indices(v, 2);
  REQUIRE(top.size() == 2);
  CHECK(top[0] == 1);
  CHECK(top[1] == 2);

  Vector ties = Vector::Ones(3);
  CHECK(top_amplitude_indices(ties, 1)[0] == 0);

  Vector w(3);
  w << 4, 9, 2;
  SupportSet masked = top_amplitude_indices(w, 2, SupportSet{1});
  CHECK(masked[0] == 0);
  CHECK(masked[1] == 2);

  SupportSet all{0, 1, 2};
  CHECK_THROWS_AS(top_amplitude_indices(w, 1, all), std::invalid_argument);
}

TEST_CASE("top_amplitude_indices clamps to available candidates") {
  Vector v(4);
  v << 1, 2, 3, 4;
  SupportSet out = top_amplitude_indices(v, 10, SupportSet{3});
  CHECK(out.size() == 3);
  CHECK(out[0] == 2);
}

TEST_CASE("top_amplitude_indices is permutation-stable") {
  SeededRng rng(11);
  Vector v = random_vector(12, rng);
  SupportSet excluded{2, 7};
  SupportSet base = top_amplitude_indices(v, 4, excluded);

  // Reverse permutation p(i) = n-1-i.
  int n = static_cast<int>(v.size());
  Vector pv(n);
  for (int i = 0; i < n; ++i) pv[n - 1 - i] = v[i];
  SupportSet p_excluded;
  for (int i : excluded) p_excluded.push_back(n - 1 - i);
  SupportSet permuted = top_amplitude_indices(pv, 4, p_excluded);
  REQUIRE(permuted.size() == base.size());
  for (int j = 0; j < base.size(); ++j)
    CHECK(permuted[j] == n - 1 - base[j]);
}

TEST_CASE("least_squares_on_support picks coordinates on identity") {
  Matrix I3 = Matrix::Identity(3, 3);
  Vector y(3);
  y << 1, 2, 3;
  LsSolution sol = least_squares_on_support(I3, y, SupportSet{0, 2});
  REQUIRE(sol.coeffs.size() == 2);
  CHECK(sol.coeffs(0) == doctest::Approx(1));
  CHECK(sol.coeffs(1) == doctest::Approx(3));
  CHECK_FALSE(sol.ill_conditioned);
}

TEST_CASE("least_squares_on_support recovers consistent systems") {
  SeededRng rng(42);
  Matrix A = random_matrix(8, 16, rng);
  SupportSet I{3, 9, 14};
  Vector c_star(3);
  c_star << 1.5, -2.0, 0.75;
  Vector y = columns(A, I) * c_star;
  LsSolution sol = least_squares_on_support(A, y, I);
  CHECK((sol.coeffs - c_star).norm() <= 1e-10 * c_star.norm());
}

TEST_CASE("least_squares_on_support matches normal-equations oracle") {
  SeededRng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    Matrix A = random_matrix(8, 16, rng);
    Vector y = random_vector(8, rng);
    SupportSet I{1, 6, 12};
    Vector expected = normal_equations_solve(A, y, I);
    LsSolution sol = least_squares_on_support(A, y, I);
    CHECK((sol.coeffs - expected).norm() <= 1e-8 * (1.0 + expected.norm()));
  }
}

TEST_CASE("least_squares_on_support flags rank deficiency, returns min-norm") {
  Matrix A(4, 3);
  A.setZero();
  A.col(0) << 1, 0, 0, 0;
  A.col(1) = A.col(0);  // duplicated column
  A.col(2) << 0, 1, 0, 0;
  Vector y(4);
  y << 2, 3, 0, 0;
  LsSolution sol = least_squares_on_support(A, y, SupportSet{0, 1, 2});
  CHECK(sol.ill_conditioned);
  // Minimum-norm solution splits the duplicated column's weight equally.
  CHECK(sol.coeffs(0) == doctest::Approx(1.0));
  CHECK(sol.coeffs(1) == doctest::Approx(1.0));
  CHECK(sol.coeffs(2) == doctest::Approx(3.0));
}

TEST_CASE("residual_on_support") {
  SeededRng rng(5);
  Matrix A = random_matrix(10, 20, rng);
  Vector y = random_vector(10, rng);

  SUBCASE("empty support returns (y, ||y||)") {
    Residual res = residual_on_support(A, y, {});
    CHECK(res.r.isApprox(y));
    CHECK(res.norm == doctest::Approx(y.norm()));
  }

  SUBCASE("exact fit gives near-zero norm") {
    SupportSet I{2, 5};
    Vector c(2);
    c << 1.0, -0.5;
    Vector y_fit = columns(A, I) * c;
    Residual res = residual_on_support(A, y_fit, I);
    CHECK(res.norm <= 1e-10 * y_fit.norm());
  }

  SUBCASE("residual is orthogonal to the fitted columns") {
    SupportSet I{0, 7, 13};
    Residual res = residual_on_support(A, y, I);
    Vector corr = columns(A, I).transpose() * res.r;
    CHECK(corr.lpNorm<Eigen::Infinity>() <= 1e-8 * y.norm());
  }
}

TEST_CASE("residual norm is non-increasing in support growth") {
  SeededRng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix A = random_matrix(12, 24, rng);
    Vector y = random_vector(12, rng);
    SupportSet I{1, 5};
    SupportSet I_bigger{1, 5, 9, 15};
    double small = residual_on_support(A, y, I).norm;
    double big = residual_on_support(A, y, I_bigger).norm;
    CHECK(big <= small + 1e-10 * y.norm());
  }
}

TEST_CASE("gram_inverse_init") {
  SeededRng rng(3);

  SUBCASE("unit column gives [1]") {
    Matrix A = random_matrix(6, 4, rng);
    A.col(2).normalize();
    Vector y = random_vector(6, rng);
    GramInverseState state = gram_inverse_init(A, y, SupportSet{2});
    REQUIRE(state.gram_inverse.rows() == 1);
    CHECK(state.gram_inverse(0, 0) == doctest::Approx(1.0));
    CHECK(state.projected_observation(0) == doctest::Approx(A.col(2).dot(y)));
  }

  SUBCASE("orthonormal columns give identity") {
    Matrix A = Matrix::Identity(5, 5);
    Vector y = random_vector(5, rng);
    GramInverseState state = gram_inverse_init(A, y, SupportSet{0, 3, 4});
    CHECK((state.gram_inverse - Matrix::Identity(3, 3)).norm() <= 1e-10);
  }

  SUBCASE("matches direct inverse oracle") {
    Matrix A = random_matrix(10, 8, rng);
    Vector y = random_vector(10, rng);
    SupportSet I{0, 2, 5, 7};
    GramInverseState state = gram_inverse_init(A, y, I);
    Matrix sub = columns(A, I);
    Matrix expected = (sub.transpose() * sub).inverse();
    CHECK((state.gram_inverse - expected).norm() <= 1e-8 * expected.norm());
  }

  SUBCASE("singular Gram matrix raises with the support attached") {
    Matrix A(4, 2);
    A.col(0) << 1, 1, 0, 0;
    A.col(1) = A.col(0);
    Vector y = Vector::Ones(4);
    try {
      gram_inverse_init(A, y, SupportSet{0, 1});
      FAIL("expected NearSingularError");
    } catch (const NearSingularError& e) {
      CHECK(e.support().size() == 2);
    }
  }
}

TEST_CASE("gram_inverse_extend") {
  SeededRng rng(9);

  SUBCASE("orthonormal extension is block-diagonal") {
    Matrix A = Matrix::Identity(6, 6);
    Vector y = random_vector(6, rng);
    GramInverseState state = gram_inverse_init(A, y, SupportSet{1});
    GramInverseState grown = gram_inverse_extend(state, A, y, 4);
    CHECK((grown.gram_inverse - Matrix::Identity(2, 2)).norm() <= 1e-12);
  }

  SUBCASE("duplicated column trips the beta guard") {
    Matrix A(5, 3);
    for (int i = 0; i < 5; ++i) A(i, 0) = rng.normal();
    A.col(0).normalize();
    A.col(1) = A.col(0);
    A.col(2) = random_vector(5, rng).normalized();
    Vector y = random_vector(5, rng);
    GramInverseState state = gram_inverse_init(A, y, SupportSet{0});
    CHECK_THROWS_AS(gram_inverse_extend(state, A, y, 1), NearSingularError);
  }

  SUBCASE("extension chain matches the direct inverse oracle") {
    for (int trial = 0; trial < 30; ++trial) {
      Matrix A = random_matrix(20, 12, rng);
      for (int j = 0; j < A.cols(); ++j) A.col(j).normalize();
      Vector y = random_vector(20, rng);
      SupportSet chain{0};
      GramInverseState state = gram_inverse_init(A, y, chain);
      for (int next : {2, 4, 6, 8, 10}) {
        state = gram_inverse_extend(state, A, y, next);
        chain.push_back(next);
      }
      Matrix sub = columns(A, chain);
      Matrix expected = (sub.transpose() * sub).inverse();
      CHECK((state.gram_inverse - expected).norm() <= 1e-8 * expected.norm());
      // Chain state agrees with a fresh direct init on the full support.
      GramInverseState direct = gram_inverse_init(A, y, chain);
      CHECK((state.gram_inverse - direct.gram_inverse).norm() <=
            1e-8 * direct.gram_inverse.norm());
      // And its coefficients match the SVD solve path.
      LsSolution sol = least_squares_on_support(A, y, chain);
      CHECK((state.coeffs() - sol.coeffs).norm() <=
            1e-8 * (1.0 + sol.coeffs.norm()));
    }
  }

  SUBCASE("gram_inverse stays symmetric and inverts the Gram matrix") {
    Matrix A = random_matrix(15, 10, rng);
    for (int j = 0; j < A.cols(); ++j) A.col(j).normalize();
    Vector y = random_vector(15, rng);
    GramInverseState state = gram_inverse_init(A, y, SupportSet{0});
    for (int next : {1, 3, 5, 7}) state = gram_inverse_extend(state, A, y, next);
    CHECK((state.gram_inverse - state.gram_inverse.transpose()).norm() <=
          1e-10 * state.gram_inverse.norm());
    Matrix sub = columns(A, state.support);
    Matrix product = state.gram_inverse * (sub.transpose() * sub);
    CHECK((product - Matrix::Identity(5, 5)).norm() <= 1e-8);
  }
}

TEST_CASE("SupportSet rejects duplicates and preserves order") {
  SupportSet s;
  s.push_back(5);
  s.push_back(1);
  CHECK(s[0] == 5);
  CHECK(s[1] == 1);
  CHECK_THROWS_AS(s.push_back(5), std::invalid_argument);
  CHECK(s.same_elements(SupportSet{1, 5}));
  CHECK(s.intersection_size(SupportSet{1, 2, 3}) == 1);
}
