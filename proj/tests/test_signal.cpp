#include <doctest.h>

#include <cmath>
#include <sstream>

#include "cs/signal.hpp"

using namespace cs;

TEST_CASE("generate_sensing_matrix columns are unit-norm") {
  SeededRng rng(123);
  Matrix A = generate_sensing_matrix(100, 500, rng);
  double worst = 0.0;
  for (int j = 0; j < A.cols(); ++j)
    worst = std::max(worst, std::abs(A.col(j).norm() - 1.0));
  CHECK(worst <= 1e-12);

  SeededRng rng2(1);
  Matrix square = generate_sensing_matrix(4, 4, rng2);
  for (int j = 0; j < 4; ++j)
    CHECK(square.col(j).norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("generate_sensing_matrix is deterministic per seed") {
  SeededRng a(777), b(777);
  Matrix A = generate_sensing_matrix(20, 40, a);
  Matrix B = generate_sensing_matrix(20, 40, b);
  CHECK(A == B);  // bit-identical
}

TEST_CASE("generate_sensing_matrix rejects M > N") {
  SeededRng rng(0);
  CHECK_THROWS_AS(generate_sensing_matrix(10, 5, rng), std::invalid_argument);
}

TEST_CASE("generate_sparse_signal") {
  SeededRng rng(55);

  SUBCASE("binary signals have energy exactly K") {
    SparseSignal x = generate_sparse_signal(100, 20, SignalKind::Binary, rng);
    CHECK(x.values.squaredNorm() == 20.0);
    CHECK(x.support.size() == 20);
  }

  SUBCASE("support indices are distinct and in range") {
    for (int trial = 0; trial < 50; ++trial) {
      SparseSignal x =
          generate_sparse_signal(50, 10, SignalKind::Gaussian, rng);
      CHECK(x.support.size() == 10);
      for (int i : x.support) {
        CHECK(i >= 0);
        CHECK(i < 50);
      }
      for (int j = 0; j < 10; ++j) CHECK(x.values[j] != 0.0);
    }
  }

  SUBCASE("gaussian energy is K in expectation") {
    double total = 0.0;
    const int draws = 10000;
    for (int i = 0; i < draws; ++i) {
      SparseSignal x =
          generate_sparse_signal(100, 20, SignalKind::Gaussian, rng);
      total += x.values.squaredNorm();
    }
    CHECK(total / draws == doctest::Approx(20.0).epsilon(0.05));
  }

  SUBCASE("K >= N rejected") {
    CHECK_THROWS_AS(generate_sparse_signal(10, 10, SignalKind::Binary, rng),
                    std::invalid_argument);
  }
}

TEST_CASE("noise_sigma_for_smnr") {
  CHECK(noise_sigma_for_smnr(20, 100, 20.0, SignalKind::Gaussian) ==
        doctest::Approx(std::sqrt(0.002)).epsilon(1e-12));
  CHECK(noise_sigma_for_smnr(20, 20, 0.0, SignalKind::Binary) ==
        doctest::Approx(1.0));
  // Clean limit: sigma -> 0 as SMNR grows.
  CHECK(noise_sigma_for_smnr(20, 100, 300.0, SignalKind::Gaussian) <= 1e-14);
}

TEST_CASE("apply_measurement") {
  SeededRng rng(2);

  SUBCASE("clean identity measurement reproduces the signal") {
    Matrix I5 = Matrix::Identity(5, 5);
    SparseSignal x;
    x.length = 5;
    x.support = SupportSet{1, 3};
    x.values = Vector(2);
    x.values << 2.0, -1.0;
    Vector y = apply_measurement(I5, x, NoiseSpec::clean(), rng);
    CHECK(y(1) == doctest::Approx(2.0));
    CHECK(y(3) == doctest::Approx(-1.0));
    CHECK(y(0) == 0.0);
  }

  SUBCASE("noise energy matches sigma^2 M in expectation") {
    const int M = 100;
    Matrix A = generate_sensing_matrix(M, 200, rng);
    SparseSignal x = generate_sparse_signal(200, 5, SignalKind::Binary, rng);
    Vector clean = apply_measurement(A, x, NoiseSpec::clean(), rng);
    double sigma = 0.0447214;
    double total = 0.0;
    const int draws = 10000;
    for (int i = 0; i < draws; ++i) {
      Vector noisy = apply_measurement(A, x, NoiseSpec::gaussian(sigma), rng);
      total += (noisy - clean).squaredNorm();
    }
    CHECK(total / draws == doctest::Approx(sigma * sigma * M).epsilon(0.05));
  }
}

TEST_CASE("derive_seed decorrelates trial coordinates") {
  std::uint64_t a = derive_seed(42, {1, 2, 3});
  std::uint64_t b = derive_seed(42, {1, 2, 4});
  std::uint64_t c = derive_seed(43, {1, 2, 3});
  CHECK(a != b);
  CHECK(a != c);
  CHECK(a == derive_seed(42, {1, 2, 3}));
}

TEST_CASE("matrix round-trips through the binary dump format") {
  SeededRng rng(31);
  Matrix A = generate_sensing_matrix(7, 13, rng);
  std::stringstream buffer;
  write_matrix(buffer, A);
  Matrix B = read_matrix(buffer);
  CHECK(A == B);  // bit-exact

  std::stringstream bad("not a matrix");
  CHECK_THROWS(read_matrix(bad));
}
