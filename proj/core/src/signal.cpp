#include "cs/signal.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace cs {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

double SeededRng::uniform() {
  // 53-bit mantissa, shifted into (0, 1].
  return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1p-53;
}

double SeededRng::normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  double u1 = uniform();
  double u2 = uniform();
  double radius = std::sqrt(-2.0 * std::log(u1));
  double angle = 2.0 * std::numbers::pi * u2;
  cached_ = radius * std::sin(angle);
  has_cached_ = true;
  return radius * std::cos(angle);
}

std::uint64_t SeededRng::uniform_below(std::uint64_t bound) {
  // Rejection sampling keeps the draw unbiased for any bound.
  std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t v;
  do {
    v = next_u64();
  } while (v >= limit);
  return v % bound;
}

std::uint64_t derive_seed(std::uint64_t master,
                          std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = splitmix64(master);
  for (std::uint64_t p : parts) h = splitmix64(h ^ p);
  return h;
}

Vector SparseSignal::to_dense() const {
  Vector x = Vector::Zero(length);
  for (int j = 0; j < support.size(); ++j) x[support[j]] = values[j];
  return x;
}

Matrix generate_sensing_matrix(int rows, int cols, SeededRng& rng) {
  if (rows < 1 || cols < 1 || rows > cols)
    throw std::invalid_argument(
        "generate_sensing_matrix: require 1 <= M <= N");
  Matrix A(rows, cols);
  double scale = 1.0 / std::sqrt(static_cast<double>(rows));
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) A(i, j) = scale * rng.normal();
  for (int j = 0; j < cols; ++j) A.col(j).normalize();
  return A;
}

SparseSignal generate_sparse_signal(int length, int sparsity, SignalKind kind,
                                    SeededRng& rng) {
  if (sparsity < 1 || sparsity >= length)
    throw std::invalid_argument("generate_sparse_signal: require 1 <= K < N");

  // Partial Fisher-Yates over [0, N); the first K slots become the support.
  std::vector<int> pool(length);
  for (int i = 0; i < length; ++i) pool[i] = i;
  SparseSignal x;
  x.length = length;
  for (int k = 0; k < sparsity; ++k) {
    int pick = k + static_cast<int>(rng.uniform_below(length - k));
    std::swap(pool[k], pool[pick]);
    x.support.push_back(pool[k]);
  }

  x.values.resize(sparsity);
  for (int k = 0; k < sparsity; ++k) {
    if (kind == SignalKind::Binary) {
      x.values[k] = 1.0;
    } else {
      double v;
      do {
        v = rng.normal();
      } while (v == 0.0);
      x.values[k] = v;
    }
  }
  return x;
}

double noise_sigma_for_smnr(int sparsity, int rows, double smnr_db,
                            SignalKind /*kind*/) {
  if (rows < 1) throw std::invalid_argument("noise_sigma_for_smnr: M >= 1");
  // E||x||^2 = K for both signal kinds (exact for binary, expectation for
  // Gaussian); SMNR = E||x||^2 / (sigma^2 M).
  double smnr = std::pow(10.0, smnr_db / 10.0);
  return std::sqrt(static_cast<double>(sparsity) / (rows * smnr));
}

Vector apply_measurement(const Matrix& A, const SparseSignal& x,
                         const NoiseSpec& noise, SeededRng& rng) {
  if (x.length != A.cols())
    throw std::invalid_argument("apply_measurement: dimension mismatch");
  Vector y = columns(A, x.support) * x.values;
  if (noise.kind == NoiseSpec::Kind::Gaussian && noise.sigma > 0.0)
    for (int i = 0; i < y.size(); ++i) y[i] += noise.sigma * rng.normal();
  return y;
}

namespace {

constexpr char kMagic[8] = {'C', 'S', 'M', 'A', 'T', 'R', 'I', 'X'};

void put_u64(std::ostream& out, std::uint64_t v) {
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(buf, 8);
}

std::uint64_t get_u64(std::istream& in) {
  unsigned char buf[8];
  in.read(reinterpret_cast<char*>(buf), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t{buf[i]} << (8 * i);
  return v;
}

void put_f64(std::ostream& out, double d) {
  std::uint64_t bits;
  std::memcpy(&bits, &d, 8);
  put_u64(out, bits);
}

double get_f64(std::istream& in) {
  std::uint64_t bits = get_u64(in);
  double d;
  std::memcpy(&d, &bits, 8);
  return d;
}

}  // namespace

void write_matrix(std::ostream& out, const Matrix& A) {
  out.write(kMagic, 8);
  put_u64(out, static_cast<std::uint64_t>(A.rows()));
  put_u64(out, static_cast<std::uint64_t>(A.cols()));
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j) put_f64(out, A(i, j));
  if (!out) throw std::runtime_error("write_matrix: stream failure");
}

Matrix read_matrix(std::istream& in) {
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kMagic, 8) != 0)
    throw std::runtime_error("read_matrix: bad magic");
  auto rows = static_cast<Eigen::Index>(get_u64(in));
  auto cols = static_cast<Eigen::Index>(get_u64(in));
  Matrix A(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) A(i, j) = get_f64(in);
  if (!in) throw std::runtime_error("read_matrix: truncated stream");
  return A;
}

void write_matrix_file(const std::string& path, const Matrix& A) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_matrix_file: cannot open " + path);
  write_matrix(out, A);
}

Matrix read_matrix_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_matrix_file: cannot open " + path);
  return read_matrix(in);
}

}  // namespace cs
