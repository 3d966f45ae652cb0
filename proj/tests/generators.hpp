#pragma once

// Hand-rolled generators for property tests.

#include <cstdint>
#include <random>

#include "betagap/linalg.hpp"

namespace betagap::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : eng_(seed) {}

  double normal() { return norm_(eng_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
  std::size_t index(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(eng_);
  }
  std::mt19937_64& engine() { return eng_; }

  /// Unit-variance Gaussian entries in every real component (not an ensemble sampler).
  HermitianMatrix hermitian(int beta, std::size_t n) {
    HermitianMatrix m(beta, n);
    for (std::size_t i = 0; i < n; ++i) {
      m.set(i, i, normal());
      for (std::size_t j = i + 1; j < n; ++j) {
        Quaternion q{normal()};
        if (beta >= 2) q.b = normal();
        if (beta == 4) {
          q.c = normal();
          q.d = normal();
        }
        m.set(i, j, q);
      }
    }
    return m;
  }

  /// Haar-ish orthogonal matrix from the QR of a Gaussian matrix.
  RealMatrix orthogonal(std::size_t n) {
    RealMatrix g(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) g(i, j) = normal();
    Eigen::HouseholderQR<RealMatrix> qr(g);
    return qr.householderQ();
  }

  ComplexMatrix unitary(std::size_t n) {
    ComplexMatrix g(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) g(i, j) = {normal(), normal()};
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    return qr.householderQ();
  }

 private:
  std::mt19937_64 eng_;
  std::normal_distribution<double> norm_;
};

}  // namespace betagap::testing
