#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "bhsi/hilbert.hpp"

namespace bhsi::test {

// Test-side randomness, deliberately not the library generator.
inline std::vector<Complex> random_amplitudes(std::size_t n, std::mt19937_64& gen) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<Complex> v(n);
  double norm2 = 0.0;
  for (auto& a : v) {
    a = Complex(g(gen), g(gen));
    norm2 += std::norm(a);
  }
  for (auto& a : v) {
    a /= std::sqrt(norm2);
  }
  return v;
}

inline Vector to_vector(const std::vector<Complex>& v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[static_cast<Eigen::Index>(i)] = v[i];
  }
  return out;
}

inline StateVector random_on(const SpaceDescription& space, std::mt19937_64& gen) {
  return StateVector(space, to_vector(random_amplitudes(space.dimension(), gen)));
}

// Naive O(n^3) product, row by row.
inline std::vector<std::vector<Complex>> naive_product(const std::vector<std::vector<Complex>>& a,
                                                       const std::vector<std::vector<Complex>>& b) {
  const std::size_t n = a.size();
  const std::size_t k = b.size();
  const std::size_t m = b.front().size();
  std::vector<std::vector<Complex>> c(n, std::vector<Complex>(m));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      Complex acc = 0.0;
      for (std::size_t l = 0; l < k; ++l) {
        acc += a[i][l] * b[l][j];
      }
      c[i][j] = acc;
    }
  }
  return c;
}

inline std::vector<std::vector<Complex>> rows_of(const Matrix& m) {
  std::vector<std::vector<Complex>> out(static_cast<std::size_t>(m.rows()),
                                        std::vector<Complex>(static_cast<std::size_t>(m.cols())));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m(i, j);
    }
  }
  return out;
}

// max |U†U − I| with the adjoint and product spelled out elementwise.
inline double naive_unitarity_defect(const Matrix& u) {
  const auto n = static_cast<std::size_t>(u.rows());
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Complex acc = 0.0;
      for (std::size_t l = 0; l < n; ++l) {
        acc += std::conj(u(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(i))) *
               u(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(j));
      }
      worst = std::max(worst, std::abs(acc - (i == j ? 1.0 : 0.0)));
    }
  }
  return worst;
}

inline double max_diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace bhsi::test
