#include <cmath>
#include <numbers>

#include <Eigen/QR>

#include "bhsi/rng.hpp"

namespace bhsi {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng Rng::for_trial(std::uint64_t seed, std::uint64_t trial, std::uint64_t stream) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ trial);
  h = splitmix64(h ^ (stream * 0xd1b54a32d192ed03ULL));
  return Rng(h);
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) {
    u1 = uniform();
  }
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

StateVector random_state(const SpaceDescription& space, Rng& rng) {
  Vector v(static_cast<Eigen::Index>(space.dimension()));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double re = rng.normal();
    const double im = rng.normal();
    v[i] = Complex(re, im);
  }
  return StateVector::normalized(space, std::move(v));
}

Matrix random_unitary(std::size_t n, Rng& rng) {
  const auto m = static_cast<Eigen::Index>(n);
  Matrix z(m, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index i = 0; i < m; ++i) {
      const double re = rng.normal();
      const double im = rng.normal();
      z(i, j) = Complex(re, im);
    }
  }
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < m; ++j) {
    const double a = std::abs(r(j, j));
    if (a > 0.0) {
      q.col(j) *= r(j, j) / a;
    }
  }
  return q;
}

Matrix random_hermitian(std::size_t n, Rng& rng) {
  const auto m = static_cast<Eigen::Index>(n);
  Matrix a(m, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index i = 0; i < m; ++i) {
      const double re = rng.normal();
      const double im = rng.normal();
      a(i, j) = Complex(re, im);
    }
  }
  return 0.5 * (a + a.adjoint());
}

}  // namespace bhsi
