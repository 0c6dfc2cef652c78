#pragma once

#include <cstdint>
#include <random>

#include "cartan/linalg.hpp"

namespace cartan {

using Rng = std::mt19937_64;

inline cplx complex_gaussian(Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  const double re = g(rng);
  const double im = g(rng);
  return {re, im};
}

inline CVec complex_gaussian_vector(Rng& rng, Eigen::Index n) {
  CVec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = complex_gaussian(rng);
  return v;
}

inline CMat complex_gaussian_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  CMat m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = complex_gaussian(rng);
  return m;
}

inline double uniform01(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

/// Haar-ish random unitary via QR of a Gaussian matrix with phase fix.
inline CMat random_unitary(Rng& rng, Eigen::Index n) {
  const CMat g = complex_gaussian_matrix(rng, n, n);
  Eigen::HouseholderQR<CMat> qr(g);
  CMat q = qr.householderQ();
  const CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) {
    const double a = std::abs(r(j, j));
    if (a > 0) q.col(j) *= r(j, j) / a;
  }
  return q;
}

}  // namespace cartan
