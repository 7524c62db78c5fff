#pragma once

// Random ensembles used by the property sweeps: Hermitian matrices with i.i.d.
// standard complex normal entries (then Hermitized) and states uniform on the
// unit sphere of C^N.

#include <cmath>
#include <random>

#include "qacc/opsalg.hpp"

namespace qacc {

using Rng = std::mt19937_64;

/// Complex normal with E|z|^2 = 1.
inline Complex standard_complex_normal(Rng& rng) {
  std::normal_distribution<double> g(0.0, std::sqrt(0.5));
  const double re = g(rng);
  const double im = g(rng);
  return {re, im};
}

inline HermitianOperator random_hermitian(Eigen::Index n, Rng& rng) {
  ComplexMatrix m(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) m(i, j) = standard_complex_normal(rng);
  }
  return HermitianOperator((m + m.adjoint()) * 0.5);
}

inline StateVector random_state(Eigen::Index n, Rng& rng) {
  ComplexVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = standard_complex_normal(rng);
  return StateVector(std::move(v));
}

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace qacc
