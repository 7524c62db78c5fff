#pragma once

// Dense Hermitian operator algebra and pure-state statistics.

#include <cmath>
#include <complex>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "qacc/errors.hpp"

namespace qacc {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

namespace tol {
/// Absolute entrywise tolerance of the Hermiticity check.
inline constexpr double hermiticity = 1e-12;
/// Allowed |sum |c_i|^2 - 1| of a stored state.
inline constexpr double normalization = 1e-12;
/// Largest imaginary (or real) residue discarded by the expectation routines.
inline constexpr double residue = 1e-10;
/// Raw variances at or below this are reported as numerically zero.
inline constexpr double variance_clamp = 1e-12;
}  // namespace tol

/// N x N complex matrix equal to its conjugate transpose.
///
/// Inputs within tol::hermiticity of Hermitian are accepted and symmetrized,
/// so every stored operator is exactly Hermitian.
class HermitianOperator {
 public:
  HermitianOperator() = default;

  explicit HermitianOperator(ComplexMatrix entries) : m_(std::move(entries)) {
    if (m_.rows() != m_.cols()) {
      throw DimensionError("operator must be square, got " + std::to_string(m_.rows()) + "x" +
                           std::to_string(m_.cols()));
    }
    if (m_.rows() == 0) {
      throw DimensionError("operator must have positive dimension");
    }
    const double defect = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
    if (!(defect <= tol::hermiticity)) {
      throw HermiticityError("operator is not Hermitian (max |A - A^dagger| = " +
                             std::to_string(defect) + ")");
    }
    m_ = ((m_ + m_.adjoint()) * 0.5).eval();
  }

  static HermitianOperator zero(Eigen::Index n) {
    return HermitianOperator(ComplexMatrix::Zero(n, n));
  }
  static HermitianOperator identity(Eigen::Index n) {
    return HermitianOperator(ComplexMatrix::Identity(n, n));
  }

  Eigen::Index dim() const { return m_.rows(); }
  const ComplexMatrix& matrix() const { return m_; }
  Complex operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

  HermitianOperator& operator+=(const HermitianOperator& o) {
    require_same_dim(o);
    m_ += o.m_;
    return *this;
  }
  HermitianOperator& operator-=(const HermitianOperator& o) {
    require_same_dim(o);
    m_ -= o.m_;
    return *this;
  }
  HermitianOperator& operator*=(double s) {
    m_ *= s;
    return *this;
  }

  friend HermitianOperator operator+(HermitianOperator a, const HermitianOperator& b) {
    return a += b;
  }
  friend HermitianOperator operator-(HermitianOperator a, const HermitianOperator& b) {
    return a -= b;
  }
  friend HermitianOperator operator*(HermitianOperator a, double s) { return a *= s; }
  friend HermitianOperator operator*(double s, HermitianOperator a) { return a *= s; }

  /// (AB + BA) / 2, the Hermitian part of the product.
  friend HermitianOperator symmetrized_product(const HermitianOperator& a,
                                               const HermitianOperator& b) {
    a.require_same_dim(b);
    return HermitianOperator((a.m_ * b.m_ + b.m_ * a.m_) * 0.5);
  }

 private:
  void require_same_dim(const HermitianOperator& o) const {
    if (o.dim() != dim()) {
      throw DimensionError("operator dimensions differ: " + std::to_string(dim()) + " vs " +
                           std::to_string(o.dim()));
    }
  }

  ComplexMatrix m_;
};

/// Normalized pure state |psi> of dimension N >= 2.
class StateVector {
 public:
  StateVector() = default;

  /// Takes any nonzero amplitude vector and normalizes it.
  explicit StateVector(ComplexVector amplitudes) : c_(std::move(amplitudes)) {
    if (c_.size() < 2) {
      throw DimensionError("state dimension must be >= 2, got " + std::to_string(c_.size()));
    }
    const double n = c_.norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
      throw NormError("state vector has zero or non-finite norm");
    }
    c_ /= n;
  }

  static StateVector basis(Eigen::Index n, Eigen::Index k) {
    ComplexVector v = ComplexVector::Zero(n);
    v(k) = 1.0;
    return StateVector(std::move(v));
  }

  Eigen::Index dim() const { return c_.size(); }
  const ComplexVector& amplitudes() const { return c_; }
  Complex operator[](Eigen::Index i) const { return c_(i); }

  /// Deviation of sum |c_i|^2 from one.
  double norm_defect() const { return std::abs(c_.squaredNorm() - 1.0); }

 private:
  ComplexVector c_;
};

/// |<a|b>|, insensitive to global phase.
inline double overlap(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim()) throw DimensionError("overlap: state dimensions differ");
  return std::abs(a.amplitudes().dot(b.amplitudes()));
}

/// 1 - |<a|b>|.
inline double fidelity_error(const StateVector& a, const StateVector& b) {
  return 1.0 - overlap(a, b);
}

namespace detail {

inline void require_dims(const HermitianOperator& op, const StateVector& psi) {
  if (op.dim() != psi.dim()) {
    throw DimensionError("operator is " + std::to_string(op.dim()) + "x" +
                         std::to_string(op.dim()) + " but state has dimension " +
                         std::to_string(psi.dim()));
  }
}

inline void require_dims(const HermitianOperator& a, const HermitianOperator& b,
                         const StateVector& psi) {
  require_dims(a, psi);
  require_dims(b, psi);
}

/// <psi|A B|psi> without forming AB.
inline Complex sandwich(const HermitianOperator& a, const HermitianOperator& b,
                        const StateVector& psi) {
  const ComplexVector& c = psi.amplitudes();
  const ComplexVector bc = b.matrix() * c;
  return c.dot(a.matrix() * bc);
}

inline double real_part_checked(Complex z, const char* what) {
  if (!(std::abs(z.imag()) < tol::residue)) {
    throw HermiticityError(std::string(what) + ": imaginary residue " +
                           std::to_string(z.imag()) + " exceeds tolerance");
  }
  return z.real();
}

}  // namespace detail

/// <psi|A|psi>.
inline double expectation(const HermitianOperator& op, const StateVector& psi) {
  detail::require_dims(op, psi);
  const ComplexVector& c = psi.amplitudes();
  return detail::real_part_checked(c.dot(op.matrix() * c), "expectation");
}

/// <A^2> - <A>^2 together with the raw, unclamped value.
struct VarianceResult {
  double value = 0.0;          ///< clamped to >= 0
  double raw = 0.0;            ///< before clamping
  bool clamped = false;        ///< raw was negative
  bool numerically_zero = false;  ///< raw <= tol::variance_clamp
};

inline VarianceResult variance_detail(const HermitianOperator& op, const StateVector& psi) {
  detail::require_dims(op, psi);
  const double mean = expectation(op, psi);
  const double second = detail::real_part_checked(detail::sandwich(op, op, psi), "variance");
  VarianceResult r;
  r.raw = second - mean * mean;
  r.clamped = r.raw < 0.0;
  r.value = r.clamped ? 0.0 : r.raw;
  r.numerically_zero = r.raw <= tol::variance_clamp;
  return r;
}

inline double variance(const HermitianOperator& op, const StateVector& psi) {
  return variance_detail(op, psi).value;
}

/// <(AB + BA)/2> - <A><B>. Symmetric in (a, b) bit for bit.
inline double covariance(const HermitianOperator& a, const HermitianOperator& b,
                         const StateVector& psi) {
  detail::require_dims(a, b, psi);
  const Complex ab = detail::sandwich(a, b, psi);
  const Complex ba = detail::sandwich(b, a, psi);
  const double sym = detail::real_part_checked((ab + ba) * 0.5, "covariance");
  return sym - expectation(a, psi) * expectation(b, psi);
}

/// <[A, B]>, which is purely imaginary for Hermitian A and B.
inline Complex commutator_expectation(const HermitianOperator& a, const HermitianOperator& b,
                                      const StateVector& psi) {
  detail::require_dims(a, b, psi);
  const Complex z = detail::sandwich(a, b, psi) - detail::sandwich(b, a, psi);
  if (!(std::abs(z.real()) < tol::residue)) {
    throw AntiHermiticityError("commutator expectation has real residue " +
                               std::to_string(z.real()));
  }
  return {0.0, z.imag()};
}

/// <{A, B}>.
inline double anticommutator_expectation(const HermitianOperator& a, const HermitianOperator& b,
                                         const StateVector& psi) {
  detail::require_dims(a, b, psi);
  const Complex z = detail::sandwich(a, b, psi) + detail::sandwich(b, a, psi);
  return detail::real_part_checked(z, "anticommutator expectation");
}

/// (A - <A>)|psi>.
inline ComplexVector deviation_vector(const HermitianOperator& op, const StateVector& psi) {
  detail::require_dims(op, psi);
  const ComplexVector& c = psi.amplitudes();
  return op.matrix() * c - expectation(op, psi) * c;
}

/// Statistics against one fixed state.
class ExpectationContext {
 public:
  explicit ExpectationContext(StateVector psi) : psi_(std::move(psi)) {}

  const StateVector& state() const { return psi_; }
  double mean(const HermitianOperator& a) const { return expectation(a, psi_); }
  double var(const HermitianOperator& a) const { return variance(a, psi_); }
  double cov(const HermitianOperator& a, const HermitianOperator& b) const {
    return covariance(a, b, psi_);
  }
  Complex commutator(const HermitianOperator& a, const HermitianOperator& b) const {
    return commutator_expectation(a, b, psi_);
  }
  double anticommutator(const HermitianOperator& a, const HermitianOperator& b) const {
    return anticommutator_expectation(a, b, psi_);
  }

 private:
  StateVector psi_;
};

// Pauli matrices.

inline HermitianOperator pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return HermitianOperator(std::move(m));
}

inline HermitianOperator pauli_y() {
  ComplexMatrix m(2, 2);
  m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
  return HermitianOperator(std::move(m));
}

inline HermitianOperator pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return HermitianOperator(std::move(m));
}

}  // namespace qacc
