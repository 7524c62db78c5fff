#pragma once

// Cauchy-Schwarz, Robertson and Robertson-Schrodinger checkers. Each returns
// the two sides of the inequality and the slack lhs - rhs.

#include <algorithm>
#include <cmath>

#include "qacc/opsalg.hpp"

namespace qacc {

namespace tol {
/// Slack below -inequality_abs counts as a violation.
inline constexpr double inequality_abs = 1e-10;
/// |slack| <= saturation_rel * max(|lhs|, |rhs|, 1) counts as equality.
inline constexpr double saturation_rel = 1e-8;
}  // namespace tol

struct InequalityReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  bool satisfied = false;
  bool saturated = false;
};

inline InequalityReport make_report(double lhs, double rhs,
                                    double saturation_rel = tol::saturation_rel) {
  InequalityReport r;
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = lhs - rhs;
  r.satisfied = r.slack >= -tol::inequality_abs;
  const double scale = std::max({std::abs(lhs), std::abs(rhs), 1.0});
  r.saturated = r.satisfied && std::abs(r.slack) <= saturation_rel * scale;
  return r;
}

/// Var(A) Var(B) >= |<[A,B]>|^2 / 4.
inline InequalityReport robertson(const HermitianOperator& a, const HermitianOperator& b,
                                  const StateVector& psi) {
  const double lhs = variance(a, psi) * variance(b, psi);
  const double comm = std::abs(commutator_expectation(a, b, psi));
  return make_report(lhs, 0.25 * comm * comm);
}

/// Var(A) Var(B) >= cov(A,B)^2 + |<[A,B]>|^2 / 4.
inline InequalityReport robertson_schrodinger(const HermitianOperator& a,
                                              const HermitianOperator& b,
                                              const StateVector& psi) {
  const double lhs = variance(a, psi) * variance(b, psi);
  const double cov = covariance(a, b, psi);
  const double comm = std::abs(commutator_expectation(a, b, psi));
  return make_report(lhs, cov * cov + 0.25 * comm * comm);
}

/// <f|f><g|g> >= |<f|g>|^2 for f = (A - <A>)psi, g = (B - <B>)psi.
inline InequalityReport schwarz(const HermitianOperator& a, const HermitianOperator& b,
                                const StateVector& psi) {
  const double lhs = variance(a, psi) * variance(b, psi);
  const ComplexVector f = deviation_vector(a, psi);
  const ComplexVector g = deviation_vector(b, psi);
  return make_report(lhs, std::norm(f.dot(g)));
}

/// |<(dA)(dB)>|^2 >= <{dA, dB}>^2 / 4 with dX = X - <X>.
inline InequalityReport deviation_product(const HermitianOperator& a, const HermitianOperator& b,
                                          const StateVector& psi) {
  const ComplexVector f = deviation_vector(a, psi);
  const ComplexVector g = deviation_vector(b, psi);
  const Complex fg = f.dot(g);
  // <{dA, dB}> = 2 Re <f|g>
  const double anti = 2.0 * fg.real();
  return make_report(std::norm(fg), 0.25 * anti * anti);
}

}  // namespace qacc
