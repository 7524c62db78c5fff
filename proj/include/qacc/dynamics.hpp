#pragma once

// Time-dependent Hamiltonians and norm-preserving propagation.
//
// Both integrators use the exponential midpoint rule: over a step of length
// tau starting at t, the state is multiplied by exp(-i H(t + tau/2) tau / hbar).
// The Bloch integrator applies the matching SO(3) rotation, so the two agree
// to roundoff for qubit fields.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>

#include <Eigen/Eigenvalues>

#include "qacc/errors.hpp"
#include "qacc/opsalg.hpp"
#include "qacc/vec3.hpp"

namespace qacc {

/// t -> H(t), with Hdot(t) either analytic or by central difference.
struct TimeField {
  std::function<HermitianOperator(double)> hamiltonian_at;
  /// Optional. When empty, Hdot(t) = [H(t + d) - H(t - d)] / (2d).
  std::function<HermitianOperator(double)> derivative_at;
  /// Relative step: d = fd_step * max(1, |t|).
  double fd_step = 1e-6;

  HermitianOperator hamiltonian(double t) const { return hamiltonian_at(t); }

  HermitianOperator derivative(double t) const {
    if (derivative_at) return derivative_at(t);
    return central_difference(t, fd_step * std::max(1.0, std::fabs(t)));
  }

  /// Central difference with an explicit absolute step.
  HermitianOperator central_difference(double t, double delta) const {
    if (!(delta > 0.0)) throw StepError("finite-difference step must be positive");
    return (hamiltonian_at(t + delta) - hamiltonian_at(t - delta)) * (0.5 / delta);
  }

  Eigen::Index dim() const { return hamiltonian_at(0.0).dim(); }

  static TimeField constant(HermitianOperator h) {
    const Eigen::Index n = h.dim();
    TimeField f;
    f.hamiltonian_at = [h = std::move(h)](double) { return h; };
    f.derivative_at = [n](double) { return HermitianOperator::zero(n); };
    return f;
  }
};

struct PropagationStats {
  std::size_t steps = 0;
  /// Largest | |psi| - 1 | (or | |a| - 1 |) seen before renormalization.
  double max_norm_drift = 0.0;
};

template <class T>
struct Propagated {
  T value;
  PropagationStats stats;
};

/// exp(-i H tau / hbar). Closed form for 2x2, eigendecomposition otherwise.
inline ComplexMatrix unitary_step(const HermitianOperator& h, double tau, double hbar = 1.0) {
  const double s = tau / hbar;
  if (h.dim() == 2) {
    const ComplexMatrix& m = h.matrix();
    const double h0 = 0.5 * (m(0, 0).real() + m(1, 1).real());
    const double hx = m(1, 0).real();
    const double hy = m(1, 0).imag();
    const double hz = 0.5 * (m(0, 0).real() - m(1, 1).real());
    const double r = std::sqrt(hx * hx + hy * hy + hz * hz);
    const double c = std::cos(r * s);
    // sin(r s) / r, continuous at r = 0
    const double sinc = r > 0.0 ? std::sin(r * s) / r : s;
    const Complex mi(0.0, -1.0);
    ComplexMatrix u(2, 2);
    u(0, 0) = c + mi * sinc * hz;
    u(0, 1) = mi * sinc * Complex(hx, -hy);
    u(1, 0) = mi * sinc * Complex(hx, hy);
    u(1, 1) = c - mi * sinc * hz;
    return std::polar(1.0, -h0 * s) * u;
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h.matrix());
  if (es.info() != Eigen::Success) {
    throw NumericalError("eigendecomposition of the Hamiltonian failed");
  }
  ComplexVector phases(h.dim());
  for (Eigen::Index k = 0; k < h.dim(); ++k) phases(k) = std::polar(1.0, -es.eigenvalues()(k) * s);
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

namespace detail {

/// One signed midpoint step; renormalizes and reports the pre-renormalization drift.
inline ComplexVector midpoint_step(const TimeField& field, const ComplexVector& c, double t,
                                   double tau, double hbar, double& drift) {
  const HermitianOperator hmid = field.hamiltonian(t + 0.5 * tau);
  if (hmid.dim() != c.size()) {
    throw DimensionError("field dimension " + std::to_string(hmid.dim()) +
                         " does not match state dimension " + std::to_string(c.size()));
  }
  ComplexVector next = unitary_step(hmid, tau, hbar) * c;
  const double n = next.norm();
  drift = std::fabs(n - 1.0);
  next /= n;
  return next;
}

inline std::size_t step_count(double span, double max_dt) {
  const double n = std::ceil(std::fabs(span) / max_dt - 1e-9);
  return static_cast<std::size_t>(std::max(1.0, n));
}

}  // namespace detail

/// Evolves psi from t_from to t_to (either direction) in equal steps no longer than max_dt.
inline Propagated<StateVector> evolve(const TimeField& field, const StateVector& psi,
                                      double t_from, double t_to, double max_dt,
                                      double hbar = 1.0) {
  if (!(max_dt > 0.0)) throw StepError("time step must be positive");
  if (!(hbar > 0.0)) throw StepError("hbar must be positive");
  Propagated<StateVector> out{psi, {}};
  if (t_to == t_from) return out;
  const std::size_t n = detail::step_count(t_to - t_from, max_dt);
  const double tau = (t_to - t_from) / static_cast<double>(n);
  ComplexVector c = psi.amplitudes();
  for (std::size_t k = 0; k < n; ++k) {
    double drift = 0.0;
    c = detail::midpoint_step(field, c, t_from + static_cast<double>(k) * tau, tau, hbar, drift);
    out.stats.max_norm_drift = std::max(out.stats.max_norm_drift, drift);
  }
  out.stats.steps = n;
  out.value = StateVector(std::move(c));
  return out;
}

/// Solves i hbar d/dt psi = H(t) psi on [t0, t1] with a fixed step <= dt.
inline Propagated<StateVector> propagate_detailed(const TimeField& field, const StateVector& psi0,
                                                  double t0, double t1, double dt,
                                                  double hbar = 1.0) {
  if (!(dt > 0.0)) throw StepError("dt must be positive");
  if (!(t1 > t0)) throw StepError("propagation requires t1 > t0");
  if (dt > t1 - t0) throw StepError("dt exceeds the propagation span");
  return evolve(field, psi0, t0, t1, dt, hbar);
}

inline StateVector propagate(const TimeField& field, const StateVector& psi0, double t0,
                             double t1, double dt, double hbar = 1.0) {
  return propagate_detailed(field, psi0, t0, t1, dt, hbar).value;
}

// ---------------------------------------------------------------------------
// Qubit geometry.

using FieldFunction = std::function<FieldVector3(double)>;

/// Rotates a about h(t + tau/2) by angle 2 |h| tau, the exact flow of adot = 2 h x a
/// for a frozen field.
inline BlochVector bloch_step(const FieldFunction& h_of_t, const BlochVector& a, double t,
                              double tau, double* drift = nullptr) {
  const FieldVector3 h = h_of_t(t + 0.5 * tau);
  const double r = norm(h);
  Vec3 v = a.vec();
  if (r > 0.0) {
    const Vec3 n = h * (1.0 / r);
    const double theta = 2.0 * r * tau;
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    v = v * c + cross(n, v) * s + n * (dot(n, v) * (1.0 - c));
  }
  const double len = norm(v);
  if (drift != nullptr) *drift = std::fabs(len - 1.0);
  return BlochVector::normalized(v);
}

inline Propagated<BlochVector> bloch_evolve(const FieldFunction& h_of_t, const BlochVector& a0,
                                            double t_from, double t_to, double max_dt) {
  if (!(max_dt > 0.0)) throw StepError("time step must be positive");
  Propagated<BlochVector> out{a0, {}};
  if (t_to == t_from) return out;
  const std::size_t n = detail::step_count(t_to - t_from, max_dt);
  const double tau = (t_to - t_from) / static_cast<double>(n);
  BlochVector a = a0;
  for (std::size_t k = 0; k < n; ++k) {
    double drift = 0.0;
    a = bloch_step(h_of_t, a, t_from + static_cast<double>(k) * tau, tau, &drift);
    out.stats.max_norm_drift = std::max(out.stats.max_norm_drift, drift);
  }
  out.stats.steps = n;
  out.value = a;
  return out;
}

inline Propagated<BlochVector> bloch_propagate_detailed(const FieldFunction& h_of_t,
                                                        const BlochVector& a0, double t0,
                                                        double t1, double dt) {
  if (!(dt > 0.0)) throw StepError("dt must be positive");
  if (!(t1 > t0)) throw StepError("propagation requires t1 > t0");
  if (dt > t1 - t0) throw StepError("dt exceeds the propagation span");
  return bloch_evolve(h_of_t, a0, t0, t1, dt);
}

inline BlochVector bloch_propagate(const FieldFunction& h_of_t, const BlochVector& a0, double t0,
                                   double t1, double dt) {
  return bloch_propagate_detailed(h_of_t, a0, t0, t1, dt).value;
}

inline BlochVector state_to_bloch(const StateVector& psi) {
  if (psi.dim() != 2) {
    throw DimensionError("Bloch vector needs a qubit state, got dimension " +
                         std::to_string(psi.dim()));
  }
  const Complex c0 = psi[0];
  const Complex c1 = psi[1];
  const Complex r = std::conj(c0) * c1;
  return BlochVector(Vec3{2.0 * r.real(), 2.0 * r.imag(), std::norm(c0) - std::norm(c1)});
}

/// Representative with real nonnegative first amplitude; the south pole maps to |1>.
inline StateVector bloch_to_state(const BlochVector& a) {
  const double z = std::clamp(a.z(), -1.0, 1.0);
  const double c0 = std::sqrt(0.5 * (1.0 + z));
  const double s1 = std::sqrt(0.5 * (1.0 - z));
  const double phi = (a.x() == 0.0 && a.y() == 0.0) ? 0.0 : std::atan2(a.y(), a.x());
  ComplexVector v(2);
  v(0) = c0;
  v(1) = std::polar(s1, phi);
  return StateVector(std::move(v));
}

inline StateVector bloch_to_state(const Vec3& a) { return bloch_to_state(BlochVector(a)); }

/// H = h0 * 1 + h . sigma.
inline HermitianOperator field_to_operator(double h0, const FieldVector3& h) {
  ComplexMatrix m(2, 2);
  m(0, 0) = h0 + h.z;
  m(0, 1) = Complex(h.x, -h.y);
  m(1, 0) = Complex(h.x, h.y);
  m(1, 1) = h0 - h.z;
  return HermitianOperator(std::move(m));
}

/// Trace part and Pauli components of a 2x2 Hermitian operator.
struct QubitField {
  double h0 = 0.0;
  FieldVector3 h;
};

inline QubitField operator_to_field(const HermitianOperator& op) {
  if (op.dim() != 2) throw DimensionError("operator_to_field needs a 2x2 operator");
  const ComplexMatrix& m = op.matrix();
  return {0.5 * (m(0, 0).real() + m(1, 1).real()),
          {m(1, 0).real(), m(1, 0).imag(), 0.5 * (m(0, 0).real() - m(1, 1).real())}};
}

/// TimeField for H(t) = h0(t) + h(t) . sigma with analytic derivative.
inline TimeField qubit_time_field(std::function<QubitField(double)> field,
                                  std::function<QubitField(double)> rate) {
  TimeField f;
  f.hamiltonian_at = [field = std::move(field)](double t) {
    const QubitField q = field(t);
    return field_to_operator(q.h0, q.h);
  };
  if (rate) {
    f.derivative_at = [rate = std::move(rate)](double t) {
      const QubitField q = rate(t);
      return field_to_operator(q.h0, q.h);
    };
  }
  return f;
}

}  // namespace qacc
