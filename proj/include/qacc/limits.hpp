#pragma once

// Speed and acceleration of the evolution in projective Hilbert space and the
// two acceleration bounds, for any finite dimension.
//
// With metric factor m and Planck constant hbar,
//   v   = (m / hbar) sigma_H
//   a   = dv/dt = (m / hbar)^2 cov(H, Hdot) / v
//   a^2 <= (m / hbar)^2 [ sigma_Hdot^2 - |<[H, Hdot]>|^2 / (4 sigma_H^2) ]   (tight)
//       <= (m / hbar)^2 sigma_Hdot^2                                       (loose)

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>

#include "qacc/dynamics.hpp"
#include "qacc/errors.hpp"
#include "qacc/opsalg.hpp"

namespace qacc {

namespace tol {
/// sigma_H at or below this (energy units) is treated as zero.
inline constexpr double sigma_floor = 1e-9;
/// Default time step of the finite-difference acceleration oracle.
inline constexpr double fd_dt = 1e-4;
}  // namespace tol

/// Line-element and hbar convention. pati(): v = (2/hbar) sigma_H with hbar
/// free. alsing_cafaro(): v = sigma_H with hbar = 1.
class Convention {
 public:
  static Convention pati(double hbar = 1.0) { return Convention(2.0, hbar, "pati"); }
  static Convention alsing_cafaro() { return Convention(1.0, 1.0, "alsing-cafaro"); }
  static Convention custom(double metric_factor, double hbar) {
    return Convention(metric_factor, hbar, "custom");
  }

  double metric_factor() const { return metric_factor_; }
  double hbar() const { return hbar_; }
  const std::string& name() const { return name_; }

  /// metric_factor / hbar.
  double scale() const { return metric_factor_ / hbar_; }

 private:
  Convention(double metric_factor, double hbar, std::string name)
      : metric_factor_(metric_factor), hbar_(hbar), name_(std::move(name)) {
    if (!(metric_factor > 0.0) || !std::isfinite(metric_factor)) {
      throw ConfigError("metric factor must be positive");
    }
    if (!(hbar > 0.0) || !std::isfinite(hbar)) throw ConfigError("hbar must be positive");
  }

  double metric_factor_;
  double hbar_;
  std::string name_;
};

namespace detail {

inline double sigma_h(const TimeField& field, const StateVector& psi, double t) {
  return std::sqrt(variance(field.hamiltonian(t), psi));
}

inline void require_nondegenerate(double sigma, double t) {
  if (!(sigma > tol::sigma_floor)) {
    throw DegenerateSpeedError("sigma_H = " + std::to_string(sigma) + " at t = " +
                               std::to_string(t) + " is below the floor");
  }
}

}  // namespace detail

inline double speed(const TimeField& field, const StateVector& psi, double t,
                    const Convention& conv) {
  return conv.scale() * detail::sigma_h(field, psi, t);
}

/// a = (m/hbar)^2 cov(H, Hdot) / v. Signed.
inline double acceleration_from_covariance(const TimeField& field, const StateVector& psi,
                                           double t, const Convention& conv) {
  const HermitianOperator h = field.hamiltonian(t);
  const double sigma = std::sqrt(variance(h, psi));
  detail::require_nondegenerate(sigma, t);
  const double v = conv.scale() * sigma;
  return conv.scale() * conv.scale() * covariance(h, field.derivative(t), psi) / v;
}

/// [v(t + dt) - v(t - dt)] / (2 dt) along the trajectory through psi at time t.
inline double acceleration_fd(const TimeField& field, const StateVector& psi, double t,
                              double dt, const Convention& conv) {
  if (!(dt > 0.0)) throw StepError("finite-difference dt must be positive");
  const StateVector ahead = evolve(field, psi, t, t + dt, dt).value;
  const StateVector behind = evolve(field, psi, t, t - dt, dt).value;
  return (speed(field, ahead, t + dt, conv) - speed(field, behind, t - dt, conv)) / (2.0 * dt);
}

/// Oracle at dt, dt/2, dt/4. For a smooth trajectory the successive
/// differences shrink by ~4 (second-order scheme).
struct FdRichardson {
  double a_dt = 0.0;
  double a_half = 0.0;
  double a_quarter = 0.0;
  double ratio = 0.0;  ///< (a_dt - a_half) / (a_half - a_quarter)
};

inline FdRichardson acceleration_fd_richardson(const TimeField& field, const StateVector& psi,
                                               double t, double dt, const Convention& conv) {
  FdRichardson r;
  r.a_dt = acceleration_fd(field, psi, t, dt, conv);
  r.a_half = acceleration_fd(field, psi, t, 0.5 * dt, conv);
  r.a_quarter = acceleration_fd(field, psi, t, 0.25 * dt, conv);
  r.ratio = (r.a_dt - r.a_half) / (r.a_half - r.a_quarter);
  return r;
}

/// (m/hbar) sigma_Hdot.
inline double bound_loose(const TimeField& field, const StateVector& psi, double t,
                          const Convention& conv) {
  return conv.scale() * std::sqrt(variance(field.derivative(t), psi));
}

namespace detail {

inline double tight_from_parts(double var_h, double var_hdot, double comm_abs,
                               const Convention& conv) {
  const double inner = var_hdot - 0.25 * comm_abs * comm_abs / var_h;
  return conv.scale() * std::sqrt(std::max(0.0, inner));
}

}  // namespace detail

/// Commutator-tightened bound; needs sigma_H above the floor.
inline double bound_tight(const TimeField& field, const StateVector& psi, double t,
                          const Convention& conv) {
  const HermitianOperator h = field.hamiltonian(t);
  const HermitianOperator hdot = field.derivative(t);
  const double var_h = variance(h, psi);
  detail::require_nondegenerate(std::sqrt(var_h), t);
  return detail::tight_from_parts(var_h, variance(hdot, psi),
                                  std::abs(commutator_expectation(h, hdot, psi)), conv);
}

/// All limit quantities at one time. Acceleration fields are empty on
/// degenerate samples (sigma_H <= sigma_floor).
struct LimitSample {
  double t = 0.0;
  double v = 0.0;
  std::optional<double> a_analytic;
  std::optional<double> a_fd;
  double bound_loose = 0.0;
  std::optional<double> bound_tight;
  std::optional<double> slack_loose;  ///< bound_loose - |a_fd|
  std::optional<double> slack_tight;  ///< bound_tight - |a_fd|
  bool degenerate = false;
};

inline LimitSample evaluate_limits(const TimeField& field, const StateVector& psi, double t,
                                   const Convention& conv, double fd_dt = tol::fd_dt) {
  const HermitianOperator h = field.hamiltonian(t);
  const HermitianOperator hdot = field.derivative(t);
  const double var_h = variance(h, psi);
  const double var_hdot = variance(hdot, psi);
  const double sigma = std::sqrt(var_h);

  LimitSample s;
  s.t = t;
  s.v = conv.scale() * sigma;
  s.bound_loose = conv.scale() * std::sqrt(var_hdot);
  s.degenerate = !(sigma > tol::sigma_floor);
  if (s.degenerate) return s;

  s.a_analytic = conv.scale() * conv.scale() * covariance(h, hdot, psi) / s.v;
  s.bound_tight = detail::tight_from_parts(
      var_h, var_hdot, std::abs(commutator_expectation(h, hdot, psi)), conv);
  s.a_fd = acceleration_fd(field, psi, t, fd_dt, conv);
  s.slack_loose = s.bound_loose - std::fabs(*s.a_fd);
  s.slack_tight = *s.bound_tight - std::fabs(*s.a_fd);
  return s;
}

}  // namespace qacc
