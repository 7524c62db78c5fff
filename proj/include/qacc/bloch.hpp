#pragma once

// Closed-form qubit quantities in terms of the Bloch vector a, the field h of
// H = h0 + h . sigma and its rate hdot (hbar = 1, v = sigma_H):
//
//   sigma_H^2    = h^2 - (a.h)^2
//   sigma_Hdot^2 = hdot^2 - (a.hdot)^2
//   a_H          = [h.hdot - (a.h)(a.hdot)] / sigma_H
//   |<[H,Hdot]>|^2 = [(a x h).hdot - (a x hdot).h]^2
//
// None depends on h0.

#include <algorithm>
#include <array>
#include <cmath>
#include <string_view>

#include "qacc/errors.hpp"
#include "qacc/limits.hpp"
#include "qacc/vec3.hpp"

namespace qacc {

struct BlochFrame {
  BlochVector a;
  FieldVector3 h;
  FieldVector3 hdot;
  double h0 = 0.0;
};

/// adot = 2 h x a.
inline Vec3 bloch_velocity(const BlochFrame& f) { return 2.0 * cross(f.h, f.a); }

inline double sigma_h2(const BlochFrame& f) {
  const double ah = dot(f.a, f.h);
  return std::max(0.0, norm2(f.h) - ah * ah);
}

inline double sigma_hdot2(const BlochFrame& f) {
  const double ad = dot(f.a, f.hdot);
  return std::max(0.0, norm2(f.hdot) - ad * ad);
}

/// Signed acceleration; throws when sigma_H is at or below the floor.
inline double accel_bloch(const BlochFrame& f) {
  const double sigma = std::sqrt(sigma_h2(f));
  if (!(sigma > tol::sigma_floor)) {
    throw DegenerateSpeedError("accel_bloch: a is parallel to h (sigma_H = " +
                               std::to_string(sigma) + ")");
  }
  return (dot(f.h, f.hdot) - dot(f.a, f.h) * dot(f.a, f.hdot)) / sigma;
}

inline double commutator_sq(const BlochFrame& f) {
  const double c = dot(cross(f.a, f.h), f.hdot) - dot(cross(f.a, f.hdot), f.h);
  return c * c;
}

struct FieldDecomposition {
  FieldVector3 h_par;
  FieldVector3 h_perp;
  FieldVector3 hdot_par;
  FieldVector3 hdot_perp;
};

/// Components of h and hdot parallel and perpendicular to a.
inline FieldDecomposition decompose_field(const BlochFrame& f) {
  FieldDecomposition d;
  d.h_par = dot(f.h, f.a) * f.a.vec();
  d.h_perp = f.h - d.h_par;
  d.hdot_par = dot(f.hdot, f.a) * f.a.vec();
  d.hdot_perp = f.hdot - d.hdot_par;
  return d;
}

/// Rows of the qubit saturation table, plus the eigenstate case it does not cover.
enum class TableRow {
  NoSaturationOrth,      ///< a.h = 0, h_perp x hdot_perp != 0
  SaturationWithMax,     ///< a.h = 0, h_perp x hdot_perp = 0
  NoSaturationNonOrth,   ///< a.h != 0, h_perp x hdot_perp != 0
  SaturationWithoutMax,  ///< a.h != 0, h_perp x hdot_perp = 0
  Degenerate,            ///< sigma_H <= sigma_floor (a parallel to h)
};

inline constexpr std::array<std::string_view, 5> kTableRowNames = {
    "NoSaturation_Orth", "SaturationWithMax", "NoSaturation_NonOrth", "SaturationWithoutMax",
    "Degenerate"};

inline std::string_view to_string(TableRow row) {
  return kTableRowNames[static_cast<std::size_t>(row)];
}

/// Pure function of the two geometric booleans.
inline TableRow table_row(bool orthogonal, bool perp_collinear) {
  if (orthogonal) return perp_collinear ? TableRow::SaturationWithMax : TableRow::NoSaturationOrth;
  return perp_collinear ? TableRow::SaturationWithoutMax : TableRow::NoSaturationNonOrth;
}

struct SaturationTag {
  TableRow row = TableRow::Degenerate;
  bool orthogonal = false;      ///< |a.h| <= tol |h|
  bool perp_collinear = false;  ///< |h_perp x hdot_perp| <= tol max(|h_perp||hdot_perp|, eps)
  bool degenerate = false;
  /// sigma_Hdot^2 equals |hdot|^2 within tol, i.e. the bound sits at its maximum.
  bool bound_at_max = false;
  /// The numeric gap sigma_Hdot^2 - a_H^2 agrees with the geometric verdict.
  bool consistent = true;
  double a_dot_h = 0.0;
  double cross_norm = 0.0;  ///< |h_perp x hdot_perp|

  bool saturated() const {
    return row == TableRow::SaturationWithMax || row == TableRow::SaturationWithoutMax;
  }
};

namespace tol {
inline constexpr double classify_rel = 1e-8;
inline constexpr double classify_abs = 1e-14;
}  // namespace tol

inline SaturationTag classify(const BlochFrame& f, double tol_rel = tol::classify_rel) {
  const FieldDecomposition d = decompose_field(f);
  SaturationTag tag;
  tag.a_dot_h = dot(f.a, f.h);
  tag.cross_norm = norm(cross(d.h_perp, d.hdot_perp));
  tag.orthogonal = std::fabs(tag.a_dot_h) <= tol_rel * norm(f.h);
  tag.perp_collinear =
      tag.cross_norm <= tol_rel * std::max(norm(d.h_perp) * norm(d.hdot_perp), tol::classify_abs);

  const double bound2 = sigma_hdot2(f);
  const double amax2 = norm2(f.hdot);
  tag.bound_at_max = amax2 - bound2 <= tol_rel * std::max(amax2, tol::classify_abs);

  tag.degenerate = !(std::sqrt(sigma_h2(f)) > tol::sigma_floor);
  if (tag.degenerate) {
    tag.row = TableRow::Degenerate;
    return tag;
  }
  tag.row = table_row(tag.orthogonal, tag.perp_collinear);

  const double accel = accel_bloch(f);
  const double gap = bound2 - accel * accel;
  const bool numerically_equal = std::fabs(gap) <= tol_rel * std::max(bound2, tol::classify_abs);
  tag.consistent = numerically_equal == tag.perp_collinear;
  return tag;
}

}  // namespace qacc
