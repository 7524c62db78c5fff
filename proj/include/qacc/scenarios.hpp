#pragma once

// The three worked qubit examples, each carrying its field, analytic field
// rate, closed-form Bloch trajectory and closed-form acceleration curves.
//
//   example1  a.h = 0, h x hdot != 0     no saturation
//   example2  h = gamma(t) z             saturation, bound below its maximum
//   example3  h = w0 cos(n0 t) z         saturation at the maximum

#include <algorithm>
#include <cmath>
#include <functional>
#include <initializer_list>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qacc/bloch.hpp"
#include "qacc/dynamics.hpp"
#include "qacc/errors.hpp"

namespace qacc {

struct ScenarioField {
  double h0 = 0.0;
  FieldVector3 h;
  FieldVector3 hdot;
};

struct Scenario {
  std::string name;
  std::map<std::string, double> params;
  std::function<ScenarioField(double)> field_at;
  std::function<BlochVector(double)> bloch_at;
  std::function<double(double)> accel_sq_at;
  std::function<double(double)> bound_sq_at;  ///< sigma_Hdot^2
  std::function<double(double)> amax_sq_at;   ///< |hdot|^2
  TableRow expected_tag = TableRow::Degenerate;

  BlochFrame frame_at(double t) const {
    const ScenarioField f = field_at(t);
    return {bloch_at(t), f.h, f.hdot, f.h0};
  }

  FieldFunction h_function() const {
    return [fa = field_at](double t) { return fa(t).h; };
  }

  TimeField time_field() const {
    return qubit_time_field(
        [fa = field_at](double t) {
          const ScenarioField f = fa(t);
          return QubitField{f.h0, f.h};
        },
        [fa = field_at](double t) { return QubitField{0.0, fa(t).hdot}; });
  }

  StateVector initial_state() const { return bloch_to_state(bloch_at(0.0)); }
};

namespace detail {

inline void require_positive(const char* key, double value) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ConfigError(std::string("parameter ") + key + " must be positive and finite, got " +
                      std::to_string(value));
  }
}

}  // namespace detail

inline Scenario example1(double omega0, double nu0) {
  detail::require_positive("omega0", omega0);
  detail::require_positive("nu0", nu0);
  const double w = omega0;
  const double n = nu0;

  Scenario s;
  s.name = "example1";
  s.params = {{"omega0", w}, {"nu0", n}};
  s.expected_tag = TableRow::NoSaturationOrth;
  s.field_at = [w, n](double t) {
    const double s2 = std::sin(2.0 * w * t);
    const double s4 = std::sin(4.0 * w * t);
    const double c4 = std::cos(4.0 * w * t);
    const double cn = std::cos(n * t);
    const double sn = std::sin(n * t);
    ScenarioField f;
    // (n/2) cos(2wt) sin(2wt) = (n/4) sin(4wt)
    f.h = {-0.25 * n * s4 * cn - w * sn, -0.25 * n * s4 * sn + w * cn, 0.5 * n * s2 * s2};
    f.hdot = {-n * w * (1.0 + c4) * cn + 0.25 * n * n * s4 * sn,
              -n * w * (1.0 + c4) * sn - 0.25 * n * n * s4 * cn, n * w * s4};
    return f;
  };
  s.bloch_at = [w, n](double t) {
    const double s2 = std::sin(2.0 * w * t);
    return BlochVector(Vec3{std::cos(n * t) * s2, std::sin(n * t) * s2, std::cos(2.0 * w * t)});
  };
  s.accel_sq_at = [w, n](double t) {
    const double s4 = std::sin(4.0 * w * t);
    const double s2 = std::sin(2.0 * w * t);
    const double r = n / w;
    return n * n * n * n * s4 * s4 / (16.0 + 4.0 * r * r * s2 * s2);
  };
  s.amax_sq_at = [w, n](double t) {
    const double s4 = std::sin(4.0 * w * t);
    return n * n * n * n / 16.0 * s4 * s4 + 2.0 * n * n * w * w * (1.0 + std::cos(4.0 * w * t));
  };
  // a.hdot = 0 along this trajectory, so the bound equals its maximum.
  s.bound_sq_at = s.amax_sq_at;
  return s;
}

/// A strictly positive coupling gamma(t) and, optionally, its derivative.
struct Coupling {
  std::function<double(double)> value;
  std::function<double(double)> rate;  ///< empty: central difference
};

/// gamma(t) = sum_k c_k t^k.
inline Coupling polynomial_coupling(std::vector<double> coeffs) {
  Coupling g;
  g.value = [coeffs](double t) {
    double acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * t + *it;
    return acc;
  };
  g.rate = [coeffs](double t) {
    double acc = 0.0;
    for (std::size_t k = coeffs.size(); k-- > 1;) acc = acc * t + static_cast<double>(k) * coeffs[k];
    return acc;
  };
  return g;
}

/// Composite Simpson rule for the integral of f over [0, t], using
/// panels_per_unit panels per unit time (at least two, always even).
inline double simpson_from_zero(const std::function<double(double)>& f, double t,
                                double panels_per_unit = 1e4) {
  if (t == 0.0) return 0.0;
  auto n = static_cast<long>(std::ceil(std::fabs(t) * panels_per_unit));
  if (n < 2) n = 2;
  if (n % 2 != 0) ++n;
  const double h = t / static_cast<double>(n);
  double odd = 0.0;
  double even = 0.0;
  for (long k = 1; k < n; ++k) {
    const double v = f(static_cast<double>(k) * h);
    if (k % 2 != 0) {
      odd += v;
    } else {
      even += v;
    }
  }
  return h / 3.0 * (f(0.0) + 4.0 * odd + 2.0 * even + f(t));
}

/// h = gamma(t) z from |psi(0)> = (sqrt(3)/2)|0> + (1/2)|1>.
inline Scenario example2(Coupling gamma, std::map<std::string, double> params = {}) {
  if (!gamma.value) throw ConfigError("example2 needs a coupling gamma(t)");
  detail::require_positive("gamma(0)", gamma.value(0.0));

  auto value = gamma.value;
  std::function<double(double)> rate = gamma.rate;
  if (!rate) {
    rate = [value](double t) {
      const double d = 1e-6 * std::max(1.0, std::fabs(t));
      return (value(t + d) - value(t - d)) / (2.0 * d);
    };
  }
  auto checked = [value](double t) {
    const double g = value(t);
    if (!(g > 0.0)) {
      throw ConfigError("gamma(t) must stay positive, got " + std::to_string(g) + " at t = " +
                        std::to_string(t));
    }
    return g;
  };

  Scenario s;
  s.name = "example2";
  s.params = std::move(params);
  s.expected_tag = TableRow::SaturationWithoutMax;
  s.field_at = [checked, rate](double t) {
    ScenarioField f;
    f.h = {0.0, 0.0, checked(t)};
    f.hdot = {0.0, 0.0, rate(t)};
    return f;
  };
  s.bloch_at = [value](double t) {
    const double phase = 2.0 * simpson_from_zero(value, t);
    const double r = std::sqrt(3.0) / 2.0;
    return BlochVector(Vec3{r * std::cos(phase), r * std::sin(phase), 0.5});
  };
  s.accel_sq_at = [rate](double t) {
    const double d = rate(t);
    return 0.75 * d * d;
  };
  s.bound_sq_at = s.accel_sq_at;
  s.amax_sq_at = [rate](double t) {
    const double d = rate(t);
    return d * d;
  };
  return s;
}

/// h = w0 cos(n0 t) z from |+>.
inline Scenario example3(double omega0, double nu0) {
  detail::require_positive("omega0", omega0);
  detail::require_positive("nu0", nu0);
  const double w = omega0;
  const double n = nu0;

  Scenario s;
  s.name = "example3";
  s.params = {{"omega0", w}, {"nu0", n}};
  s.expected_tag = TableRow::SaturationWithMax;
  s.field_at = [w, n](double t) {
    ScenarioField f;
    f.h = {0.0, 0.0, w * std::cos(n * t)};
    f.hdot = {0.0, 0.0, -w * n * std::sin(n * t)};
    return f;
  };
  s.bloch_at = [w, n](double t) {
    const double phase = 2.0 * (w / n) * std::sin(n * t);
    return BlochVector(Vec3{std::cos(phase), std::sin(phase), 0.0});
  };
  s.accel_sq_at = [w, n](double t) {
    const double v = w * n * std::sin(n * t);
    return v * v;
  };
  s.bound_sq_at = s.accel_sq_at;
  s.amax_sq_at = s.accel_sq_at;
  return s;
}

/// Builds a scenario from its CLI name and parameter map. Missing keys take
/// the defaults (omega0 = 1, nu0 = 2 for example1; gamma = 1 + t^2 for
/// example2 via g0..g3; omega0 = nu0 = 1 for example3).
inline Scenario make_scenario(const std::string& name, const std::map<std::string, double>& params) {
  auto take = [&params](std::initializer_list<std::string> allowed) {
    for (const auto& [key, value] : params) {
      bool known = false;
      for (const auto& a : allowed) known = known || key == a;
      if (!known) throw ConfigError("unknown parameter '" + key + "' for the selected scenario");
    }
  };
  auto get = [&params](const std::string& key, double fallback) {
    const auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
  };

  if (name == "example1") {
    take({"omega0", "nu0"});
    return example1(get("omega0", 1.0), get("nu0", 2.0));
  }
  if (name == "example2") {
    take({"g0", "g1", "g2", "g3"});
    std::vector<double> c = {get("g0", 1.0), get("g1", 0.0), get("g2", 1.0), get("g3", 0.0)};
    std::map<std::string, double> used = {{"g0", c[0]}, {"g1", c[1]}, {"g2", c[2]}, {"g3", c[3]}};
    return example2(polynomial_coupling(std::move(c)), std::move(used));
  }
  if (name == "example3") {
    take({"omega0", "nu0"});
    return example3(get("omega0", 1.0), get("nu0", 1.0));
  }
  throw ConfigError("unknown scenario '" + name + "'");
}

}  // namespace qacc
