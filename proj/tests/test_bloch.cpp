#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "qacc/bloch.hpp"
#include "qacc/random.hpp"
#include "qacc/scenarios.hpp"

using namespace qacc;

namespace {

Vec3 random_vec(Rng& rng, double scale = 1.0) {
  return {uniform(rng, -scale, scale), uniform(rng, -scale, scale), uniform(rng, -scale, scale)};
}

BlochFrame random_frame(Rng& rng) {
  return {BlochVector::normalized(random_vec(rng)), random_vec(rng, 2.0), random_vec(rng, 2.0), 0.0};
}

double rel_err(double x, double y) { return std::fabs(x - y) / std::max({std::fabs(x), std::fabs(y), 1.0}); }

// Operator-side oracle: build the 2x2 matrices and the state, then use opsalg.
struct OperatorSide {
  double var_h, var_hdot, comm_sq, accel;

  explicit OperatorSide(const BlochFrame& f) {
    const HermitianOperator h = field_to_operator(f.h0, f.h);
    const HermitianOperator hdot = field_to_operator(0.0, f.hdot);
    const StateVector psi = bloch_to_state(f.a);
    var_h = variance(h, psi);
    var_hdot = variance(hdot, psi);
    comm_sq = std::norm(commutator_expectation(h, hdot, psi));
    accel = covariance(h, hdot, psi) / std::sqrt(var_h);
  }
};

}  // namespace

TEST(SigmaH2, Examples) {
  const double g = 1.7;
  EXPECT_NEAR(sigma_h2({BlochVector(0, 0, 1), {0, 0, g}, {}, 0}), 0.0, 1e-15);
  EXPECT_NEAR(sigma_h2({BlochVector(1, 0, 0), {0, 0, g}, {}, 0}), g * g, 1e-15);
  const BlochVector a(std::sqrt(3.0) / 2.0, 0.0, 0.5);
  EXPECT_NEAR(sigma_h2({a, {0, 0, g}, {}, 0}), 0.75 * g * g, 1e-14);
}

TEST(SigmaHdot2, Examples) {
  EXPECT_NEAR(sigma_hdot2({BlochVector(1, 0, 0), {}, {0, 2, 1}, 0}), 5.0, 1e-15);
  const BlochVector a(std::sqrt(3.0) / 2.0, 0.0, 0.5);
  const double rate = 1.3;
  EXPECT_NEAR(sigma_hdot2({a, {0, 0, 1}, {0, 0, rate}, 0}), 0.75 * rate * rate, 1e-14);
}

TEST(AccelBloch, Examples) {
  EXPECT_NEAR(accel_bloch({BlochVector(1, 0, 0), {0, 0, 2}, {0, 0, 3}, 0}), 3.0, 1e-15);
  EXPECT_NEAR(accel_bloch({BlochVector(1, 0, 0), {0, 2, 0}, {0, -0.5, 0}, 0}), -0.5, 1e-15);
  EXPECT_THROW(accel_bloch({BlochVector(0, 0, 1), {0, 0, 2}, {1, 0, 0}, 0}), DegenerateSpeedError);

  const Scenario s = example1(1.0, 2.0);
  for (double t : {0.1, 0.3, 1.9}) {
    const double a = accel_bloch(s.frame_at(t));
    EXPECT_LT(rel_err(a * a, s.accel_sq_at(t)), 1e-10);
  }
}

TEST(CommutatorSq, Examples) {
  EXPECT_EQ(commutator_sq({BlochVector(1, 0, 0), {0, 1, 0}, {0, 0, 1}, 0}), 4.0);
  EXPECT_EQ(commutator_sq({BlochVector(0.6, 0, 0.8), {1, 2, 3}, {2, 4, 6}, 0}), 0.0);
}

TEST(CommutatorSq, MatchesComponentFormula) {
  // Expanded component form of [(a x h).hdot - (a x hdot).h]^2.
  Rng rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const BlochFrame f = random_frame(rng);
    const Vec3& a = f.a;
    const Vec3& h = f.h;
    const Vec3& d = f.hdot;
    const double c = 2.0 * (a.x * (h.y * d.z - h.z * d.y) + a.y * (h.z * d.x - h.x * d.z) +
                            a.z * (h.x * d.y - h.y * d.x));
    EXPECT_LT(rel_err(commutator_sq(f), c * c), 1e-12);
  }
}

TEST(DecomposeField, Examples) {
  const FieldDecomposition orth = decompose_field({BlochVector(1, 0, 0), {0, 1, 2}, {}, 0});
  EXPECT_EQ(orth.h_par, (Vec3{0, 0, 0}));
  EXPECT_EQ(orth.h_perp, (Vec3{0, 1, 2}));
  const FieldDecomposition par = decompose_field({BlochVector(0, 0, 1), {0, 0, 2}, {}, 0});
  EXPECT_EQ(par.h_perp, (Vec3{0, 0, 0}));
}

TEST(DecomposeField, ReassemblyAndOrthogonality) {
  Rng rng(2);
  for (int trial = 0; trial < 1000; ++trial) {
    const BlochFrame f = random_frame(rng);
    const FieldDecomposition d = decompose_field(f);
    EXPECT_LT(max_abs_diff(d.h_par + d.h_perp, f.h), 1e-12);
    EXPECT_LT(max_abs_diff(d.hdot_par + d.hdot_perp, f.hdot), 1e-12);
    EXPECT_LT(std::fabs(dot(d.h_perp, f.a)), 1e-12);
    EXPECT_LT(std::fabs(dot(d.hdot_perp, f.a)), 1e-12);
  }
}

TEST(OperatorEquivalence, RandomFrames) {
  Rng rng(3);
  for (int trial = 0; trial < 2000; ++trial) {
    BlochFrame f = random_frame(rng);
    f.h0 = uniform(rng, -10.0, 10.0);
    const OperatorSide op(f);
    EXPECT_LT(rel_err(sigma_h2(f), op.var_h), 1e-10);
    EXPECT_LT(rel_err(sigma_hdot2(f), op.var_hdot), 1e-10);
    EXPECT_LT(rel_err(commutator_sq(f), op.comm_sq), 1e-10);
    EXPECT_LT(rel_err(accel_bloch(f), op.accel), 1e-10);
  }
}

TEST(OperatorEquivalence, TraceShiftChangesNothing) {
  Rng rng(4);
  for (int trial = 0; trial < 1000; ++trial) {
    BlochFrame f = random_frame(rng);
    BlochFrame g = f;
    g.h0 = uniform(rng, -10.0, 10.0);
    EXPECT_LT(std::fabs(sigma_h2(f) - sigma_h2(g)), 1e-12);
    EXPECT_LT(std::fabs(sigma_hdot2(f) - sigma_hdot2(g)), 1e-12);
    EXPECT_LT(std::fabs(commutator_sq(f) - commutator_sq(g)), 1e-12);
    EXPECT_LT(std::fabs(accel_bloch(f) - accel_bloch(g)), 1e-12);
  }
}

TEST(Identities, PerpendicularFormAndVectorInequality) {
  Rng rng(5);
  for (int trial = 0; trial < 2000; ++trial) {
    const BlochFrame f = random_frame(rng);
    const FieldDecomposition d = decompose_field(f);
    const double a = accel_bloch(f);
    const double perp = dot(d.h_perp, d.hdot_perp);
    EXPECT_LT(rel_err(a * a, perp * perp / norm2(d.h_perp)), 1e-10);
    EXPECT_LE(a * a, sigma_hdot2(f) + 1e-10);

    const double ah = dot(f.a, f.h);
    const double ad = dot(f.a, f.hdot);
    const double lhs = std::pow(dot(f.h, f.hdot) - ah * ad, 2);
    const double rhs = (norm2(f.hdot) - ad * ad) * (norm2(f.h) - ah * ah);
    EXPECT_LE(lhs, rhs + 1e-10);
  }
}

TEST(Identities, EqualityIffPerpendicularPartsAreCollinear) {
  Rng rng(6);
  int saturated = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    BlochFrame f = random_frame(rng);
    if (trial % 2 == 1) {
      // hdot = alpha h + beta a puts hdot_perp along h_perp.
      f.hdot = uniform(rng, -2.0, 2.0) * f.h + uniform(rng, -2.0, 2.0) * f.a.vec();
    }
    const FieldDecomposition d = decompose_field(f);
    const bool collinear =
        norm(cross(d.h_perp, d.hdot_perp)) <= 1e-8 * norm(d.h_perp) * norm(d.hdot_perp);
    const double a = accel_bloch(f);
    const bool equal = std::fabs(sigma_hdot2(f) - a * a) <= 1e-10;
    EXPECT_EQ(equal, collinear) << "trial " << trial;
    saturated += collinear ? 1 : 0;
  }
  EXPECT_EQ(saturated, 1000);
}

TEST(Classify, TableIsAPureFunctionOfTheBooleans) {
  EXPECT_EQ(table_row(true, false), TableRow::NoSaturationOrth);
  EXPECT_EQ(table_row(true, true), TableRow::SaturationWithMax);
  EXPECT_EQ(table_row(false, false), TableRow::NoSaturationNonOrth);
  EXPECT_EQ(table_row(false, true), TableRow::SaturationWithoutMax);
  EXPECT_EQ(to_string(TableRow::NoSaturationOrth), "NoSaturation_Orth");
  EXPECT_EQ(to_string(TableRow::Degenerate), "Degenerate");
}

TEST(Classify, OrthogonalScenarioIsNotSaturated) {
  const Scenario s = example1(1.0, 2.0);
  const double t = 0.3;
  const SaturationTag tag = classify(s.frame_at(t));
  EXPECT_EQ(tag.row, TableRow::NoSaturationOrth);
  EXPECT_TRUE(tag.consistent);
  EXPECT_TRUE(tag.bound_at_max);
  EXPECT_FALSE(tag.saturated());
  EXPECT_LT(s.accel_sq_at(t), s.amax_sq_at(t) - 1e-3);
}

TEST(Classify, QuadraticCouplingSaturatesBelowMaximum) {
  const Scenario s = example2(polynomial_coupling({1.0, 0.0, 1.0}));
  const double t = 0.6;
  const BlochFrame f = s.frame_at(t);
  const SaturationTag tag = classify(f);
  EXPECT_EQ(tag.row, TableRow::SaturationWithoutMax);
  EXPECT_TRUE(tag.consistent);
  EXPECT_FALSE(tag.bound_at_max);
  const double a = accel_bloch(f);
  EXPECT_NEAR(a * a, 0.75 * 4.0 * t * t, 1e-12);
  EXPECT_LT(sigma_hdot2(f), norm2(f.hdot) - 1e-3);
}

TEST(Classify, CosineFieldSaturatesAtMaximum) {
  const Scenario s = example3(1.0, 1.0);
  const double t = 1.0;
  const BlochFrame f = s.frame_at(t);
  const SaturationTag tag = classify(f);
  EXPECT_EQ(tag.row, TableRow::SaturationWithMax);
  EXPECT_TRUE(tag.consistent);
  EXPECT_TRUE(tag.bound_at_max);
  const double a = accel_bloch(f);
  const double expect = std::pow(std::sin(t), 2);
  EXPECT_NEAR(a * a, expect, 1e-12);
  EXPECT_NEAR(sigma_hdot2(f), expect, 1e-12);
  EXPECT_NEAR(norm2(f.hdot), expect, 1e-12);
}

TEST(Classify, ParallelFrameIsFlaggedDegenerate) {
  const SaturationTag tag = classify({BlochVector(0, 0, 1), {0, 0, 2}, {1, 0, 0}, 0});
  EXPECT_TRUE(tag.degenerate);
  EXPECT_EQ(tag.row, TableRow::Degenerate);
  EXPECT_EQ(tag.cross_norm, 0.0);
}

TEST(Classify, ScaledFieldFamilyAlwaysSaturates) {
  Rng rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    const BlochVector a = BlochVector::normalized(random_vec(rng));
    const Vec3 h = random_vec(rng, 2.0);
    const SaturationTag tag = classify({a, h, uniform(rng, -3.0, 3.0) * h, 0.0});
    ASSERT_FALSE(tag.degenerate);
    EXPECT_TRUE(tag.saturated());
    EXPECT_TRUE(tag.consistent);
  }
}
