#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "involute/bounds.hpp"
#include "involute/error.hpp"

using namespace involute;
using namespace involute::bounds;

namespace {

Rational power(const Rational& r, unsigned k) {
  Rational out(1);
  for (unsigned i = 0; i < k; ++i) out *= r;
  return out;
}

/// Evaluates sum_j coeffs[j] x^j exactly.
Rational horner(const std::vector<Rational>& coeffs, const Rational& x) {
  Rational acc(0);
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

}  // namespace

TEST(BoundConstant, SmallDegrees) {
  const auto k0 = bound_constant(2, 0);
  EXPECT_EQ(k0.r_exact, 1);
  EXPECT_TRUE(k0.verified);
  const auto k1 = bound_constant(1, 1);
  EXPECT_EQ(k1.r_exact, 1);
  EXPECT_EQ(k1.lambda, 1);
  const auto k2 = bound_constant(1, 2);
  EXPECT_GE(power(k2.r_exact, 2), 2);
  EXPECT_EQ(k2.lambda, 2);
  EXPECT_GE(power(bound_constant(1, 3).r_exact, 3), 4);
}

TEST(BoundConstant, WitnessSandwich) {
  const auto t2 = chebyshev_witness(2);
  EXPECT_EQ(t2.max_coefficient, 2);
  const auto t3 = chebyshev_witness(3);
  EXPECT_EQ(t3.max_coefficient, 4);
  EXPECT_EQ(chebyshev_witness(1).max_coefficient, 1);
  for (unsigned k = 1; k <= 20; ++k)
    for (NodeFamily fam : {NodeFamily::equispaced, NodeFamily::chebyshev}) {
      const auto report = bound_constant(1, k, fam);
      EXPECT_TRUE(report.verified) << k;
      EXPECT_TRUE(respects_witness(report, chebyshev_witness(k))) << k;
      EXPECT_GE(report.r, chebyshev_witness(k).lower_bound);
    }
}

TEST(BoundConstant, MonotoneInDegree) {
  for (std::size_t m = 1; m <= 3; ++m) {
    double prev = 1.0;
    for (unsigned k = 0; k <= 10; ++k) {
      const auto report = bound_constant(m, k);
      EXPECT_GE(report.r, prev);
      EXPECT_GE(report.r_exact, 1);
      prev = report.r;
    }
  }
}

TEST(InverseVandermonde, RecoversCoefficients) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> num(-20, 20);
  for (NodeFamily fam : {NodeFamily::equispaced, NodeFamily::chebyshev})
    for (unsigned k = 0; k <= 8; ++k) {
      const auto nodes = interpolation_nodes(k, fam);
      ASSERT_EQ(nodes.size(), k + 1);
      for (std::size_t i = 1; i < nodes.size(); ++i) EXPECT_LT(nodes[i - 1], nodes[i]);
      std::vector<Rational> coeffs;
      for (unsigned j = 0; j <= k; ++j) coeffs.emplace_back(num(rng), 7);
      for (auto& c : coeffs) c.canonicalize();
      const auto inv = inverse_vandermonde(nodes);
      for (unsigned j = 0; j <= k; ++j) {
        Rational got(0);
        for (unsigned i = 0; i <= k; ++i) got += inv[j][i] * horner(coeffs, nodes[i]);
        EXPECT_EQ(got, coeffs[j]);
      }
    }
}

TEST(VerifyBound, ZeroPolynomialAndMismatch) {
  RealPoly zero;
  zero.m = 2;
  zero.degree = 3;
  EXPECT_TRUE(verify_bound(zero, bound_constant(2, 3)).pass);

  RealPoly p;
  p.m = 1;
  p.degree = 3;
  p.values[MultiIndex{1}] = 1.0;
  try {
    (void)verify_bound(p, bound_constant(2, 3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::dimension_mismatch);
  }
}

TEST(VerifyBound, ChebyshevWitnessIsTightButSound) {
  for (unsigned k = 1; k <= 10; ++k) {
    const auto w = chebyshev_witness(k);
    const auto v = verify_bound(w.poly, bound_constant(1, k));
    EXPECT_TRUE(v.pass) << k;
    EXPECT_GE(v.exact_margin, 0);
  }
}

TEST(VerifyBound, RandomPolynomialsNeverViolate) {
  std::mt19937_64 rng(12);
  for (std::size_t m = 1; m <= 3; ++m)
    for (unsigned k : {1u, 2u, 5u, 8u}) {
      const auto report = bound_constant(m, k);
      for (int trial = 0; trial < 20; ++trial) {
        const auto v = verify_bound(random_poly(m, k, rng), report, m == 3 ? 16 : 64);
        EXPECT_TRUE(v.pass) << m << " " << k;
      }
    }
}

TEST(RescaleBound, Behaviour) {
  const auto base = bound_constant(1, 2);
  const auto same = rescale_bound(base, 1.0);
  EXPECT_EQ(same.r_exact, base.r_exact);
  const auto half = rescale_bound(base, Rational(1, 2));
  EXPECT_GE(half.r, 2.0);
  EXPECT_EQ(half.r_exact, base.r_exact * 2);
  EXPECT_EQ(half.eps, Rational(1, 2));
  const auto wide = rescale_bound(base, 3.0);
  EXPECT_EQ(wide.r_exact, base.r_exact);
  for (double bad : {0.0, -1.0}) {
    try {
      (void)rescale_bound(base, bad);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::nonpositive_eps);
    }
  }
}

TEST(RescaleBound, SoundOnSmallBox) {
  std::mt19937_64 rng(13);
  for (std::size_t m = 1; m <= 2; ++m)
    for (unsigned k : {2u, 4u, 6u}) {
      const auto report = rescale_bound(bound_constant(m, k), Rational(1, 4));
      for (int trial = 0; trial < 20; ++trial) EXPECT_TRUE(verify_bound(random_poly(m, k, rng), report).pass);
    }
}

TEST(NodeFamily, NamesRoundTrip) {
  for (NodeFamily f : {NodeFamily::equispaced, NodeFamily::chebyshev})
    EXPECT_EQ(parse_node_family(node_family_name(f)), f);
  EXPECT_THROW((void)parse_node_family("gauss"), Error);
  EXPECT_EQ(method_name(Method::interpolation), "INTERPOLATION");
}
