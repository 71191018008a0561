#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "involute/solution.hpp"

using namespace involute;
using namespace involute::solution;
using involute::test::poly;
using involute::test::q;

namespace {

const Variables chart1 = chart_variables(1);
const Variables germ1 = germ_variables(1);

Series s_series(std::size_t m, unsigned d, const test::Terms& terms) { return poly(s_variables(m), d, terms); }

/// Truncation of 1 / (1 - s / rho) at degree d.
Series geometric(const Rational& rho, unsigned d) {
  Series::Builder b(s_variables(1), d, Mode::exact);
  Rational c(1);
  for (unsigned k = 0; k <= d; ++k) {
    b.add(MultiIndex{k}, Coefficient(ExactComplex(c)));
    c /= rho;
  }
  return std::move(b).build();
}

}  // namespace

TEST(Pullback, Examples) {
  EXPECT_EQ(pullback(poly(germ1, 0, {{{0, 0}, q(5)}})), poly(chart1, 0, {{{0, 0, 0, 0}, q(5)}}));
  EXPECT_EQ(pullback(poly(germ1, 2, {{{0, 2}, q(1)}})),
            poly(chart1, 4, {{{0, 0, 2, 0}, q(1)}, {{1, 0, 1, 1}, q(2)}, {{2, 0, 0, 2}, q(1)}}));
  EXPECT_EQ(pullback(poly(germ1, 2, {{{1, 1}, q(1)}})),
            poly(chart1, 4, {{{1, 0, 1, 0}, q(1)}, {{2, 0, 0, 1}, q(1)}}));
}

TEST(VerifySolution, Examples) {
  const auto ok = verify_solution(pullback(poly(germ1, 3, {{{0, 3}, q(1)}, {{1, 1}, q(2)}})));
  EXPECT_TRUE(ok.all_zero());
  ASSERT_EQ(ok.norms.size(), 2u);
  EXPECT_EQ(ok.norms[0].first, "L0");

  const auto zbar = verify_solution(poly(chart1, 3, {{{0, 1, 0, 0}, q(1)}}));
  EXPECT_EQ(zbar.norms[0].second, 1);
  EXPECT_EQ(zbar.norms[1].second, 0);

  const auto t = verify_solution(poly(chart1, 3, {{{0, 0, 0, 1}, q(1)}}));
  EXPECT_EQ(t.norms[0].second, 0);
  EXPECT_EQ(t.norms[1].second, 1);
}

TEST(VerifySolution, IgnoresTruncationEdge) {
  // s + zt truncated at 1 loses zt; the residual -z sits at degree 1 = D.
  const Series f = truncated(pullback(poly(germ1, 1, {{{0, 1}, q(1)}}), 4), 1);
  EXPECT_TRUE(verify_solution(f).all_zero());
}

TEST(ReconstructB, Examples) {
  const Series w2 = pullback(poly(germ1, 2, {{{0, 2}, q(1)}}));
  const auto b = reconstruct_b(decompose_layers(w2));
  ASSERT_GE(b.b.size(), 3u);
  EXPECT_EQ(b.b[0], s_series(1, 4, {{{2}, q(1)}}));
  EXPECT_TRUE(b.b[1].is_zero());
  EXPECT_TRUE(b.b[2].is_zero());

  const auto c = reconstruct_b(decompose_layers(Series::constant(chart1, 3, q(4))));
  EXPECT_EQ(c.b[0], s_series(1, 3, {{{0}, q(4)}}));
  for (std::size_t k = 1; k < c.b.size(); ++k) EXPECT_TRUE(c.b[k].is_zero());
}

TEST(ReconstructB, FailingLayers) {
  try {
    (void)reconstruct_b(decompose_layers(poly(chart1, 3, {{{0, 0, 0, 1}, q(1)}})));
    FAIL();
  } catch (const NotASolution& e) {
    EXPECT_EQ(e.layer(), 0);
  }
  try {
    (void)reconstruct_b(decompose_layers(poly(chart1, 3, {{{0, 0, 1, 0}, q(1)}})));
    FAIL();
  } catch (const NotASolution& e) {
    EXPECT_EQ(e.layer(), 1);
  }
  try {
    (void)decompose_layers(poly(chart1, 3, {{{0, 1, 0, 0}, q(1)}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::zbar_dependence);
  }
}

TEST(AssembleGerm, Examples) {
  BSequence b{1, 2, {s_series(1, 2, {{{2}, q(1)}}), s_series(1, 1, {}), s_series(1, 0, {})}};
  EXPECT_EQ(assemble_germ(b), poly(germ1, 2, {{{0, 2}, q(1)}}));
  const auto coeffs = germ_coefficients(b);
  EXPECT_EQ(coeffs.at({0u, MultiIndex{2}}), q(2));

  BSequence c{1, 2, {s_series(1, 2, {{{0}, q(3)}}), s_series(1, 1, {}), s_series(1, 0, {})}};
  EXPECT_EQ(assemble_germ(c), poly(germ1, 2, {{{0, 0}, q(3)}}));

  BSequence z{1, 2, {s_series(1, 2, {}), s_series(1, 1, {{{0}, q(1)}}), s_series(1, 0, {})}};
  EXPECT_EQ(assemble_germ(z), poly(germ1, 2, {{{1, 0}, q(1)}}));
}

TEST(HypocomplexReconstruct, Examples) {
  const Series h = poly(germ1, 6, {{{0, 3}, q(1)}, {{1, 1}, q(1)}});
  EXPECT_EQ(hypocomplex_reconstruct(pullback(h, 6)), h);
  EXPECT_EQ(hypocomplex_reconstruct(Series::constant(chart1, 2, q(7))), poly(germ1, 2, {{{0, 0}, q(7)}}));
  try {
    (void)hypocomplex_reconstruct(poly(chart1, 3, {{{0, 0, 1, 0}, q(1)}}));
    FAIL();
  } catch (const NotASolution& e) {
    EXPECT_EQ(e.layer(), 1);
  }
}

TEST(HypocomplexReconstruct, RoundTripsBothWays) {
  std::mt19937_64 rng(7);
  for (std::size_t m : {1u, 2u, 3u}) {
    for (int trial = 0; trial < 8; ++trial) {
      const unsigned d = 1 + trial % 4;
      const Series h = test::random_germ(m, d, rng, 2 * d);
      const Series f = pullback(h, 2 * d);
      EXPECT_TRUE(verify_solution(f).all_zero());
      EXPECT_EQ(hypocomplex_reconstruct(f), h);
      EXPECT_EQ(restrict_degree(pullback(hypocomplex_reconstruct(f), 2 * d), 2 * d), f);
    }
  }
}

TEST(HypocomplexReconstruct, ClosedFormLayers) {
  std::mt19937_64 rng(8);
  const Series h = test::random_germ(2, 3, rng, 6);
  const auto layers = decompose_layers(pullback(h, 6));
  const auto b = reconstruct_b(layers);
  for (unsigned k = 0; k < layers.layers.size(); ++k)
    EXPECT_EQ(restrict_degree(closed_form_layer(b, k), 6 - k), layers.layers[k]);
}

TEST(Compatibility, Examples) {
  EXPECT_TRUE(check_compatibility(OneForm{{s_series(1, 3, {{{2}, q(1)}})}}).closed());
  EXPECT_TRUE(check_compatibility(OneForm{{s_series(2, 3, {{{0, 1}, q(1)}}), s_series(2, 3, {{{1, 0}, q(1)}})}})
                  .closed());
  const auto bad = check_compatibility(OneForm{{s_series(2, 3, {{{0, 1}, q(1)}}), s_series(2, 3, {})}});
  EXPECT_FALSE(bad.closed());
  EXPECT_EQ(bad.max_residual(), 1);
  try {
    (void)check_compatibility(OneForm{{s_series(1, 3, {})}}, Series::constant(chart1, 3, q(1)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::unsupported_inhomogeneity);
  }
}

TEST(InhomogeneousSolve, Examples) {
  EXPECT_EQ(inhomogeneous_solve(OneForm{{s_series(1, 3, {{{0}, q(1)}})}}, 3), poly(chart1, 3, {{{0, 0, 0, 1}, q(1)}}));
  EXPECT_EQ(inhomogeneous_solve(OneForm{{s_series(1, 3, {{{1}, q(1)}})}}, 3),
            poly(chart1, 3, {{{0, 0, 1, 1}, q(1)}, {{1, 0, 0, 2}, q(1, 2)}}));
  try {
    (void)inhomogeneous_solve(OneForm{{s_series(2, 3, {{{0, 1}, q(1)}}), s_series(2, 3, {})}}, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::not_closed);
  }
  try {
    (void)inhomogeneous_solve(OneForm{{s_series(1, 3, {{{3}, q(1)}})}}, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::truncation_too_small);
  }
}

TEST(RecoverInhomogeneity, Examples) {
  const auto v = recover_inhomogeneity(poly(chart1, 3, {{{0, 0, 1, 1}, q(1)}, {{1, 0, 0, 2}, q(1, 2)}}));
  ASSERT_EQ(v.m(), 1u);
  EXPECT_EQ(v.components[0], s_series(1, 2, {{{1}, q(1)}}));

  std::mt19937_64 rng(9);
  const auto zero = recover_inhomogeneity(pullback(test::random_germ(2, 3, rng, 3), 6));
  for (const auto& c : zero.components) EXPECT_TRUE(c.is_zero());

  try {
    (void)recover_inhomogeneity(poly(chart1, 3, {{{0, 0, 0, 2}, q(1)}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::not_pure_s);
  }
}

TEST(InhomogeneousSolve, GeneralSolutionAddsPullbacks) {
  std::mt19937_64 rng(10);
  const OneForm v{{s_series(2, 5, {{{0, 1}, q(2)}, {{1, 1}, q(1)}}), s_series(2, 5, {{{1, 0}, q(2)}, {{2, 0}, q(1, 2)}})}};
  const Series f = inhomogeneous_solve(v, 6);
  const Series g = add(f, pullback(test::random_germ(2, 3, rng, 3), 6));
  const auto a = recover_inhomogeneity(f);
  const auto b = recover_inhomogeneity(g);
  for (std::size_t j = 0; j < 2; ++j) EXPECT_EQ(a.components[j], b.components[j]);
}

TEST(Certificate, Examples) {
  const auto half = analyticity_certificate(geometric(Rational(2), 12));
  EXPECT_NEAR(half.m, 0.5, 0.1);
  const auto two = analyticity_certificate(geometric(Rational(1, 2), 12));
  EXPECT_NEAR(two.m, 2.0, 0.4);
  const auto c = analyticity_certificate(s_series(1, 3, {{{0}, q(5)}}));
  EXPECT_EQ(c.m, 0);
  EXPECT_EQ(c.c, 5);
  EXPECT_TRUE(c.argmax.empty());
  try {
    (void)analyticity_certificate(s_series(1, 3, {}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::empty_series);
  }
}

TEST(Certificate, ApproachesRadiusMonotonically) {
  for (const Rational rho : {Rational(1, 2), Rational(2)}) {
    const double target = 1.0 / rho.get_d();
    double prev = std::numeric_limits<double>::infinity();
    for (unsigned d : {8u, 12u, 16u}) {
      const double err = std::abs(analyticity_certificate(geometric(rho, d)).m - target);
      EXPECT_LE(err, prev);
      prev = err;
    }
  }
}
