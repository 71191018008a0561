#include <gtest/gtest.h>

#include <random>

#include "helpers.hpp"
#include "involute/geometry.hpp"
#include "involute/solution.hpp"

using namespace involute;
using namespace involute::geometry;
using involute::test::poly;
using involute::test::q;

namespace {

ExactChartPoint point(std::pair<long, long> z, std::vector<long> s, std::vector<long> t) {
  ExactChartPoint p;
  p.z = {Rational(z.first), Rational(z.second)};
  for (long x : s) p.s.emplace_back(x);
  for (long x : t) p.t.emplace_back(x);
  return p;
}

ExactChartPoint random_point(std::size_t m, std::mt19937_64& rng, bool on_sigma) {
  ExactChartPoint p;
  p.z = {test::random_rational(rng), on_sigma ? Rational(0) : test::random_rational(rng)};
  while (!on_sigma && p.z.im == 0) p.z.im = test::random_rational(rng);
  for (std::size_t j = 0; j < m; ++j) {
    p.s.push_back(test::random_rational(rng));
    p.t.push_back(test::random_rational(rng));
  }
  return p;
}

}  // namespace

TEST(BlowDown, Examples) {
  const auto origin = blow_down(make_chart(2, 1), point({0, 0}, {0}, {0}));
  EXPECT_TRUE(origin[0].is_zero() && origin[1].is_zero());
  const auto b = blow_down(make_chart(2, 1), point({0, 1}, {1}, {2}));
  EXPECT_EQ(b[0], ExactComplex(Rational(0), Rational(1)));
  EXPECT_EQ(b[1], ExactComplex(Rational(1), Rational(2)));
  const auto c = blow_down(make_chart(2, 2), point({0, 1}, {1}, {2}));
  EXPECT_EQ(c[1], ExactComplex(Rational(0), Rational(1)));
  EXPECT_EQ(c[0], ExactComplex(Rational(1), Rational(2)));
}

TEST(BlowDown, InjectiveInTOffSigma) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    ExactChartPoint p = random_point(2, rng, false);
    ExactChartPoint r = p;
    r.t[1] += 1;
    EXPECT_NE(blow_down(make_chart(3, 1), p), blow_down(make_chart(3, 1), r));
  }
}

TEST(ChartTransition, IdentityAndRoundTrip) {
  std::mt19937_64 rng(2);
  const std::size_t n = 3;
  for (int trial = 0; trial < 50; ++trial) {
    ExactChartPoint p = random_point(n - 1, rng, false);
    for (auto& t : p.t)
      if (t == 0) t = 1;
    for (std::size_t from = 1; from <= n; ++from)
      for (std::size_t to = 1; to <= n; ++to) {
        const Chart a = make_chart(n, from), b = make_chart(n, to);
        const auto qp = chart_transition(a, b, p);
        EXPECT_EQ(blow_down(b, qp), blow_down(a, p));
        const auto back = chart_transition(b, a, qp);
        EXPECT_EQ(back.z, p.z);
        EXPECT_EQ(back.s, p.s);
        EXPECT_EQ(back.t, p.t);
      }
  }
}

TEST(ChartTransition, OutsideChart) {
  const auto p = point({1, 1}, {3}, {0});
  try {
    (void)chart_transition(make_chart(2, 1), make_chart(2, 2), p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::outside_chart);
  }
}

TEST(ChartTransition, KeepsSigma) {
  const auto p = point({2, 0}, {1}, {3});
  const auto qp = chart_transition(make_chart(2, 1), make_chart(2, 2), p);
  EXPECT_EQ(qp.z.im, 0);
  EXPECT_EQ(blow_down(make_chart(2, 2), qp), blow_down(make_chart(2, 1), p));
}

TEST(Frame, ApplyFieldExamples) {
  const Variables v = chart_variables(1);
  const Series w = poly(v, 4, {{{0, 0, 1, 0}, q(1)}, {{1, 0, 0, 1}, q(1)}});
  EXPECT_TRUE(apply_field(frame_field(2, 1), w).is_zero());
  EXPECT_TRUE(apply_field(frame_field(2, 0), w).is_zero());
  const Series t = poly(v, 4, {{{0, 0, 0, 1}, q(1)}});
  EXPECT_EQ(apply_field(frame_field(2, 1), t), Series::constant(v, 4, q(1)));
  const Series zbar = poly(v, 4, {{{0, 1, 0, 0}, q(1)}});
  EXPECT_EQ(apply_field(frame_field(2, 0), zbar), Series::constant(v, 4, q(1)));
}

TEST(Frame, PullbacksAreAnnihilated) {
  std::mt19937_64 rng(3);
  for (std::size_t m : {1u, 2u, 3u}) {
    const Series h = test::random_germ(m, 3, rng, 3);
    const Series f = solution::pullback(h, 6);
    for (const auto& field : frame(m + 1))
      EXPECT_TRUE(restrict_degree(apply_field(field, f), 5).is_zero());
  }
}

TEST(Involutivity, AllCommutatorsVanish) {
  EXPECT_TRUE(check_involutivity(1).empty());
  for (std::size_t n = 2; n <= 6; ++n) {
    const auto res = check_involutivity(n);
    EXPECT_EQ(res.size(), n * (n - 1) / 2);
    for (const auto& r : res) EXPECT_TRUE(r.vanishes()) << r.first << "," << r.second;
  }
}

TEST(Involutivity, NonCommutingFieldsAreDetected) {
  const Variables v = chart_variables(1);
  VectorField a{v, {Series(v, 2, Mode::exact), Series(v, 2, Mode::exact), Series(v, 2, Mode::exact),
                    Series::constant(v, 2, q(1))}};
  VectorField b{v, {Series(v, 2, Mode::exact), Series(v, 2, Mode::exact), poly(v, 2, {{{0, 0, 0, 1}, q(1)}}),
                    Series(v, 2, Mode::exact)}};
  const VectorField c = commutator(a, b);
  EXPECT_EQ(c.components[2], Series::constant(v, 2, q(1)));
}

TEST(Rank, JumpsOnSigma) {
  std::mt19937_64 rng(4);
  EXPECT_EQ(rank_v_cap_vbar(point({1, 0}, {1, 2}, {3, 4})), 2u);
  EXPECT_EQ(rank_v_cap_vbar(point({1, 1}, {1, 2}, {3, 4})), 0u);
  EXPECT_EQ(rank_v_cap_vbar(point({5, 0}, {}, {})), 0u);
  EXPECT_EQ(rank_v_cap_vbar(point({5, 3}, {}, {})), 0u);
  for (std::size_t n = 2; n <= 5; ++n)
    for (int trial = 0; trial < 10; ++trial) {
      EXPECT_EQ(rank_v_cap_vbar(random_point(n - 1, rng, true)), n - 1);
      EXPECT_EQ(rank_v_cap_vbar(random_point(n - 1, rng, false)), 0u);
    }
}

TEST(Rank, FloatVariantAgrees) {
  ChartPoint<double> on{{0.3, 0.0}, {0.1, -0.2}, {0.5, 0.7}};
  ChartPoint<double> off{{0.3, 0.25}, {0.1, -0.2}, {0.5, 0.7}};
  EXPECT_EQ(rank_v_cap_vbar(on), 2u);
  EXPECT_EQ(rank_v_cap_vbar(off), 0u);
}

TEST(Flag, OriginLift) {
  const auto fp = flag_lift(point({0, 0}, {0}, {0}));
  ASSERT_EQ(fp.line.size(), 3u);
  EXPECT_EQ(fp.line[0], ExactComplex(Rational(1)));
  EXPECT_TRUE(fp.line[1].is_zero() && fp.line[2].is_zero());
  EXPECT_TRUE(same_plane(fp.plane, {std::vector<Rational>{1, 0, 0}, std::vector<Rational>{0, 1, 0}}));
  const auto mu = mu_projection(fp);
  EXPECT_TRUE(mu[0].is_zero() && mu[1].is_zero());
}

TEST(Flag, MuAfterLiftIsBlowDown) {
  std::mt19937_64 rng(5);
  for (std::size_t n = 1; n <= 5; ++n)
    for (int trial = 0; trial < 20; ++trial) {
      const auto p = random_point(n - 1, rng, trial % 3 == 0);
      const auto fp = flag_lift(p);
      EXPECT_EQ(fp.line[0], ExactComplex(Rational(1)));
      EXPECT_EQ(fp.line[1], p.z);
      EXPECT_EQ(mu_projection(fp), blow_down(make_chart(n, 1), p));
      EXPECT_TRUE(line_in_plane(fp));
    }
}

TEST(Flag, NonRealLineDeterminesPlane) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = random_point(2, rng, false);
    const auto fp = flag_lift(p);
    const auto plane = plane_from_line(fp.line);
    ASSERT_TRUE(plane.has_value());
    EXPECT_TRUE(same_plane(*plane, fp.plane));
  }
  const auto real = flag_lift(random_point(2, rng, true));
  EXPECT_FALSE(plane_from_line(real.line).has_value());
}

TEST(Flag, AtInfinity) {
  FlagPoint<Rational> fp;
  fp.line = {ExactComplex(Rational(0)), ExactComplex(Rational(1))};
  try {
    (void)mu_projection(fp);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::at_infinity);
  }
}
