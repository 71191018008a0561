#include <gtest/gtest.h>

#include <random>

#include "helpers.hpp"
#include "involute/series.hpp"
#include "involute/series_io.hpp"

using namespace involute;
using involute::test::poly;
using involute::test::q;

namespace {

const Variables chart1 = chart_variables(1);  // z, zbar, s1, t1

Series w_plus_zt() { return poly(chart1, 4, {{{0, 0, 1, 0}, q(1)}, {{1, 0, 0, 1}, q(1)}}); }

}  // namespace

TEST(MultiIndex, GradedLexOrder) {
  EXPECT_LT(MultiIndex({2, 0}), MultiIndex({0, 3}));
  EXPECT_LT(MultiIndex({0, 2}), MultiIndex({1, 1}));
  EXPECT_LT(MultiIndex({1, 1}), MultiIndex({2, 0}));
  EXPECT_EQ(MultiIndex({2, 3}).factorial(), 12);
  const auto all = indices_up_to(3, 4);
  EXPECT_EQ(all.size(), 35u);
  EXPECT_TRUE(std::is_sorted(all.begin(), all.end()));
}

TEST(Coefficient, MixedModesAreRejected) {
  const Coefficient a = q(1, 2);
  const Coefficient b(std::complex<double>(0.5, 0));
  try {
    (void)(a + b);
    FAIL() << "expected ModeMismatch";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::mode_mismatch);
  }
}

TEST(Coefficient, ExactValuesStayCanonical) {
  const Coefficient c = q(2, 4) + q(1, 4);
  EXPECT_EQ(c.exact().re.get_num(), 3);
  EXPECT_EQ(c.exact().re.get_den(), 4);
}

TEST(SeriesAdd, AdditiveInverseIsEmpty) {
  const Series z = Series::variable(chart1, 4, Mode::exact, "z");
  const Series sum = add(z, neg(z));
  EXPECT_TRUE(sum.is_zero());
  EXPECT_EQ(sum.size(), 0u);
}

TEST(SeriesAdd, DirectSum) {
  const Series a = poly(chart1, 4, {{{0, 0, 0, 0}, q(1)}, {{1, 0, 0, 0}, q(1)}});
  const Series b = poly(chart1, 4, {{{1, 0, 0, 0}, q(1)}});
  EXPECT_EQ(add(a, b), poly(chart1, 4, {{{0, 0, 0, 0}, q(1)}, {{1, 0, 0, 0}, q(2)}}));
}

TEST(SeriesAdd, TermwiseAgainstOracle) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Series p = test::random_series(chart1, 6, 6, rng);
    const Series r = test::random_series(chart1, 6, 6, rng);
    const Series s = add(p, r);
    for (const MultiIndex& e : indices_up_to(4, 6))
      EXPECT_EQ(s.coefficient(e), p.coefficient(e) + r.coefficient(e));
  }
}

TEST(SeriesAdd, TruncatesToSmallerAndChecksVariables) {
  const Series a = poly(chart1, 6, {{{3, 0, 0, 0}, q(1)}});
  const Series b = poly(chart1, 2, {{{1, 0, 0, 0}, q(1)}});
  EXPECT_EQ(add(a, b).truncation(), 2u);
  EXPECT_TRUE(add(a, b) == b);
  const Series g = Series::variable(germ_variables(1), 2, Mode::exact, "z");
  EXPECT_THROW(add(a, g), Error);
}

TEST(SeriesMul, SquareOfW) {
  const Series w = w_plus_zt();
  const Series expected =
      poly(chart1, 4, {{{0, 0, 2, 0}, q(1)}, {{1, 0, 1, 1}, q(2)}, {{2, 0, 0, 2}, q(1)}});
  EXPECT_EQ(mul(w, w), expected);
}

TEST(SeriesMul, IdentityAndAnnihilator) {
  std::mt19937_64 rng(3);
  const Series p = test::random_series(chart1, 5, 5, rng);
  EXPECT_EQ(mul(p, Series::constant(chart1, 5, q(1))), p);
  EXPECT_TRUE(mul(p, Series(chart1, 5, Mode::exact)).is_zero());
}

TEST(SeriesMul, TruncationDropsHighTerms) {
  const Series a = poly(chart1, 3, {{{2, 0, 0, 0}, q(1)}});
  EXPECT_TRUE(mul(a, a).is_zero());
}

TEST(SeriesRing, AxiomsOnRandomInstances) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const Series a = test::random_series(chart1, 6, 3, rng);
    const Series b = test::random_series(chart1, 6, 3, rng);
    const Series c = test::random_series(chart1, 6, 3, rng);
    EXPECT_EQ(add(add(a, b), c), add(a, add(b, c)));
    EXPECT_EQ(mul(a, add(b, c)), add(mul(a, b), mul(a, c)));
    EXPECT_EQ(mul(a, b), mul(b, a));
  }
}

TEST(SeriesDerive, TermCalculus) {
  const Series f = mul(w_plus_zt(), w_plus_zt());
  const Series expected = poly(chart1, 4, {{{1, 0, 1, 0}, q(2)}, {{2, 0, 0, 1}, q(2)}});
  EXPECT_EQ(derive(f, "t1"), expected);
  EXPECT_EQ(derive(f, "t1").truncation(), 4u);
  EXPECT_TRUE(derive(poly(chart1, 4, {{{3, 0, 0, 0}, q(1)}}), "zbar").is_zero());
  EXPECT_TRUE(derive(Series::constant(chart1, 4, q(7)), "s1").is_zero());
  EXPECT_THROW(derive(f, "u"), Error);
}

TEST(SeriesDerive, CommuteAndLeibniz) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const Series a = test::random_series(chart1, 8, 4, rng);
    const Series b = test::random_series(chart1, 8, 3, rng);
    EXPECT_EQ(derive(derive(a, "s1"), "t1"), derive(derive(a, "t1"), "s1"));
    for (const char* v : {"z", "zbar", "s1", "t1"})
      EXPECT_EQ(derive(mul(a, b), v), add(mul(derive(a, v), b), mul(a, derive(b, v))));
  }
}

TEST(Substitute, HandExpansions) {
  const Variables g = germ_variables(1);
  const Series w2 = poly(g, 2, {{{0, 2}, q(1)}});
  EXPECT_EQ(substitute(w2, 4), mul(w_plus_zt(), w_plus_zt()));
  EXPECT_EQ(substitute(poly(g, 1, {{{1, 0}, q(1)}}), 4), poly(chart1, 4, {{{1, 0, 0, 0}, q(1)}}));
  EXPECT_EQ(substitute(poly(g, 0, {{{0, 0}, q(3, 2)}}), 4), poly(chart1, 4, {{{0, 0, 0, 0}, q(3, 2)}}));
}

TEST(Substitute, RefusesLowerTruncation) {
  const Series w2 = poly(germ_variables(1), 4, {{{0, 2}, q(1)}});
  try {
    (void)substitute(w2, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::truncation_too_small);
  }
}

TEST(Substitute, LayersAreTriangularInT) {
  std::mt19937_64 rng(21);
  for (std::size_t m : {1u, 2u}) {
    for (int trial = 0; trial < 10; ++trial) {
      const Series h = test::random_germ(m, 4, rng, 4);
      const Series f = substitute(h, 8);
      for (unsigned k = 0; k <= 8; ++k) {
        const Series a = extract_layer(f, "z", k);
        for (const auto& [e, c] : a.terms()) {
          unsigned tdeg = 0;
          for (std::size_t j = 0; j < m; ++j) tdeg += e[1 + m + j];
          EXPECT_LE(tdeg, k);
        }
      }
    }
  }
}

TEST(Eval, DirectSubstitution) {
  const auto point = test::exact_point({{0, 1}, {0, -1}, {1, 0}, {2, 0}});
  EXPECT_EQ(eval(w_plus_zt(), point), test::cq(1, 2));
  EXPECT_TRUE(eval(Series(chart1, 4, Mode::exact), point).is_zero());
  EXPECT_THROW(eval(w_plus_zt(), std::vector<Coefficient>(3, q(0))), Error);
}

TEST(Eval, MatchesNaiveSumAndIsHomomorphism) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const Series p = test::random_series(chart1, 6, 3, rng);
    const Series r = test::random_series(chart1, 6, 3, rng);
    std::vector<Coefficient> point;
    for (int i = 0; i < 4; ++i)
      point.emplace_back(ExactComplex(test::random_rational(rng), test::random_rational(rng)));
    Coefficient naive = q(0);
    for (const auto& [e, c] : p.terms()) {
      Coefficient term = c;
      for (std::size_t v = 0; v < 4; ++v)
        for (unsigned k = 0; k < e[v]; ++k) term = term * point[v];
      naive = naive + term;
    }
    EXPECT_EQ(eval(p, point), naive);
    EXPECT_EQ(eval(mul(p, r), point), eval(p, point) * eval(r, point));
    EXPECT_EQ(eval(add(p, r), point), eval(p, point) + eval(r, point));
  }
}

TEST(ExtractLayer, HandExpansion) {
  const Series f = mul(w_plus_zt(), w_plus_zt());
  const Variables rest{"zbar", "s1", "t1"};
  EXPECT_EQ(extract_layer(f, "z", 0), poly(rest, 4, {{{0, 2, 0}, q(1)}}));
  EXPECT_EQ(extract_layer(f, "z", 1), poly(rest, 3, {{{0, 1, 1}, q(2)}}));
  EXPECT_EQ(extract_layer(f, "z", 2), poly(rest, 2, {{{0, 0, 2}, q(1)}}));
  EXPECT_TRUE(extract_layer(f, "z", 3).is_zero());
  EXPECT_THROW(extract_layer(f, "z", 5), Error);
  EXPECT_THROW(extract_layer(f, "y", 0), Error);
}

TEST(ExtractLayer, ReassemblyRoundTrip) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    const Series f = test::random_series(chart1, 5, 5, rng);
    Series sum(chart1, 5, Mode::exact);
    const Series z = Series::variable(chart1, 5, Mode::exact, "z");
    Series zk = Series::constant(chart1, 5, q(1));
    for (unsigned k = 0; k <= 5; ++k) {
      sum = add(sum, mul(zk, embed(extract_layer(f, "z", k), chart1, 5)));
      zk = mul(zk, z);
    }
    EXPECT_EQ(sum, f);
  }
}

TEST(SubstituteAffine, MatchesDirectComposition) {
  const Variables amb = ambient_variables(2);
  const Series h = poly(amb, 2, {{{1, 1}, q(1)}});  // z1 z2
  // z1 = 1 + z, z2 = w1 - z
  const std::vector<Coefficient> offset{q(1), q(0)};
  const std::vector<std::vector<Coefficient>> matrix{{q(1), q(0)}, {q(-1), q(1)}};
  const Series out = substitute_affine(h, germ_variables(1), offset, matrix, 2);
  const Series expected =
      poly(germ_variables(1), 2, {{{1, 0}, q(-1)}, {{0, 1}, q(1)}, {{2, 0}, q(-1)}, {{1, 1}, q(1)}});
  EXPECT_EQ(out, expected);
}

TEST(SeriesIo, RoundTripIsByteStable) {
  std::mt19937_64 rng(2);
  const Series f = test::random_series(chart1, 5, 5, rng);
  const std::string text = series_to_string(f);
  const Series back = series_from_string(text);
  EXPECT_EQ(back, f);
  EXPECT_EQ(series_to_string(back), text);
}

TEST(SeriesIo, FloatRoundTrip) {
  const Series f = poly(chart1, 3, {{{1, 0, 0, 0}, q(1, 3)}}, Mode::floating);
  EXPECT_EQ(series_from_string(series_to_string(f)), f);
}

TEST(SeriesIo, RejectsMalformedDocuments) {
  const char* bad[] = {
      R"({"variables":["z"],"truncation":2,"mode":"exact","terms":[{"exp":[1],"re":"1/1","im":"0/1"},{"exp":[1],"re":"2/1","im":"0/1"}]})",
      R"({"variables":["z"],"truncation":2,"mode":"exact","terms":[{"exp":[1],"re":"2/4","im":"0/1"}]})",
      R"({"variables":["z"],"truncation":2,"mode":"exact","terms":[{"exp":[3],"re":"1/1","im":"0/1"}]})",
      R"({"variables":["z"],"truncation":2,"mode":"exact","terms":[{"exp":[1,0],"re":"1/1","im":"0/1"}]})",
      R"({"variables":["z"],"truncation":2,"mode":"exact"})",
      R"({"variables":["z"],"truncation":2,"mode":"exact","terms":[{"exp":[1],"re":"1/0","im":"0/1"}]})",
      R"(not json)",
  };
  for (const char* text : bad) {
    try {
      (void)series_from_string(text);
      ADD_FAILURE() << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::parse_error) << text;
    }
  }
}

TEST(SeriesIo, CanonicalTermOrder) {
  const Series f = poly(chart1, 4, {{{0, 0, 0, 2}, q(1)}, {{1, 0, 0, 0}, q(1)}, {{0, 0, 1, 0}, q(1)}});
  const auto doc = series_to_json(f);
  ASSERT_EQ(doc["terms"].size(), 3u);
  EXPECT_EQ(doc["terms"][0]["exp"], nlohmann::json({0, 0, 1, 0}));
  EXPECT_EQ(doc["terms"][1]["exp"], nlohmann::json({1, 0, 0, 0}));
  EXPECT_EQ(doc["terms"][2]["exp"], nlohmann::json({0, 0, 0, 2}));
}
