#include <gtest/gtest.h>

#include <cmath>

#include <sublyap/classifier.hpp>

#include "test_support.hpp"

using namespace sublyap;
using sublyap::test::expect_error;

namespace {

const double log_sqrt2 = 0.5 * std::log(2.0);
const char* const rudin_shapiro = "a->ab;b->aB;B->Ab;A->AB";

bool has_caveat(const SpectralReport& r, std::string_view needle) {
  for (const auto& c : r.caveats)
    if (c.find(needle) != std::string::npos) return true;
  return false;
}

CocycleConfig config(std::size_t iters, std::size_t samples) {
  CocycleConfig c;
  c.iters = iters;
  c.samples = samples;
  return c;
}

}  // namespace

TEST(Classify, ThueMorse) {
  const auto r = classify(parse("a->ab;b->ba"));
  EXPECT_EQ(r.verdict, Verdict::no_ac_component);
  EXPECT_EQ(r.annotation, Verdict::singular_continuous_bijective);
  ASSERT_TRUE(r.exponents_closed);
  EXPECT_NEAR(r.exponents_closed->chi_min, log_sqrt2, 1e-12);
  EXPECT_EQ(r.column_class, ColumnClass::bijective);
  EXPECT_EQ(r.ida_dimension, 2u);
  ASSERT_TRUE(r.mahler);
  EXPECT_TRUE(r.mahler->kronecker);
  EXPECT_EQ(r.mahler->value, 0.0);
  EXPECT_TRUE(has_caveat(r, "aperiodicity is assumed"));
  EXPECT_FALSE(r.exponents_numeric);
}

TEST(Classify, PeriodDoubling) {
  const auto r = classify(parse("a->ab;b->aa"));
  EXPECT_EQ(r.verdict, Verdict::no_ac_component);
  EXPECT_EQ(r.annotation, Verdict::pure_point_by_coincidence);
  EXPECT_NEAR(r.exponents_closed->chi_min, log_sqrt2, 1e-12);
  EXPECT_TRUE(has_caveat(r, "height 1"));
  EXPECT_EQ(r.ida_type, IdaType::pd_type);
}

TEST(Classify, Degenerate) {
  const auto r = classify(parse("a->ab;b->ab"));
  EXPECT_EQ(r.verdict, Verdict::periodic_degenerate);
  EXPECT_TRUE(has_caveat(r, "method inapplicable"));
  EXPECT_FALSE(r.exponents_closed);
}

TEST(Classify, Errors) {
  expect_error(error_kind::not_primitive, [] { classify(parse("a->ab;b->bb")); });
  expect_error(error_kind::not_binary, [] { classify(parse(rudin_shapiro)); });
}

TEST(Classify, MahlerMethodsReported) {
  const auto r = classify(parse("a->abbab;b->baaba"));
  ASSERT_TRUE(r.mahler && r.mahler->quadrature_value);
  EXPECT_NEAR(r.mahler->roots_value, *r.mahler->quadrature_value, 1e-6);
  EXPECT_FALSE(r.mahler->kronecker);
  EXPECT_LT(std::exp(r.mahler->value), r.mahler->l1);
  EXPECT_DOUBLE_EQ(r.mahler->l2, std::sqrt(5.0));
}

TEST(Classify, PeriodicityWarningIsHeuristic) {
  const auto r = classify(parse("a->aba;b->bab"));
  EXPECT_TRUE(has_caveat(r, "looks periodic"));
  EXPECT_EQ(r.verdict, Verdict::no_ac_component);
}

TEST(Classify, NumericAgreementForGappedRule) {
  const auto r = classify(parse("a->abbab;b->baaba"), config(2000, 100));
  ASSERT_TRUE(r.exponents_numeric);
  EXPECT_EQ(r.verdict, Verdict::no_ac_component);
  EXPECT_TRUE(r.config);
}

TEST(Classify, NumericDisagreementDowngrades) {
  for (const char* rules : {"a->ab;b->ba", "a->ab;b->aa", "a->abbab;b->baaba"}) {
    const auto r = classify(parse(rules), config(2000, 100));
    ASSERT_TRUE(r.exponents_numeric);
    const auto& c = *r.exponents_closed;
    const auto& n = *r.exponents_numeric;
    const bool agree = std::abs(n.chi_min - c.chi_min) <= 3 * n.stderr_min &&
                       std::abs(n.chi_max - c.chi_max) <= 3 * n.stderr_max;
    EXPECT_EQ(r.verdict == Verdict::inconclusive, !agree) << rules;
    EXPECT_EQ(has_caveat(r, "3 standard errors"), !agree) << rules;
  }
}

TEST(Classify, VerdictInvariantsExhaustive) {
  for (std::size_t L = 2; L <= 4; ++L)
    for (const auto& s : test::binary_rules(L, false)) {
      if (!is_primitive(s)) continue;
      const auto r = classify(s);
      EXPECT_EQ(r.verdict == Verdict::periodic_degenerate, classify_columns(s) == ColumnClass::degenerate);
      if (r.verdict == Verdict::no_ac_component) {
        EXPECT_GT(r.exponents_closed->chi_min, 0.0);
      }
      EXPECT_EQ(r.verdict == Verdict::periodic_degenerate ? Verdict::periodic_degenerate : Verdict::no_ac_component,
                r.verdict)
          << s.to_rule_string();
    }
}

TEST(ClassifyNary, RudinShapiroWithPairing) {
  const auto s = parse(rudin_shapiro);
  const auto r = classify_nary(s, parse_pairing(s, "a:A,b:B"), config(1000, 20));
  ASSERT_EQ(r.blocks.size(), 2u);
  EXPECT_EQ(r.blocks[0].name, "C");
  EXPECT_FALSE(r.blocks[0].invertible);
  EXPECT_FALSE(r.blocks[0].exponents);
  EXPECT_EQ(r.blocks[1].name, "D");
  EXPECT_TRUE(r.blocks[1].invertible);
  ASSERT_TRUE(r.blocks[1].exponents);
  EXPECT_NEAR(r.blocks[1].exponents->chi_min, 0.0, 1e-8);
  EXPECT_NEAR(r.blocks[1].exponents->chi_max, 0.0, 1e-8);
  EXPECT_LT(r.blocks[1].unitarity_residual, 1e-12);
  EXPECT_EQ(r.verdict, Verdict::inconclusive);
  EXPECT_TRUE(has_caveat(r, "block C"));
}

TEST(ClassifyNary, WithoutPairingSingularFamily) {
  // The full RS matrix has a zero eigenvalue for every k.
  const auto s = parse(rudin_shapiro);
  expect_error(error_kind::singular_family, [&] { classify_nary(s, std::nullopt, config(100, 4)); });
}

TEST(ClassifyNary, FourLettersWithoutSymmetry) {
  const auto s = parse("a->abcd;b->bdac;c->cadb;d->dcba");
  const auto r = classify_nary(s, std::nullopt, config(500, 20));
  ASSERT_EQ(r.blocks.size(), 1u);
  EXPECT_TRUE(r.blocks[0].invertible);
  ASSERT_TRUE(r.blocks[0].exponents);
  EXPECT_LE(r.blocks[0].exponents->chi_min, r.blocks[0].exponents->chi_max);
  EXPECT_TRUE(r.verdict == Verdict::no_ac_component || r.verdict == Verdict::inconclusive);
}

TEST(ClassifyNary, Errors) {
  expect_error(error_kind::invalid_argument, [] { classify_nary(parse("a->ab;b->ba"), std::nullopt, CocycleConfig{}); });
  expect_error(error_kind::not_primitive,
               [] { classify_nary(parse("a->ab;b->bb;c->cc"), std::nullopt, CocycleConfig{}); });
  const auto s = parse(rudin_shapiro);
  expect_error(error_kind::no_such_symmetry,
               [&] { classify_nary(s, parse_pairing(s, "a:b,A:B"), CocycleConfig{}); });
}

TEST(Scan, LengthTwo) {
  const auto res = scan(2);
  EXPECT_EQ(res.enumerated, 16u);
  EXPECT_EQ(res.admissible, 6u);
  for (const auto& row : res.rows) {
    EXPECT_NEAR(row.chi_min, log_sqrt2, 1e-12) << row.rules;
    EXPECT_TRUE(row.kronecker);
  }
}

TEST(Scan, CountsAndMinimaMatchIndependentEnumeration) {
  // Frozen from an independent sympy/mpmath enumeration.
  struct Expect {
    std::size_t L, admissible, canonical;
    double min_chi_min;
  };
  for (const auto& e : {Expect{2, 6, 4, 0.346573590279973}, Expect{3, 42, 24, 0.0680943192744514},
                        Expect{4, 210, 112, 0.0837693171239391}, Expect{5, 930, 480, 0.0375217379657307}}) {
    const auto res = scan(e.L);
    EXPECT_EQ(res.admissible, e.admissible) << e.L;
    EXPECT_EQ(res.rows.size(), e.canonical) << e.L;
    EXPECT_NEAR(res.min_chi_min, e.min_chi_min, 1e-12) << e.L;
    EXPECT_TRUE(res.all_positive);
    EXPECT_TRUE(res.all_jensen_bounds);
  }
}

TEST(Scan, ContainsExampleRules) {
  const auto res = scan(5);
  auto find = [&](const std::string& rules) -> const ScanRow* {
    for (const auto& r : res.rows)
      if (r.rules == rules) return &r;
    return nullptr;
  };
  const auto* bij = find("a->abbab;b->baaba");
  ASSERT_NE(bij, nullptr);
  EXPECT_NEAR(bij->chi_min, 0.226273571961784, 1e-12);
  const auto* coincident = find("a->abbab;b->aaaba");
  ASSERT_NE(coincident, nullptr);
  EXPECT_NEAR(coincident->chi_min, 0.195341092781044, 1e-12);
}

TEST(Scan, MonomialSubcase) {
  for (std::size_t L = 2; L <= 5; ++L)
    for (const auto& row : scan(L).rows) {
      const std::size_t coincidences = row.card_ca + row.card_cb;
      EXPECT_EQ(coincidences == L - 1, row.q_minus_r.is_monomial()) << row.rules;
      if (row.q_minus_r.is_monomial()) {
        EXPECT_EQ(row.mahler, 0.0);
      }
    }
}

TEST(Scan, BudgetGuard) {
  expect_error(error_kind::invalid_argument, [] { scan(1); });
  expect_error(error_kind::invalid_argument, [] { scan(7); });
}
