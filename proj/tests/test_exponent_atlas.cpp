#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "sdw/errors.hpp"
#include "sdw/exponent_atlas.hpp"

using namespace sdw;
using R = Rational;

namespace {

ExactParams exact(int n, R m, R d1, R d2, R p, R q) { return ExactParams{n, m, d1, d2, p, q}; }

bool has_note(const RegionVerdict& v, const std::string& text) {
  for (const auto& n : v.notes)
    if (n == text) return true;
  return false;
}

// Random rational point in the hypothesis domains.
ExactParams random_point(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> nd(1, 6), dd(0, 12), md(0, 11), pq(11, 120);
  return exact(nd(rng), R(1) + R(md(rng), 12), R(dd(rng), 24), R(dd(rng), 24), R(pq(rng), 10), R(pq(rng), 10));
}

}  // namespace

TEST(Thm11, Examples) {
  auto a = check_thm11(exact(3, 1, R(1, 2), R(1, 2), 2, 3));
  EXPECT_EQ(a.verdict, Verdict::GlobalExistence);
  EXPECT_EQ(a.theorem, Theorem::Thm11);
  ASSERT_NE(a.find("1.7"), nullptr);
  EXPECT_DOUBLE_EQ(a.find("1.7")->margin, 0.2);
  EXPECT_TRUE(a.find("1.7")->strict);

  auto b = check_thm11(exact(3, 1, R(1, 2), R(1, 2), 3, 3));
  EXPECT_NE(b.verdict, Verdict::GlobalExistence);
  EXPECT_FALSE(b.find("1.8a")->holds);
  EXPECT_DOUBLE_EQ(b.find("1.8a")->margin, -1.0);

  auto c = check_thm11(exact(3, 1, R(1, 4), R(1, 2), 2, 3));
  EXPECT_FALSE(c.find("delta1>=delta2")->holds);
  EXPECT_NE(c.verdict, Verdict::GlobalExistence);
}

TEST(Thm12, MirrorsThm11) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 2000; ++i) {
    const ExactParams p = random_point(rng);
    const auto a = check_thm11(p);
    const auto b = check_thm12(p.swapped());
    EXPECT_EQ(a.verdict, b.verdict);
    ASSERT_EQ(a.checks.size(), b.checks.size());
    for (std::size_t k = 0; k < a.checks.size(); ++k) EXPECT_EQ(a.checks[k].holds, b.checks[k].holds);
  }
  auto m = check_thm12(exact(3, 1, R(1, 2), R(1, 2), 3, 2));
  EXPECT_EQ(m.theorem, Theorem::Thm12);
  EXPECT_NE(m.find("1.10"), nullptr);
  EXPECT_NE(m.find("1.11c"), nullptr);
}

TEST(BlowUp, Examples) {
  auto a = check_blowup(exact(2, 1, 0, 0, 2, 2));
  EXPECT_EQ(a.verdict, Verdict::BlowUp);
  EXPECT_EQ(a.theorem, Theorem::Thm13);
  EXPECT_EQ(a.find("1.14")->margin, 0.0);
  EXPECT_FALSE(a.find("1.14")->strict);
  EXPECT_TRUE(has_note(a, "critical boundary of the blow-up condition"));

  auto b = check_blowup(exact(2, R(3, 2), R(1, 4), R(1, 4), 2, 2));
  EXPECT_EQ(b.verdict, Verdict::BlowUp);
  EXPECT_EQ(b.theorem, Theorem::Thm14);
  EXPECT_NEAR(b.find("1.19")->margin, 1.0 - 5.0 / 12.0, 1e-15);

  auto c = check_blowup(exact(10, 1, 0, 0, 10, 10));
  EXPECT_NE(c.verdict, Verdict::BlowUp);

  // delta2 > delta1 reads the mirrored form.
  auto d = check_blowup(exact(2, 1, 0, R(1, 4), 2, 2));
  EXPECT_NE(d.find("1.15"), nullptr);
  EXPECT_EQ(d.find("1.14"), nullptr);
}

TEST(BlowUp, Thm14CriticalValueIsOpen) {
  // (n - 2 m delta)/(2m) = (1 + max)/(pq - 1): n = 2, m = 3/2, delta = 1/6 gives 1/2,
  // and p = q = 3 gives 1/(q - 1) = 1/2.
  auto v = check_blowup(exact(2, R(3, 2), R(1, 6), R(1, 6), 3, 3));
  ASSERT_NE(v.find("1.19"), nullptr);
  EXPECT_EQ(v.find("1.19")->margin, 0.0);
  EXPECT_FALSE(v.find("1.19")->holds);
  EXPECT_TRUE(has_note(v, "critical value of the large-m blow-up condition: open case, not classified"));
  EXPECT_NE(v.theorem, Theorem::Thm14);
}

TEST(Classify, PrecedenceAndLabels) {
  auto a = classify(exact(3, 1, R(1, 2), R(1, 2), 2, 3));
  EXPECT_EQ(a.label(), "GlobalExistence(Thm11)");
  EXPECT_NE(a.find("Thm12/1.10"), nullptr);
  EXPECT_NE(a.find("blowup/1.14"), nullptr);
  EXPECT_EQ(classify(exact(2, 1, 0, 0, 2, 2)).label(), "BlowUp(Thm13)");
  auto u = classify(exact(3, 1, R(1, 2), R(1, 2), 3, 3));
  EXPECT_EQ(u.label(), "Undetermined");
  EXPECT_TRUE(has_note(u, "no theorem covers this point"));
  EXPECT_THROW(classify(exact(3, 1, R(7, 10), 0, 2, 2)), InvalidInput);
}

TEST(Classify, NoContradiction) {
  std::mt19937_64 rng(2024);
  int ge = 0, bu = 0;
  for (int i = 0; i < 100000; ++i) {
    const ExactParams p = random_point(rng);
    const bool exist = check_thm11(p).verdict == Verdict::GlobalExistence ||
                       check_thm12(p).verdict == Verdict::GlobalExistence;
    const bool blow = check_blowup(p).verdict == Verdict::BlowUp;
    ASSERT_FALSE(exist && blow) << "n=" << p.n << " m=" << p.m << " d1=" << p.delta1 << " d2=" << p.delta2
                                << " p=" << p.p << " q=" << p.q;
    ge += exist;
    bu += blow;
  }
  EXPECT_GT(ge, 100);
  EXPECT_GT(bu, 100);
}

TEST(Classify, FloatingAgreesWithExact) {
  std::mt19937_64 rng(77);
  int floating = 0;
  for (int i = 0; i < 20000; ++i) {
    const ExactParams p = random_point(rng);
    const RegionVerdict f = classify(to_double(p));
    floating += !f.exact;
    // Same input either way: the rounded doubles, taken as exact rationals.
    EXPECT_EQ(f.label(), classify(to_exact(to_double(p))).label());
  }
  EXPECT_GT(floating, 10000);
}

TEST(Classify, BoundaryReResolvedExactly) {
  // (1.7) margin is exactly 0 at n = 2, delta = 0, p = q = 2.
  const auto v = classify(SystemParams{2, 1.0, 0.0, 0.0, 2.0, 2.0});
  EXPECT_TRUE(v.exact);
  EXPECT_EQ(v.label(), "BlowUp(Thm13)");
}

TEST(Criticality, PartitionAtUnitM) {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> nd(1, 3), dd(0, 8), pq(11, 60);
  int tested = 0;
  for (int i = 0; i < 100000; ++i) {
    R d1(dd(rng), 24), d2(dd(rng), 24);
    if (d2 > d1) std::swap(d1, d2);
    const ExactParams p = exact(nd(rng), 1, d1, d2, R(pq(rng), 10), R(pq(rng), 10));
    const auto t = check_thm11(p);
    bool gates = true;
    for (const char* id : {"delta1>=delta2", "n>2*m0*delta1", "1.8a", "1.8b", "1.8c"})
      gates = gates && t.find(id)->holds;
    const ConditionCheck* size = t.find("1.5") ? t.find("1.5") : t.find("1.6");
    if (!gates || !size->holds) continue;
    ++tested;
    const bool c17 = t.find("1.7")->holds;
    const bool c114 = check_blowup(p).find("1.14")->holds;
    ASSERT_NE(c17, c114) << "n=" << p.n << " d1=" << d1 << " d2=" << d2 << " p=" << p.p << " q=" << p.q;
    if (d1 == d2) {
      EXPECT_TRUE(criticality_partition(p));
    }
  }
  EXPECT_GT(tested, 1000);
}

TEST(Reduction, ClassicalFormsOnLattice) {
  for (int n = 1; n <= 5; ++n)
    for (int i = 1; i <= 20; ++i)
      for (int j = 1; j <= 20; ++j) {
        const R p = R(1) + R(i, 5), q = R(1) + R(j, 5);
        const auto a = reduction_identity(exact(n, 1, R(1, 2), R(1, 2), p, q));
        EXPECT_EQ(a.difference, R(0));
        EXPECT_TRUE(a.equivalent);
        EXPECT_EQ(a.reference, "(1+max{p,q})/(pq-1) < (n-1)/2");
        const auto b = reduction_identity(exact(n, 1, 0, 0, p, q));
        EXPECT_EQ(b.difference, R(0));
        EXPECT_EQ(b.reference, "(1+max{p,q})/(pq-1) < n/2");
      }
  const auto c = reduction_identity(exact(3, 1, R(1, 2), R(1, 2), 2, 3));
  EXPECT_GT(c.combined_margin, 0.0);
  EXPECT_GT(c.reference_margin, 0.0);
  const auto d = reduction_identity(exact(2, 1, 0, 0, 2, 2));
  EXPECT_EQ(d.combined_margin, 0.0);
  EXPECT_EQ(d.reference_margin, 0.0);
  EXPECT_THROW(reduction_identity(exact(2, 1, R(1, 4), 0, 2, 2)), InvalidInput);
}

TEST(Sweep, SingleCellMatchesClassify) {
  const SystemParams t{3, 1.0, 0.5, 0.5, 2.0, 2.0};
  const auto cells = sweep(t, 1.0, 2.0, 1.0, 3.0, 1, 1);
  ASSERT_EQ(cells.size(), 1u);
  EXPECT_EQ(cells[0].p, 2.0);
  EXPECT_EQ(cells[0].q, 3.0);
  SystemParams s = t;
  s.q = 3.0;
  EXPECT_EQ(cells[0].verdict.label(), classify(s).label());
  EXPECT_DOUBLE_EQ(cells[0].margin_17, 0.2);
}

TEST(Sweep, BoundaryFollowsAnalyticCurve) {
  const SystemParams t{3, 1.0, 0.5, 0.5, 2.0, 2.0};
  const int res = 100;
  const auto cells = sweep(t, 1.0, 4.0, 1.0, 4.0, res, res, 2);
  ASSERT_EQ(cells.size(), static_cast<std::size_t>(res * res));
  auto g = [](double p, double q) { return (1.0 + std::max(p, q)) / (p * q - 1.0) - 1.0; };
  for (int i = 0; i < res; ++i)
    for (int j = 0; j < res; ++j) {
      const SweepCell& c = cells[i * res + j];
      if (std::abs(g(c.p, c.q)) < 1e-9) continue;
      EXPECT_EQ(c.verdict.verdict == Verdict::BlowUp, g(c.p, c.q) > 0.0) << c.p << " " << c.q;
      // Neighbours with different blow-up status straddle the curve.
      if (j + 1 < res) {
        const SweepCell& d = cells[i * res + j + 1];
        if ((c.verdict.verdict == Verdict::BlowUp) != (d.verdict.verdict == Verdict::BlowUp)) {
          EXPECT_LE(g(c.p, c.q) * g(d.p, d.q), 0.0);
        }
      }
    }
}

TEST(Sweep, MarginMonotoneInP) {
  const SystemParams t{3, 1.0, 0.5, 0.5, 2.0, 2.0};
  const int res = 60;
  const auto cells = sweep(t, 1.0, 4.0, 1.0, 4.0, res, res);
  for (int j = 0; j < res; ++j)
    for (int i = 0; i + 1 < res; ++i)
      EXPECT_LE(cells[(i + 1) * res + j].margin_114, cells[i * res + j].margin_114 + 1e-12);
}

TEST(Sweep, ThreadCountDoesNotChangeResult) {
  const SystemParams t{2, 1.5, 0.25, 0.125, 2.0, 2.0};
  const auto a = sweep(t, 1.0, 5.0, 1.0, 5.0, 40, 30, 1);
  const auto b = sweep(t, 1.0, 5.0, 1.0, 5.0, 40, 30, 4);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].verdict.label(), b[k].verdict.label());
    EXPECT_EQ(a[k].margin_17, b[k].margin_17);
    EXPECT_EQ(a[k].margin_114, b[k].margin_114);
  }
  EXPECT_THROW(sweep(t, 1.0, 5.0, 1.0, 5.0, 2001, 1), InvalidInput);
}
