#include <gtest/gtest.h>

#include <random>

#include "helpers.hpp"

using namespace wfsched;
using namespace wfsched::test;

namespace {

const BinKey kProc0{BinFamily::ProcTime, 0};
const BinKey kProc1{BinFamily::ProcTime, 1};
const BinKey kProc2{BinFamily::ProcTime, 2};
const BinKey kDens0{BinFamily::Density, 0};
const BinKey kWeight3{BinFamily::Weight, 3};

}  // namespace

TEST(PrecLess, Examples) {
  Stack s(kProc2);
  EXPECT_TRUE(prec_less(s.add("2", "1"), s.add("4", "1")));
  EXPECT_TRUE(prec_less(s.add("4", "3"), s.add("4", "2")));
  EXPECT_TRUE(prec_less(s.add("4", "2", 7), s.add("4", "2", 3)));
  EXPECT_FALSE(prec_less(s.add("4", "2", 3), s.add("4", "2", 7)));
  const JobState a = s.add("1", "1");
  EXPECT_THROW(prec_less(a, a), std::logic_error);
}

TEST(BinState, InsertKeepsOrder) {
  Stack s(kProc2);
  BinState b(kProc2);
  b.insert(s.add("4", "5", 1));
  b.insert(s.add("2", "5", 2));
  b.insert(s.add("4", "6", 3));
  ASSERT_EQ(b.size(), 3u);
  EXPECT_EQ(b.jobs()[0].index(), 2u);
  EXPECT_EQ(b.jobs()[1].index(), 3u);
  EXPECT_EQ(b.top().index(), 1u);
  EXPECT_EQ(b.total_weight(), Rational(10));
  EXPECT_EQ(b.total_remaining(), Rational(16));
  EXPECT_EQ(b.position_of(3), 1u);
  EXPECT_TRUE(b.contains(1));
  EXPECT_FALSE(b.contains(9));
  EXPECT_THROW(b.position_of(9), std::out_of_range);
  b.pop_top();
  EXPECT_EQ(b.top().index(), 3u);
  BinState empty(kProc0);
  EXPECT_THROW(empty.top(), std::logic_error);
  EXPECT_THROW(empty.pop_top(), std::logic_error);
}

TEST(Base, Examples) {
  Stack s(kProc2);
  BinState b(kProc2, {s.add("1", "9"), s.add("2", "9"), s.add("4", "9")});
  EXPECT_EQ(base(b, b.jobs()[0]), Rational(0));
  EXPECT_EQ(base(b, b.top()), Rational(3));
  EXPECT_EQ(bases(b), (std::vector<Rational>{Rational(0), Rational(1), Rational(3)}));
  BinState single(kProc2, {s.add("8", "9")});
  EXPECT_EQ(base(single, single.top()), Rational(0));
}

TEST(MuProc, Examples) {
  EXPECT_EQ(mu_proc(1, Q("10"), Q("4"), Q("3"), Q("5")), Q("3"));
  EXPECT_EQ(mu_proc(1, Q("8"), Q("4"), Q("3"), Q("5")), Q("2"));
  EXPECT_EQ(mu_proc(1, Q("6"), Q("4"), Q("3"), Q("5")), Q("0"));
  EXPECT_EQ(mu_proc(1, Q("7"), Q("4"), Q("3"), Q("5")), Q("2"));
  EXPECT_EQ(mu_proc(1, Q("9"), Q("4"), Q("3"), Q("5")), Q("3"));
  EXPECT_THROW(mu_proc(1, Q("1"), Q("0"), Q("3"), Q("5")), std::invalid_argument);
  EXPECT_THROW(mu_proc(1, Q("1"), Q("1"), Q("0"), Q("5")), std::invalid_argument);
}

TEST(MuDens, Examples) {
  EXPECT_EQ(mu_dens(0, Q("15/2"), Q("3"), Q("3/2"), Q("4")), Q("3/2"));
  EXPECT_EQ(mu_dens(0, Q("7"), Q("3"), Q("3/2"), Q("4")), Q("1"));
  EXPECT_EQ(mu_dens(0, Q("5"), Q("3"), Q("3/2"), Q("4")), Q("0"));
  EXPECT_EQ(mu_dens(0, Q("6"), Q("3"), Q("3/2"), Q("4")), Q("0"));
  EXPECT_THROW(mu_dens(0, Q("6"), Q("-3"), Q("3/2"), Q("4")), std::invalid_argument);
}

TEST(MuWeight, Examples) {
  EXPECT_EQ(mu_weight(Q("5"), Q("2"), Q("7"), Q("3")), Q("7"));
  EXPECT_EQ(mu_weight(Q("499/100"), Q("2"), Q("7"), Q("3")), Q("0"));
  EXPECT_THROW(mu_weight(Q("5"), Q("2"), Q("0"), Q("3")), std::invalid_argument);
}

TEST(MuFor, Dispatches) {
  EXPECT_EQ(mu_for(kProc1, Q("8"), Q("4"), Q("3"), Q("5")), Q("2"));
  EXPECT_EQ(mu_for(kDens0, Q("7"), Q("3"), Q("3/2"), Q("4")), Q("1"));
  EXPECT_EQ(mu_for(kWeight3, Q("5"), Q("2"), Q("7"), Q("3")), Q("7"));
}

TEST(Contribution, Examples) {
  Stack s(kProc1);
  BinState proc(kProc1, {s.add("4", "3")});
  EXPECT_EQ(contribution(proc, proc.top(), Q("0")), Q("0"));
  EXPECT_EQ(contribution(proc, proc.top(), Q("4")), Q("3"));
  Stack d(kDens0);
  BinState dens(kDens0, {d.add("3", "3/2")});
  EXPECT_EQ(contribution(dens, dens.top(), Q("3")), Q("1"));
}

TEST(BinBar, Examples) {
  BinState empty(kProc0);
  EXPECT_EQ(bin_bar_total(empty, Q("5")), Q("0"));
  EXPECT_TRUE(bar_breakpoints(empty).empty());

  Stack s(kProc0);
  BinState b(kProc0, {s.add("1", "1"), s.add("2", "2")});
  EXPECT_EQ(bin_bar_total(b, Q("2")), Q("2"));
  EXPECT_EQ(contributions(b, Q("2")), (std::vector<Rational>{Q("1"), Q("1")}));
  EXPECT_EQ(bin_bar_total(b, Q("3")), b.total_remaining());
  EXPECT_EQ(bin_bar_total(b, Q("100")), b.total_remaining());
}

TEST(BarBreakpoints, Examples) {
  Stack s(kProc2);
  BinState proc(kProc2, {s.add("4", "9")});
  EXPECT_EQ(bar_breakpoints(proc), (std::vector<Rational>{Q("2"), Q("4")}));
  Stack d(kDens0);
  BinState dens(kDens0, {d.add("3", "3/2")});
  EXPECT_EQ(bar_breakpoints(dens), (std::vector<Rational>{Q("2"), Q("7/2")}));
}

TEST(Score, Examples) {
  Stack s(kProc2);
  BinState proc(kProc2, {s.add("2", "8"), s.add("4", "3")});
  EXPECT_EQ(score(proc), Q("4"));
  Stack d(kDens0);
  BinState dens(kDens0, {d.add("5", "5"), d.add("3", "3/2")});
  EXPECT_EQ(score(dens), Q("17/2"));
  Stack w(kWeight3);
  BinState weight(kWeight3, {w.add("8", "5"), w.add("8", "2")});
  EXPECT_EQ(score(weight), Q("16"));
  EXPECT_THROW(score(BinState(kProc0)), std::invalid_argument);
}

TEST(BinHeight, MatchesScoreExamples) {
  Stack s(kProc2);
  BinState proc(kProc2, {s.add("2", "8"), s.add("4", "3")});
  EXPECT_EQ(bin_height(proc), score(proc));
  Stack d(kDens0);
  BinState dens(kDens0, {d.add("5", "5"), d.add("3", "3/2")});
  EXPECT_EQ(bin_height(dens), score(dens));
  Stack w(kWeight3);
  BinState weight(kWeight3, {w.add("8", "5"), w.add("8", "2")});
  EXPECT_EQ(bin_height(weight), score(weight));

  Stack one(kProc2);
  EXPECT_EQ(bin_height(BinState(kProc2, {one.add("4", "5")})), Q("4"));
  EXPECT_EQ(bin_height(BinState(kProc2, {one.add("4", "1")})), Q("2"));
  EXPECT_THROW(bin_height(BinState(kProc0)), std::invalid_argument);
}

namespace {

// Least bar height at which the top job contributes its whole volume, by bisection
// over the breakpoints of its contribution function.
Rational height_by_search(const BinState& b) {
  const JobState& top = b.top();
  const Rational h = base(b, top);
  for (const auto& x : mu_breakpoints(b.family(), b.index(), top.rounded_weight, top.remaining, h)) {
    if (contribution(b, top, x) == top.remaining) return x;
  }
  throw std::logic_error("top job never completes its contribution");
}

BinState random_bin(std::mt19937_64& rng, Stack& s, BinKey key) {
  std::uniform_int_distribution<int> count(1, 6), wexp(-2, 4), num(1, 64), den(1, 8);
  BinState b(key);
  const int n = count(rng);
  for (int k = 0; k < n; ++k) {
    const std::string w = pow2(wexp(rng)).str();
    const std::string p = Rational(num(rng), den(rng)).str();
    s.jobs.push_back(Job{s.jobs.size() + 1, Rational(0), Q(p.c_str()), Q(w.c_str())});
    b.insert(JobState{&s.jobs.back(), Q(w.c_str()), Q(p.c_str())});
  }
  return b;
}

}  // namespace

TEST(BinProperty, ScoreEqualsHeightOnRandomBins) {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> idx(-3, 4);
  for (int trial = 0; trial < 1000; ++trial) {
    for (BinFamily f : {BinFamily::ProcTime, BinFamily::Density, BinFamily::Weight}) {
      const BinKey key{f, idx(rng)};
      Stack s(key, 8);
      const BinState b = random_bin(rng, s, key);
      ASSERT_EQ(score(b), bin_height(b)) << to_string(key);
      ASSERT_EQ(bin_height(b), height_by_search(b)) << to_string(key);
    }
  }
}

TEST(BinProperty, BarIsLinearBetweenBreakpoints) {
  std::mt19937_64 rng(22);
  std::uniform_int_distribution<int> idx(-3, 4), frac(1, 99);
  for (int trial = 0; trial < 300; ++trial) {
    for (BinFamily f : {BinFamily::ProcTime, BinFamily::Density, BinFamily::Weight}) {
      const BinKey key{f, idx(rng)};
      Stack s(key, 8);
      const BinState b = random_bin(rng, s, key);
      auto pts = bar_breakpoints(b);
      ASSERT_TRUE(std::is_sorted(pts.begin(), pts.end()));
      pts.insert(pts.begin(), Rational(0));
      for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        const Rational& a = pts[k];
        const Rational& c = pts[k + 1];
        if (!(a < c)) continue;
        // three interior points are collinear
        const Rational x1 = a + (c - a) * Rational(frac(rng), 100);
        const Rational x2 = a + (c - a) * Rational(frac(rng), 100);
        const Rational x3 = a + (c - a) * Rational(frac(rng), 100);
        const Rational y1 = bin_bar_total(b, x1), y2 = bin_bar_total(b, x2), y3 = bin_bar_total(b, x3);
        ASSERT_EQ((y2 - y1) * (x3 - x1), (y3 - y1) * (x2 - x1)) << to_string(key);
      }
      ASSERT_EQ(bin_bar_total(b, pts.back() + Rational(1)), b.total_remaining());
    }
  }
}

TEST(BinProperty, OrderIsStrictAndTotal) {
  std::mt19937_64 rng(23);
  Stack s(kProc0, 64);
  std::vector<JobState> xs;
  std::uniform_int_distribution<int> wexp(-2, 3), num(1, 30), den(1, 4);
  for (int k = 0; k < 60; ++k) xs.push_back(s.add(pow2(wexp(rng)).str().c_str(), Rational(num(rng), den(rng)).str().c_str()));
  for (const auto& a : xs) {
    for (const auto& b : xs) {
      if (a.job == b.job) continue;
      ASSERT_NE(prec_less(a, b), prec_less(b, a));
      for (const auto& c : xs) {
        if (c.job == a.job || c.job == b.job) continue;
        if (prec_less(a, b) && prec_less(b, c)) ASSERT_TRUE(prec_less(a, c));
      }
    }
  }
}
