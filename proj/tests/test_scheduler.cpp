#include <gtest/gtest.h>

#include "helpers.hpp"
#include "wfsched/scheduler.hpp"

using namespace wfsched;
using namespace wfsched::test;

namespace {

BinKey P(std::int64_t i) { return {BinFamily::ProcTime, i}; }
BinKey D(std::int64_t i) { return {BinFamily::Density, i}; }
BinKey W(std::int64_t i) { return {BinFamily::Weight, i}; }

}  // namespace

TEST(SchedulerKind, NamesRoundTrip) {
  for (auto k : {SchedulerKind::ProcAlgo, SchedulerKind::DensAlgo, SchedulerKind::WeightAlgo,
                 SchedulerKind::CombinedAlgo}) {
    EXPECT_EQ(parse_scheduler_kind(to_string(k)), k);
  }
  EXPECT_EQ(to_string(SchedulerKind::CombinedAlgo), "min");
  EXPECT_THROW(parse_scheduler_kind("srpt"), std::invalid_argument);
  EXPECT_TRUE(supports_exact(SchedulerKind::ProcAlgo));
  EXPECT_TRUE(supports_exact(SchedulerKind::WeightAlgo));
  EXPECT_FALSE(supports_exact(SchedulerKind::DensAlgo));
  EXPECT_FALSE(supports_exact(SchedulerKind::CombinedAlgo));
}

TEST(AssignProc, Examples) {
  auto a = assign_proc(job(1, "0", "5", "3"));
  EXPECT_EQ(a.bin, P(2));
  EXPECT_EQ(a.rounded_weight, Q("4"));
  a = assign_proc(job(1, "0", "1", "1"));
  EXPECT_EQ(a.bin, P(0));
  EXPECT_EQ(a.rounded_weight, Q("2"));
  a = assign_proc(job(1, "0", "4", "4"));
  EXPECT_EQ(a.bin, P(2));
  EXPECT_EQ(a.rounded_weight, Q("8"));
}

TEST(AssignDens, Examples) {
  auto a = assign_dens(job(1, "0", "4", "3"));
  EXPECT_EQ(a.bin, D(0));
  EXPECT_EQ(a.rounded_weight, Q("4"));
  a = assign_dens(job(1, "0", "2", "2"));
  EXPECT_EQ(a.bin, D(0));
  EXPECT_EQ(a.rounded_weight, Q("2"));
  a = assign_dens(job(1, "0", "1", "3"));
  EXPECT_EQ(a.bin, D(-2));
  EXPECT_EQ(a.rounded_weight, Q("4"));
}

TEST(AssignWeight, Examples) {
  auto a = assign_weight(job(1, "0", "9", "3"));
  EXPECT_EQ(a.bin, W(2));
  EXPECT_EQ(a.rounded_weight, Q("4"));
  a = assign_weight(job(1, "0", "9", "1"));
  EXPECT_EQ(a.bin, W(1));
  EXPECT_EQ(a.rounded_weight, Q("2"));
  a = assign_weight(job(1, "0", "9", "1/3"));
  EXPECT_EQ(a.bin, W(-1));
  EXPECT_EQ(a.rounded_weight, Q("1/2"));
}

TEST(AssignCombined, OpensTripletForFirstJob) {
  SchedulerState st(SchedulerKind::CombinedAlgo);
  const Job j1 = job(1, "0", "5", "3");
  auto a = assign_combined(j1, st);
  EXPECT_EQ(a.bin, W(2));
  EXPECT_EQ(a.rounded_weight, Q("4"));
  EXPECT_EQ(a.newly_opened, (std::vector<BinKey>{P(2), D(0), W(2)}));
  EXPECT_EQ(st.open_keys, (std::set<BinKey>{P(2), D(0), W(2)}));
}

TEST(AssignCombined, PrefersOpenProcBin) {
  SchedulerState st(SchedulerKind::CombinedAlgo);
  assign_combined(job(1, "0", "5", "3"), st);
  auto a = assign_combined(job(2, "0", "6", "100"), st);
  EXPECT_EQ(a.bin, P(2));
  EXPECT_EQ(a.rounded_weight, Q("128"));
  EXPECT_TRUE(a.newly_opened.empty());
}

TEST(AssignCombined, FallsBackToOpenDensBin) {
  SchedulerState st(SchedulerKind::CombinedAlgo);
  assign_combined(job(1, "0", "5", "3"), st);
  auto a = assign_combined(job(2, "0", "16", "12"), st);
  EXPECT_EQ(a.bin, D(0));
  EXPECT_EQ(a.rounded_weight, Q("16"));
  EXPECT_EQ(st.open_keys.size(), 3u);
}

TEST(AssignCombined, RequiresCombinedState) {
  SchedulerState st(SchedulerKind::ProcAlgo);
  EXPECT_THROW(assign_combined(job(1, "0", "1", "1"), st), std::logic_error);
}

TEST(Assign, DispatchesByKind) {
  const Job j = job(1, "0", "5", "3");
  SchedulerState p(SchedulerKind::ProcAlgo), d(SchedulerKind::DensAlgo), w(SchedulerKind::WeightAlgo);
  EXPECT_EQ(assign(j, p).bin, P(2));
  EXPECT_EQ(assign(j, d).bin, D(0));
  EXPECT_EQ(assign(j, w).bin, W(2));
  SchedulerState s(SchedulerKind::ProcAlgo);
  admit(j, s);
  EXPECT_EQ(s.nonempty_bins(), 1u);
  EXPECT_EQ(s.bins.at(P(2)).top().rounded_weight, Q("4"));
}

TEST(SelectBin, Examples) {
  SchedulerState st(SchedulerKind::ProcAlgo);
  EXPECT_FALSE(select_bin(st, std::nullopt));

  const Job a = job(1, "0", "4", "1");  // A2, rounded 2, score 1
  const Job b = job(2, "0", "1", "4");  // A0, rounded 8, score 4
  admit(a, st);
  EXPECT_EQ(select_bin(st, std::nullopt), P(2));
  admit(b, st);
  EXPECT_EQ(select_bin(st, std::nullopt), P(0));
  EXPECT_EQ(select_bin(st, P(2)), P(0));
}

TEST(SelectBin, TiesStayOnCurrentThenSmallestKey) {
  SchedulerState tie(SchedulerKind::ProcAlgo);
  const Job g = job(1, "0", "6", "3");  // A2, rounded 4, score 4
  const Job h = job(2, "0", "1", "4");  // A0, rounded 8, score 8 - 4
  admit(g, tie);
  admit(h, tie);
  ASSERT_EQ(score(tie.bins.at(P(2))), score(tie.bins.at(P(0))));
  EXPECT_EQ(select_bin(tie, P(0)), P(0));
  EXPECT_EQ(select_bin(tie, P(2)), P(2));
  EXPECT_EQ(select_bin(tie, std::nullopt), P(0));
  EXPECT_EQ(select_bin(tie, P(5)), P(0));
}

TEST(SelectBin, FamilyOrderBreaksCrossFamilyTies) {
  SchedulerState st(SchedulerKind::CombinedAlgo);
  // first job opens {A1, A'0, A''1} and lands in A''1 with weight 2
  admit(job(1, "0", "2", "1"), st);
  // lands in the open A1 with weight 2; p = 3 > 2 so A1 also scores 2
  admit(job(2, "0", "3", "1"), st);
  ASSERT_EQ(score(st.bins.at(P(1))), score(st.bins.at(W(1))));
  EXPECT_EQ(select_bin(st, std::nullopt), P(1));
  EXPECT_EQ(select_bin(st, W(1)), W(1));
}
