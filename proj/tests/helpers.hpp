#pragma once

#include <string>
#include <vector>

#include "wfsched/bins.hpp"
#include "wfsched/instance.hpp"
#include "wfsched/rational.hpp"

namespace wfsched::test {

inline Rational Q(const char* s) { return Rational::parse(s); }

inline Job job(JobIndex index, const char* r, const char* p, const char* w) {
  return Job{index, Q(r), Q(p), Q(w)};
}

inline Instance instance(std::vector<Job> jobs) { return Instance(std::move(jobs)); }

inline Instance two_jobs() { return instance({job(1, "0", "4", "1"), job(2, "0", "1", "4")}); }

inline Instance preemption_instance() {
  return instance({job(1, "0", "6", "3"), job(2, "0", "3/2", "3/2"), job(3, "0", "6/5", "3/4")});
}

/// Owns the jobs a hand-built BinState points into.
struct Stack {
  std::vector<Job> jobs;
  BinKey key;

  Stack(BinKey k, std::size_t capacity = 16) : key(k) { jobs.reserve(capacity); }

  JobState add(const char* w, const char* p, JobIndex index = 0) {
    jobs.push_back(Job{index ? index : jobs.size() + 1, Rational(0), Q(p), Q(w)});
    return JobState{&jobs.back(), Q(w), Q(p)};
  }
};

}  // namespace wfsched::test
