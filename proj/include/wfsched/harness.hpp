#pragma once

#include <cstdint>
#include <exception>
#include <optional>
#include <string>
#include <vector>

#include "wfsched/instance.hpp"
#include "wfsched/scheduler.hpp"
#include "wfsched/verifier.hpp"

namespace wfsched {

enum class ExecPolicy { Serial, Parallel };

/// results[k] = fn(k). With Parallel the calls are spread over OpenMP threads;
/// the first exception thrown by any call is rethrown after the loop.
template <class R, class F>
std::vector<R> map_indexed(std::size_t count, ExecPolicy policy, F&& fn) {
  std::vector<R> out(count);
  std::exception_ptr error;
  if (policy == ExecPolicy::Serial) {
    for (std::size_t k = 0; k < count; ++k) out[k] = fn(k);
    return out;
  }
  const long long n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic)
  for (long long k = 0; k < n; ++k) {
    try {
      out[static_cast<std::size_t>(k)] = fn(static_cast<std::size_t>(k));
    } catch (...) {
#pragma omp critical(wfsched_map_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

void set_thread_count(int threads);
int thread_count();

struct CorpusSpec {
  std::size_t instances = 500;
  std::uint64_t seed = 1;
  std::size_t min_jobs = 1;
  std::size_t max_jobs = 20;
  std::int64_t max_den = 8;
};

/// Ranges cycle through four profiles so a corpus mixes wide and narrow
/// spreads of processing time, weight and release.
GeneratorParams corpus_profile(std::size_t k, std::int64_t max_den);
std::uint64_t corpus_seed(const CorpusSpec& spec, std::size_t k);
Instance corpus_instance(const CorpusSpec& spec, std::size_t k);

struct SuiteOptions {
  CorpusSpec corpus;
  /// Restricts goodness and structure suites to one policy.
  std::optional<SchedulerKind> algo;
  /// Overrides the goodness constant of every family checked.
  std::optional<Rational> c;
  std::uint64_t trials = 10000;
  ExecPolicy exec = ExecPolicy::Parallel;
};

/// Corpus used when a suite is run with default flags.
CorpusSpec default_corpus(const std::string& suite);

std::vector<VerificationReport> run_axioms_suite(const SuiteOptions& opts);
std::vector<VerificationReport> run_goodness_suite(const SuiteOptions& opts);
std::vector<VerificationReport> run_structure_suite(const SuiteOptions& opts);
std::vector<VerificationReport> run_flow_suite(const SuiteOptions& opts);
std::vector<VerificationReport> run_competitive_suite(const SuiteOptions& opts);
std::vector<VerificationReport> run_convergence_suite(const SuiteOptions& opts);
std::vector<VerificationReport> run_bincount_suite(const SuiteOptions& opts);

const std::vector<std::string>& suite_names();
/// Throws std::invalid_argument for an unknown name.
std::vector<VerificationReport> run_suite(const std::string& name, const SuiteOptions& opts);

/// Per-instance reports folded by check name, in first-seen order. Witness
/// seeds are stamped with the instance seed before folding.
std::vector<VerificationReport> fold_reports(const std::vector<std::vector<VerificationReport>>& per_instance,
                                             const std::vector<std::uint64_t>& seeds);

}  // namespace wfsched
