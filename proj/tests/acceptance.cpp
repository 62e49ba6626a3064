// Acceptance run: one PASS/FAIL line per criterion, details indented below.
// Exit status is nonzero when any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "wfsched/harness.hpp"
#include "wfsched/oracle.hpp"
#include "wfsched/simulation.hpp"

using namespace wfsched;

namespace {

constexpr std::uint64_t kSeed = 2;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
};

bool all_pass(const std::vector<VerificationReport>& rs) {
  for (const auto& r : rs) {
    if (!r.passed()) return false;
  }
  return true;
}

std::string indent(const std::string& text) {
  std::istringstream in(text);
  std::string out, line;
  while (std::getline(in, line)) out += "    " + line + "\n";
  return out;
}

SuiteOptions corpus_opts(const std::string& suite) {
  SuiteOptions o;
  o.corpus = default_corpus(suite);
  o.corpus.seed = kSeed;
  return o;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void axioms(Outcome& o) {
  SuiteOptions opts = corpus_opts("axioms");
  opts.trials = 10000;
  const auto t0 = std::chrono::steady_clock::now();
  const auto rs = run_axioms_suite(opts);
  o.pass = all_pass(rs);
  o.detail << format_reports(rs) << "runtime " << seconds_since(t0) << " s\n";
}

void goodness(Outcome& o) {
  const auto rs = run_goodness_suite(corpus_opts("goodness"));
  o.pass = all_pass(rs);
  o.detail << format_reports(rs, 1);
  // negative controls: constants below the proven ones must be caught
  const std::pair<SchedulerKind, Rational> controls[] = {
      {SchedulerKind::ProcAlgo, Rational(1)}, {SchedulerKind::DensAlgo, Rational(2)}, {SchedulerKind::WeightAlgo, Rational(1, 2)}};
  for (const auto& [kind, c] : controls) {
    SuiteOptions neg = corpus_opts("goodness");
    neg.corpus.instances = 100;
    neg.algo = kind;
    neg.c = c;
    const auto nr = run_goodness_suite(neg);
    const bool caught = !all_pass(nr);
    o.pass = o.pass && caught;
    o.detail << "negative control " << to_string(kind) << " c=" << c << ": "
             << (caught ? "violations found" : "NO violations") << " (" << nr.at(0).violations.size() << ")\n";
  }
}

void structure(Outcome& o) {
  const auto rs = run_structure_suite(corpus_opts("structure"));
  o.pass = all_pass(rs);
  o.detail << format_reports(rs, 1);
}

void flow(Outcome& o) {
  const auto rs = run_flow_suite(corpus_opts("flow"));
  o.pass = all_pass(rs);
  o.detail << format_reports(rs, 1);
}

std::vector<VerificationReport> competitive_reports() {
  static const std::vector<VerificationReport> rs = run_competitive_suite(corpus_opts("competitive"));
  return rs;
}

void local_competitiveness(Outcome& o) {
  const auto all = competitive_reports();
  std::vector<VerificationReport> rs;
  for (const auto& r : all) {
    if (r.check.rfind("local-competitiveness/", 0) == 0 || r.check == "oracle-lower-bound") rs.push_back(r);
  }
  o.pass = all_pass(rs);
  for (const auto& r : rs) o.pass = o.pass && r.flagged.empty();
  o.detail << format_reports(rs, 1);

  // oracle budget on the largest corpus instances
  const CorpusSpec spec = corpus_opts("competitive").corpus;
  double worst = 0;
  for (std::size_t k = 0; k < spec.instances; ++k) {
    const Instance inst = corpus_instance(spec, k);
    if (inst.size() < spec.max_jobs) continue;
    const auto t0 = std::chrono::steady_clock::now();
    brute_force_opt(inst, {spec.max_jobs, false});
    worst = std::max(worst, seconds_since(t0));
  }
  o.pass = o.pass && worst < 60.0;
  o.detail << "slowest unmemoized oracle at n=" << spec.max_jobs << ": " << worst << " s\n";
}

void end_to_end(Outcome& o) {
  std::vector<VerificationReport> rs;
  for (const auto& r : competitive_reports()) {
    if (r.check.rfind("end-to-end/", 0) == 0 || r.check.rfind("observed-constant/", 0) == 0) rs.push_back(r);
  }
  o.pass = all_pass(rs);
  o.detail << format_reports(rs, 1);
}

void convergence(Outcome& o) {
  const auto rs = run_convergence_suite(corpus_opts("convergence"));
  o.pass = all_pass(rs);
  o.detail << format_reports(rs, 1);
}

void preemption(Outcome& o) {
  const Instance inst({Job{1, Rational(0), Rational(6), Rational(3)},
                       Job{2, Rational(0), Rational(3, 2), Rational(3, 2)},
                       Job{3, Rational(0), Rational(6, 5), Rational(3, 4)}});
  const RunResult run = simulate_exact(inst, SchedulerKind::ProcAlgo);
  const BinKey a2{BinFamily::ProcTime, 2}, a0{BinFamily::ProcTime, 0};
  const Rational two(2);
  std::optional<BinKey> before, after;
  for (const auto& s : run.trace.segments) {
    if (s.end == two) before = s.bin;
    if (s.start == two) after = s.bin;
  }
  bool threshold = false, other = false;
  for (const auto& e : run.events) {
    if (e.time != two) continue;
    threshold = threshold || (e.kind == EventKind::ThresholdCross && e.job == 1u);
    other = other || e.kind == EventKind::Release || e.kind == EventKind::Completion;
  }
  o.pass = before == a2 && after == a0 && threshold && !other;
  o.detail << "bin before t=2: " << (before ? to_string(*before) : "-") << ", after: " << (after ? to_string(*after) : "-")
           << ", threshold event: " << (threshold ? "yes" : "no") << ", release/completion at t=2: " << (other ? "yes" : "no")
           << "\ntrace:\n" << trace_csv(run.trace);
}

void bin_count(Outcome& o) {
  std::vector<VerificationReport> rs = run_bincount_suite(corpus_opts("bincount"));
  for (auto r : run_bincount_suite(corpus_opts("competitive"))) {
    r.check += " (n<=5 corpus)";
    rs.push_back(r);
  }
  o.pass = all_pass(rs);
  o.detail << format_reports(rs, 1);
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<void(Outcome&)>> criteria[] = {
      {"contribution axioms, 10^4 cases per family", axioms},
      {"goodness at every arrival (c = 3, 10, 1) with negative controls", goodness},
      {"structural invariants: short jobs, ordering, score/height, top job", structure},
      {"flow identity for every policy, mode and oracle schedule", flow},
      {"local competitiveness against the oracle on rounded instances", local_competitiveness},
      {"end-to-end ratio against the oracle on original instances", end_to_end},
      {"exact/quantum convergence for ProcAlgo", convergence},
      {"spontaneous preemption at t = 2", preemption},
      {"CombinedAlgo bin-count bound", bin_count},
  };
  std::cout << "# acceptance seed=" << kSeed << " threads=" << thread_count() << "\n";
  int failed = 0;
  int number = 0;
  for (const auto& [name, run] : criteria) {
    ++number;
    Outcome o;
    try {
      run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what() << "\n";
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << number << "] " << name << "\n" << indent(o.detail.str()) << std::flush;
  }
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : "all criteria passed") << "\n";
  return failed ? 1 : 0;
}
