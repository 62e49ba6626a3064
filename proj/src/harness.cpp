#include "wfsched/harness.hpp"

#include <omp.h>

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <stdexcept>

#include "wfsched/oracle.hpp"
#include "wfsched/simulation.hpp"

namespace wfsched {

namespace {

using Reports = std::vector<VerificationReport>;

struct Policy {
  SchedulerKind kind;
  bool quantum;
};

RunResult run_policy(const Instance& inst, Policy p, const SimOptions& opts = {}) {
  if (p.quantum) return simulate_quantum(inst, p.kind, default_delta(inst), opts);
  return simulate_exact(inst, p.kind, opts);
}

Policy natural_policy(SchedulerKind k) { return {k, !supports_exact(k)}; }

std::string policy_label(Policy p) { return to_string(p.kind) + (p.quantum ? "/quantum" : "/exact"); }

Reports per_corpus(const SuiteOptions& opts, const std::function<Reports(const Instance&)>& body) {
  const CorpusSpec& spec = opts.corpus;
  std::vector<std::uint64_t> seeds(spec.instances);
  for (std::size_t k = 0; k < spec.instances; ++k) seeds[k] = corpus_seed(spec, k);
  auto per = map_indexed<Reports>(spec.instances, opts.exec,
                                  [&](std::size_t k) { return body(corpus_instance(spec, k)); });
  return fold_reports(per, seeds);
}

VerificationReport single(std::string check) {
  VerificationReport r;
  r.check = std::move(check);
  r.instances = 1;
  return r;
}

Witness bound_witness(const Rational& left, const Rational& right, std::string detail) {
  Witness w;
  w.left = left;
  w.right = right;
  w.detail = std::move(detail);
  return w;
}

}  // namespace

void set_thread_count(int threads) {
  if (threads > 0) omp_set_num_threads(threads);
}

int thread_count() { return omp_get_max_threads(); }

GeneratorParams corpus_profile(std::size_t k, std::int64_t max_den) {
  GeneratorParams g;
  g.max_den = max_den;
  switch (k % 4) {
    case 1:
      g.proc = {Rational(1), Rational(2)};
      g.weight = {Rational(1, 8), Rational(64)};
      g.release = {Rational(0), Rational(4)};
      break;
    case 2:
      g.proc = {Rational(1, 16), Rational(16)};
      g.weight = {Rational(1), Rational(2)};
      g.release = {Rational(0), Rational(20)};
      break;
    case 3:
      g.proc = {Rational(1), Rational(8)};
      g.weight = {Rational(1), Rational(8)};
      g.release = {Rational(0), Rational(2)};
      break;
    default:
      break;
  }
  return g;
}

std::uint64_t corpus_seed(const CorpusSpec& spec, std::size_t k) { return mix_seed(spec.seed, k); }

Instance corpus_instance(const CorpusSpec& spec, std::size_t k) {
  if (spec.min_jobs < 1 || spec.max_jobs < spec.min_jobs) {
    throw std::invalid_argument("corpus job range must satisfy 1 <= min <= max");
  }
  const std::uint64_t seed = corpus_seed(spec, k);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> n(spec.min_jobs, spec.max_jobs);
  return generate_instance(n(rng), seed, corpus_profile(k, spec.max_den));
}

CorpusSpec default_corpus(const std::string& suite) {
  CorpusSpec c;
  if (suite == "competitive") {
    c.instances = 200;
    c.max_jobs = 5;
  } else if (suite == "convergence") {
    c.instances = 50;
  }
  return c;
}

std::vector<VerificationReport> fold_reports(const std::vector<std::vector<VerificationReport>>& per_instance,
                                             const std::vector<std::uint64_t>& seeds) {
  std::vector<VerificationReport> out;
  std::map<std::string, std::size_t> slot;
  for (std::size_t k = 0; k < per_instance.size(); ++k) {
    for (VerificationReport r : per_instance[k]) {
      if (k < seeds.size()) r.stamp_seed(seeds[k]);
      auto [it, fresh] = slot.try_emplace(r.check, out.size());
      if (fresh) {
        out.push_back(std::move(r));
      } else {
        out[it->second].merge(r);
      }
    }
  }
  return out;
}

std::vector<VerificationReport> run_axioms_suite(const SuiteOptions& opts) {
  Reports out;
  const std::pair<BinFamily, std::pair<std::int64_t, std::int64_t>> families[] = {
      {BinFamily::ProcTime, {-4, 4}}, {BinFamily::Density, {-4, 4}}, {BinFamily::Weight, {0, 0}}};
  for (const auto& [family, range] : families) {
    constexpr std::uint64_t block = 256;
    const std::size_t blocks = (opts.trials + block - 1) / block;
    auto per = map_indexed<VerificationReport>(blocks, opts.exec, [&](std::size_t b) {
      VerificationReport r;
      const std::uint64_t end = std::min<std::uint64_t>(opts.trials, (b + 1) * block);
      for (std::uint64_t k = b * block; k < end; ++k) {
        fuzz_axioms_trial(family, range.first, range.second, opts.corpus.seed, k, r);
        ++r.instances;
      }
      return r;
    });
    VerificationReport total;
    total.check = "axioms/" + to_string(family);
    for (const auto& r : per) total.merge(r);
    total.stamp_seed(opts.corpus.seed);
    out.push_back(std::move(total));
  }
  return out;
}

std::vector<VerificationReport> run_goodness_suite(const SuiteOptions& opts) {
  std::vector<SchedulerKind> kinds = {SchedulerKind::ProcAlgo, SchedulerKind::DensAlgo, SchedulerKind::WeightAlgo};
  if (opts.algo) kinds = {*opts.algo};
  return per_corpus(opts, [&](const Instance& inst) {
    Reports rs;
    SimOptions sim;
    sim.record_snapshots = false;
    for (SchedulerKind kind : kinds) {
      const RunResult run = run_policy(inst, natural_policy(kind), sim);
      for (BinFamily f : {BinFamily::ProcTime, BinFamily::Density, BinFamily::Weight}) {
        const bool used = std::any_of(run.arrivals.begin(), run.arrivals.end(),
                                      [&](const ArrivalRecord& a) { return a.assignment.bin.family == f; });
        const bool owned = kind == SchedulerKind::CombinedAlgo ||
                           (kind == SchedulerKind::ProcAlgo && f == BinFamily::ProcTime) ||
                           (kind == SchedulerKind::DensAlgo && f == BinFamily::Density) ||
                           (kind == SchedulerKind::WeightAlgo && f == BinFamily::Weight);
        if (!owned || (!used && kind == SchedulerKind::CombinedAlgo)) continue;
        GoodnessParams g = proven_goodness(f);
        if (opts.c) g.c = *opts.c;
        VerificationReport r = check_goodness_at_arrivals(run, g);
        r.check = to_string(kind) + "/" + r.check;
        rs.push_back(std::move(r));
      }
    }
    return rs;
  });
}

std::vector<VerificationReport> run_structure_suite(const SuiteOptions& opts) {
  std::vector<Policy> policies = {{SchedulerKind::ProcAlgo, false},
                                  {SchedulerKind::DensAlgo, true},
                                  {SchedulerKind::WeightAlgo, false},
                                  {SchedulerKind::CombinedAlgo, true}};
  if (opts.algo) policies = {natural_policy(*opts.algo)};
  Reports out = per_corpus(opts, [&](const Instance& inst) {
    Reports rs;
    for (Policy p : policies) {
      StructureMonitor monitor;
      SimOptions sim;
      sim.record_snapshots = false;
      sim.on_snapshot = [&](const Snapshot& s) { monitor.observe(s); };
      const RunResult run = run_policy(inst, p, sim);
      for (auto& r : monitor.finish(run, inst)) {
        r.check = policy_label(p) + "/" + r.check;
        rs.push_back(std::move(r));
      }
    }
    return rs;
  });
  // short-job checks of a family the policy never uses
  std::erase_if(out, [](const VerificationReport& r) { return r.assertions == 0; });
  return out;
}

std::vector<VerificationReport> run_flow_suite(const SuiteOptions& opts) {
  return per_corpus(opts, [&](const Instance& inst) {
    Reports rs;
    SimOptions sim;
    sim.record_snapshots = false;
    auto record = [&](const RunResult& run, const std::string& label) {
      VerificationReport r = check_flow_identity(run, inst);
      r.check = "flow-identity/" + label;
      rs.push_back(std::move(r));
    };
    for (SchedulerKind k : {SchedulerKind::ProcAlgo, SchedulerKind::WeightAlgo}) {
      record(simulate_exact(inst, k, sim), policy_label({k, false}));
    }
    for (SchedulerKind k : {SchedulerKind::ProcAlgo, SchedulerKind::DensAlgo, SchedulerKind::WeightAlgo,
                            SchedulerKind::CombinedAlgo}) {
      record(simulate_quantum(inst, k, default_delta(inst), sim), policy_label({k, true}));
    }
    record(hdf_baseline(inst), "hdf");
    std::mt19937_64 rng(inst.size());
    record(random_epoch_schedule(inst, rng), "random");
    if (inst.size() <= OracleOptions{}.limit) record(brute_force_opt(inst).best, "oracle");
    return rs;
  });
}

std::vector<VerificationReport> run_competitive_suite(const SuiteOptions& opts) {
  struct Entry {
    Policy policy;
    Rational c;
  };
  const Entry entries[] = {{{SchedulerKind::ProcAlgo, false}, Rational(3)},
                           {{SchedulerKind::DensAlgo, true}, Rational(10)},
                           {{SchedulerKind::CombinedAlgo, true}, Rational(10)}};
  return per_corpus(opts, [&](const Instance& inst) {
    Reports rs;
    SimOptions sim;
    sim.record_snapshots = false;
    const InstanceStats stats = instance_stats(inst);
    const OracleResult opt = brute_force_opt(inst);

    for (const Entry& e : entries) {
      const RunResult run = run_policy(inst, e.policy, sim);
      const Instance rounded = rounded_instance(run, inst);
      const OracleResult opt_rounded = brute_force_opt(rounded);
      const std::string label = policy_label(e.policy);
      const Rational c = opts.c.value_or(e.c);

      VerificationReport local = check_local_competitiveness(run, rounded, opt_rounded, c);
      local.check = "local-competitiveness/" + label;
      rs.push_back(std::move(local));

      // end to end against the original instance; the leading 2 is the rounding factor
      const Rational R = e.policy.kind == SchedulerKind::ProcAlgo   ? stats.p_ratio
                         : e.policy.kind == SchedulerKind::DensAlgo ? stats.d_ratio
                                                                    : stats.min_ratio();
      const Rational levels(ceil_log2(R) + 1);
      const Rational ratio = run.cost / opt.best.cost;
      VerificationReport ratio_report = single("end-to-end/" + label);
      ratio_report.note_ratio(ratio);
      ++ratio_report.assertions;
      const Rational bound = Rational(4) * c * levels;
      if (ratio > bound) {
        ratio_report.violations.push_back(bound_witness(ratio, bound, "ALG/OPT above 2*2c*(ceil(log2 R)+1)"));
      }
      if (e.policy.kind == SchedulerKind::CombinedAlgo) {
        ++ratio_report.assertions;
        if (ratio > Rational(60) * levels) {
          ratio_report.violations.push_back(bound_witness(ratio, Rational(60) * levels, "ALG/OPT above 60*(ceil(log2 R)+1)"));
        }
      }
      rs.push_back(std::move(ratio_report));

      VerificationReport constant = single("observed-constant/" + label);
      constant.note_ratio(ratio / levels);
      rs.push_back(std::move(constant));
    }

    // the oracle is a lower bound for every schedule we can produce
    VerificationReport lower = single("oracle-lower-bound");
    std::vector<std::pair<std::string, Rational>> costs = {
        {"p", simulate_exact(inst, SchedulerKind::ProcAlgo, sim).cost},
        {"w", simulate_exact(inst, SchedulerKind::WeightAlgo, sim).cost},
        {"d", simulate_quantum(inst, SchedulerKind::DensAlgo, default_delta(inst), sim).cost},
        {"min", simulate_quantum(inst, SchedulerKind::CombinedAlgo, default_delta(inst), sim).cost},
        {"hdf", hdf_baseline(inst).cost}};
    for (const auto& [name, cost] : costs) {
      ++lower.assertions;
      if (cost < opt.best.cost) lower.violations.push_back(bound_witness(cost, opt.best.cost, name + " beats the oracle"));
    }
    rs.push_back(std::move(lower));
    return rs;
  });
}

std::vector<VerificationReport> run_convergence_suite(const SuiteOptions& opts) {
  return per_corpus(opts, [&](const Instance& inst) {
    VerificationReport r = single("convergence/p");
    SimOptions sim;
    sim.record_snapshots = false;
    const Rational exact = simulate_exact(inst, SchedulerKind::ProcAlgo, sim).cost;
    Rational delta = inst.min_proc();
    std::optional<Rational> previous;
    Rational err;
    for (int halving = 0; halving <= 4; ++halving, delta /= Rational(2)) {
      const Rational cost = simulate_quantum(inst, SchedulerKind::ProcAlgo, delta, sim).cost;
      err = abs(cost - exact) / exact;
      ++r.assertions;
      if (previous && err > *previous) {
        Witness w = bound_witness(err, *previous, "relative error grew when delta halved");
        w.time = delta;
        r.violations.push_back(std::move(w));
      }
      previous = err;
    }
    ++r.assertions;
    r.note_ratio(err);
    if (err > Rational(1, 100)) r.violations.push_back(bound_witness(err, Rational(1, 100), "relative error above 1/100 at p_min/16"));
    return Reports{r};
  });
}

std::vector<VerificationReport> run_bincount_suite(const SuiteOptions& opts) {
  return per_corpus(opts, [&](const Instance& inst) {
    SimOptions sim;
    sim.record_snapshots = false;
    const RunResult run = simulate_quantum(inst, SchedulerKind::CombinedAlgo, default_delta(inst), sim);
    VerificationReport bound = check_bin_count(run, instance_stats(inst));

    // same releases, every job a copy of the first
    std::vector<Job> copies = inst.jobs();
    for (auto& j : copies) {
      j.proc = inst[0].proc;
      j.weight = inst[0].weight;
    }
    const Instance uniform{copies};
    const RunResult urun = simulate_quantum(uniform, SchedulerKind::CombinedAlgo, default_delta(uniform), sim);
    VerificationReport exact3 = single("bin-count/uniform");
    ++exact3.assertions;
    if (urun.opened_bins != 3) {
      exact3.violations.push_back(
          bound_witness(Rational(static_cast<std::int64_t>(urun.opened_bins)), Rational(3), "uniform instance opened bins != 3"));
    }
    return Reports{bound, exact3};
  });
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"axioms",      "goodness",    "structure", "flow",
                                                 "competitive", "convergence", "bincount"};
  return names;
}

std::vector<VerificationReport> run_suite(const std::string& name, const SuiteOptions& opts) {
  if (name == "axioms") return run_axioms_suite(opts);
  if (name == "goodness") return run_goodness_suite(opts);
  if (name == "structure") return run_structure_suite(opts);
  if (name == "flow") return run_flow_suite(opts);
  if (name == "competitive") return run_competitive_suite(opts);
  if (name == "convergence") return run_convergence_suite(opts);
  if (name == "bincount") return run_bincount_suite(opts);
  throw std::invalid_argument("unknown suite '" + name + "'");
}

}  // namespace wfsched
