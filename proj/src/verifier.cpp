#include "wfsched/verifier.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace wfsched {

namespace {

Rational random_rational(std::mt19937_64& rng, std::int64_t lo_num, std::int64_t hi_num, std::int64_t den) {
  std::uniform_int_distribution<std::int64_t> d(1, den);
  const std::int64_t q = d(rng);
  std::uniform_int_distribution<std::int64_t> n(lo_num * q, hi_num * q);
  return Rational(n(rng), q);
}

Rational random_positive(std::mt19937_64& rng, std::int64_t hi, std::int64_t den) {
  std::uniform_int_distribution<std::int64_t> d(1, den);
  const std::int64_t q = d(rng);
  std::uniform_int_distribution<std::int64_t> n(1, hi * q);
  return Rational(n(rng), q);
}

Rational mu_family(BinFamily family, std::int64_t i, const Rational& x, const Rational& w,
                   const Rational& p, const Rational& h) {
  return mu_for(BinKey{family, i}, x, w, p, h);
}

Witness axiom_witness(int axiom, BinFamily family, std::int64_t i, const Rational& x, const Rational& w,
                      const Rational& p, const Rational& h, const Rational& left, const Rational& right) {
  Witness wit;
  wit.x = x;
  wit.left = left;
  wit.right = right;
  std::ostringstream d;
  d << "axiom " << axiom << " " << to_string(family) << " i=" << i << " w=" << w << " p=" << p << " h=" << h;
  wit.detail = d.str();
  return wit;
}

std::vector<JobIndex> indices_of(const BinState& bin) {
  std::vector<JobIndex> out;
  for (const auto& j : bin.jobs()) out.push_back(j.index());
  return out;
}

}  // namespace

std::string Witness::describe() const {
  std::ostringstream out;
  out << "seed=" << seed << " t=" << time;
  if (x) out << " x=" << *x;
  if (!jobs.empty()) {
    out << " jobs=";
    for (std::size_t k = 0; k < jobs.size(); ++k) out << (k ? "," : "") << jobs[k];
  }
  out << " left=" << left << " right=" << right;
  if (!detail.empty()) out << " (" << detail << ")";
  return out.str();
}

void VerificationReport::merge(const VerificationReport& other) {
  instances += other.instances;
  assertions += other.assertions;
  violations.insert(violations.end(), other.violations.begin(), other.violations.end());
  flagged.insert(flagged.end(), other.flagged.begin(), other.flagged.end());
  if (other.max_ratio) note_ratio(*other.max_ratio);
}

void VerificationReport::stamp_seed(std::uint64_t seed) {
  for (auto& w : violations) w.seed = seed;
  for (auto& w : flagged) w.seed = seed;
}

void VerificationReport::note_ratio(const Rational& r) {
  if (!max_ratio || *max_ratio < r) max_ratio = r;
}

std::string format_reports(const std::vector<VerificationReport>& reports, std::size_t max_witnesses) {
  std::ostringstream out;
  for (const auto& r : reports) {
    out << (r.passed() ? "PASS " : "FAIL ") << r.check << ": instances=" << r.instances
        << " assertions=" << r.assertions << " violations=" << r.violations.size();
    if (!r.flagged.empty()) out << " flagged=" << r.flagged.size();
    if (r.max_ratio) out << " max_ratio=" << *r.max_ratio << " (" << r.max_ratio->decimal(4) << ")";
    out << '\n';
    for (std::size_t k = 0; k < std::min(max_witnesses, r.violations.size()); ++k) {
      out << "    " << r.violations[k].describe() << '\n';
    }
  }
  return out.str();
}

std::string reports_csv(const std::vector<VerificationReport>& reports) {
  std::ostringstream out;
  out << "check,instances,violations,max_ratio\n";
  for (const auto& r : reports) {
    out << r.check << ',' << r.instances << ',' << r.violations.size() << ',';
    if (r.max_ratio) out << *r.max_ratio;
    out << '\n';
  }
  return out.str();
}

void fuzz_axioms_trial(BinFamily family, std::int64_t i_lo, std::int64_t i_hi, std::uint64_t seed,
                       std::uint64_t trial, VerificationReport& report) {
  std::mt19937_64 rng(mix_seed(seed, trial));
  std::uniform_int_distribution<std::int64_t> idist(i_lo, i_hi);
  const std::int64_t i = family == BinFamily::Weight ? 0 : idist(rng);
  const Rational w = random_positive(rng, 16, 8);
  const Rational p = random_positive(rng, 16, 8);
  const Rational h = random_rational(rng, 0, 16, 8);

  const auto mu = [&](const Rational& x, const Rational& pp, const Rational& hh) {
    return mu_family(family, i, x, w, pp, hh);
  };
  auto fail = [&](int axiom, const Rational& x, const Rational& l, const Rational& r) {
    report.violations.push_back(axiom_witness(axiom, family, i, x, w, p, h, l, r));
  };

  std::vector<Rational> bps = mu_breakpoints(family, i, w, p, h);
  const Rational top = bps.back() + Rational(2);

  // x: uniform on [0, top], or a breakpoint nudged by at most 1/1000
  Rational x;
  std::uniform_int_distribution<int> mode(0, 2);
  if (mode(rng) == 0) {
    std::uniform_int_distribution<std::size_t> pick(0, bps.size() - 1);
    std::uniform_int_distribution<int> nudge(-1, 1);
    x = max(Rational(0), bps[pick(rng)] + Rational(nudge(rng), 1000));
  } else {
    std::uniform_int_distribution<std::int64_t> n(0, 64);
    x = top * Rational(n(rng), 64);
  }

  const Rational y = mu(x, p, h);
  // 1: range
  ++report.assertions;
  if (y.is_negative() || y > p) fail(1, x, y, p);

  // 2: monotone in x
  const Rational x2 = x + random_rational(rng, 0, 4, 8);
  ++report.assertions;
  if (mu(x2, p, h) < y) fail(2, x2, mu(x2, p, h), y);

  // 3: zero below half the weight
  const Rational below = h + w / Rational(2) - random_positive(rng, 4, 1000) / Rational(1000);
  ++report.assertions;
  if (!mu(below, p, h).is_zero()) fail(3, below, mu(below, p, h), Rational(0));

  // 4: a partial contribution ignores extra volume
  if (y < p) {
    std::vector<Rational> volumes = {y + random_positive(rng, 8, 8), p + random_positive(rng, 8, 8)};
    if (y.is_positive()) volumes.push_back(y);
    for (const auto& pp : volumes) {
      ++report.assertions;
      const Rational v = mu(x, pp, h);
      if (v != y) fail(4, x, v, y);
    }
  }

  // 5: right-continuity at every breakpoint
  std::sort(bps.begin(), bps.end());
  for (std::size_t k = 0; k < bps.size(); ++k) {
    const Rational& b = bps[k];
    const Rational next = k + 1 < bps.size() && bps[k + 1] > b ? bps[k + 1] : b + Rational(1);
    const Rational q1 = b + (next - b) / Rational(4);
    const Rational q2 = b + (next - b) / Rational(2);
    const Rational right_limit = mu(q1, p, h) - (mu(q2, p, h) - mu(q1, p, h));
    ++report.assertions;
    if (mu(b, p, h) != right_limit) fail(5, b, mu(b, p, h), right_limit);
  }

  // 6: shift invariance
  const Rational shift = random_rational(rng, -8, 8, 8);
  ++report.assertions;
  const Rational shifted = mu(x + shift, p, h + shift);
  if (shifted != y) fail(6, x, shifted, y);
}

VerificationReport fuzz_contribution_axioms(BinFamily family, std::int64_t i_lo, std::int64_t i_hi,
                                            std::uint64_t trials, std::uint64_t seed) {
  if (i_hi < i_lo) throw std::invalid_argument("fuzz_contribution_axioms: empty index range");
  VerificationReport r;
  r.check = "axioms/" + to_string(family);
  r.instances = trials;
  for (std::uint64_t k = 0; k < trials; ++k) fuzz_axioms_trial(family, i_lo, i_hi, seed, k, r);
  return r;
}

Rational left_limit(const BarFunction& f, const Rational& q, const Rational& p) {
  const Rational m1 = q + (p - q) / Rational(2);
  const Rational m2 = q + (p - q) * Rational(3, 4);
  return f(m2) * Rational(2) - f(m1);
}

std::optional<BarViolation> first_bar_violation(const BarFunction& lhs, const BarFunction& rhs,
                                                std::vector<Rational> points) {
  points.push_back(Rational(0));
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  points.erase(points.begin(), std::find(points.begin(), points.end(), Rational(0)));

  for (std::size_t k = 0; k < points.size(); ++k) {
    const Rational& x = points[k];
    if (k > 0) {
      const Rational l = left_limit(lhs, points[k - 1], x);
      const Rational r = left_limit(rhs, points[k - 1], x);
      if (l < r) return BarViolation{x, true, l, r};
    }
    const Rational l = lhs(x);
    const Rational r = rhs(x);
    if (l < r) return BarViolation{x, false, l, r};
  }
  return std::nullopt;
}

GoodnessParams proven_goodness(BinFamily family) {
  switch (family) {
    case BinFamily::ProcTime:
      return {family, Rational(3)};
    case BinFamily::Density:
      return {family, Rational(10)};
    case BinFamily::Weight:
      return {family, Rational(1)};
  }
  throw std::logic_error("unknown bin family");
}

std::vector<Witness> ordering_property_violations(const BinState& bin, const Rational& time) {
  std::vector<Witness> out;
  if (bin.size() < 2) return out;
  const std::vector<Rational> bps = bar_breakpoints(bin);
  std::vector<Rational> xs = {Rational(0)};
  for (std::size_t k = 0; k < bps.size(); ++k) {
    xs.push_back(bps[k]);
    if (k + 1 < bps.size()) xs.push_back((bps[k] + bps[k + 1]) / Rational(2));
  }
  xs.push_back(bps.back() + Rational(1));
  for (const auto& x : xs) {
    if (x.is_negative()) continue;
    const auto gamma = contributions(bin, x);
    std::size_t highest = gamma.size();
    for (std::size_t k = gamma.size(); k-- > 0;) {
      if (gamma[k].is_positive()) {
        highest = k;
        break;
      }
    }
    if (highest == gamma.size()) continue;
    for (std::size_t k = 0; k < highest; ++k) {
      if (gamma[k] != bin.jobs()[k].remaining) {
        Witness w;
        w.time = time;
        w.x = x;
        w.jobs = {bin.jobs()[k].index(), bin.jobs()[highest].index()};
        w.left = gamma[k];
        w.right = bin.jobs()[k].remaining;
        w.detail = "ordering property in " + to_string(bin.key());
        out.push_back(std::move(w));
        break;
      }
    }
  }
  return out;
}

std::vector<Witness> arrival_violations(const BinState& before, const BinState& after,
                                        const Rational& w, const Rational& p, const Rational& c,
                                        const Rational& time, JobIndex arrived) {
  std::vector<Witness> out;
  const BarFunction b_before = [&](const Rational& x) { return bin_bar_total(before, x); };
  const BarFunction b_after = [&](const Rational& x) { return bin_bar_total(after, x); };
  const std::vector<Rational> bp_before = bar_breakpoints(before);
  const std::vector<Rational> bp_after = bar_breakpoints(after);

  auto witness = [&](const BarViolation& v, const char* what) {
    Witness wit;
    wit.time = time;
    wit.x = v.x;
    wit.jobs = {arrived};
    wit.left = v.lhs;
    wit.right = v.rhs;
    wit.detail = std::string(what) + " in " + to_string(after.key()) + (v.left_limit ? " (left limit)" : "");
    return wit;
  };

  // B(x, t) >= B(x, t^-)
  std::vector<Rational> points = bp_before;
  points.insert(points.end(), bp_after.begin(), bp_after.end());
  if (auto v = first_bar_violation(b_after, b_before, points)) out.push_back(witness(*v, "nondecreasing arrival"));

  // B(x + c w, t) >= B(x, t^-) + p
  const Rational shift = c * w;
  const BarFunction lifted = [&](const Rational& x) { return bin_bar_total(after, x + shift); };
  const BarFunction raised = [&](const Rational& x) { return bin_bar_total(before, x) + p; };
  points = bp_before;
  for (const auto& b : bp_after) points.push_back(b - shift);
  if (auto v = first_bar_violation(lifted, raised, points)) out.push_back(witness(*v, "improving arrival"));
  return out;
}

VerificationReport check_goodness_at_arrivals(const RunResult& run, const GoodnessParams& params) {
  VerificationReport r;
  r.check = "goodness/" + to_string(params.family) + "/c=" + params.c.str();
  r.instances = 1;
  for (const auto& a : run.arrivals) {
    if (a.assignment.bin.family != params.family) continue;
    const JobState& js = a.after.jobs()[a.after.position_of(a.job)];
    r.assertions += 3;
    for (auto& w : arrival_violations(a.before, a.after, js.rounded_weight, js.remaining, params.c, a.time, a.job)) {
      r.violations.push_back(std::move(w));
    }
    for (auto& w : ordering_property_violations(a.after, a.time)) r.violations.push_back(std::move(w));
  }
  return r;
}

std::vector<Witness> short_job_violations(const BinState& bin, const Rational& time) {
  std::vector<Witness> out;
  if (bin.family() == BinFamily::Weight) return out;
  const Rational threshold = pow2(bin.index());
  const bool proc = bin.family() == BinFamily::ProcTime;

  // short jobs keyed by weight class: exact weight (processing-time) or lg w (density)
  std::map<Rational, std::vector<const JobState*>> by_class;
  for (const auto& j : bin.jobs()) {
    const bool is_short = proc ? j.remaining < threshold : j.remaining < threshold * j.rounded_weight;
    if (!is_short) continue;
    const Rational cls = proc ? j.rounded_weight : Rational(floor_log2(j.rounded_weight));
    by_class[cls].push_back(&j);
  }
  for (const auto& [cls, jobs] : by_class) {
    if (jobs.size() > 1) {
      Witness w;
      w.time = time;
      for (const auto* j : jobs) w.jobs.push_back(j->index());
      w.left = Rational(static_cast<std::int64_t>(jobs.size()));
      w.right = Rational(1);
      w.detail = "several short jobs of class " + cls.str() + " in " + to_string(bin.key());
      out.push_back(std::move(w));
    }
  }
  // weight bound: short jobs of every class up to the current one
  Rational cumulative;
  for (const auto& [cls, jobs] : by_class) {
    for (const auto* j : jobs) cumulative += j->rounded_weight;
    const Rational bound = proc ? Rational(2) * cls : Rational(4) * pow2(floor(cls).get_si());
    if (!(cumulative < bound)) {
      Witness w;
      w.time = time;
      w.x = cls;
      w.left = cumulative;
      w.right = bound;
      w.detail = "short-job weight bound in " + to_string(bin.key());
      out.push_back(std::move(w));
    }
  }
  return out;
}

VerificationReport check_short_jobs(const RunResult& run, BinFamily family) {
  VerificationReport r;
  r.check = "short-jobs/" + to_string(family);
  r.instances = 1;
  for (const auto& s : run.snapshots) {
    for (const auto& b : s.bins) {
      if (b.family() != family) continue;
      ++r.assertions;
      for (auto& w : short_job_violations(b, s.time)) r.violations.push_back(std::move(w));
    }
  }
  return r;
}

namespace {

void ordering_step(const BinState& b, const Rational& t, std::map<BinKey, std::vector<JobIndex>>& last,
                   VerificationReport& r) {
  ++r.assertions;
  for (std::size_t k = 0; k + 1 < b.size(); ++k) {
    if (!prec_less(b.jobs()[k], b.jobs()[k + 1])) {
      Witness w;
      w.time = t;
      w.jobs = {b.jobs()[k].index(), b.jobs()[k + 1].index()};
      w.detail = "stack out of order at its own time in " + to_string(b.key());
      r.violations.push_back(std::move(w));
    }
  }
  const auto now = indices_of(b);
  auto& prev = last[b.key()];
  const std::set<JobIndex> now_set(now.begin(), now.end());
  const std::set<JobIndex> prev_set(prev.begin(), prev.end());
  std::vector<JobIndex> kept_prev, kept_now;
  for (auto j : prev) {
    if (now_set.count(j)) kept_prev.push_back(j);
  }
  for (auto j : now) {
    if (prev_set.count(j)) kept_now.push_back(j);
  }
  if (kept_prev != kept_now) {
    Witness w;
    w.time = t;
    w.jobs = kept_now;
    w.detail = "relative order changed in " + to_string(b.key());
    r.violations.push_back(std::move(w));
  }
  prev = now;
}

void score_step(const BinState& b, const Rational& t, VerificationReport& r) {
  if (b.empty()) return;
  ++r.assertions;
  const Rational sc = score(b);
  const Rational ht = bin_height(b);
  if (sc != ht) {
    Witness w;
    w.time = t;
    w.jobs = indices_of(b);
    w.left = sc;
    w.right = ht;
    w.detail = "score != height in " + to_string(b.key());
    r.violations.push_back(std::move(w));
  }
}

VerificationReport named(std::string check) {
  VerificationReport r;
  r.check = std::move(check);
  r.instances = 1;
  return r;
}

}  // namespace

VerificationReport check_ordering_invariance(const RunResult& run) {
  VerificationReport r = named("ordering-invariance");
  std::map<BinKey, std::vector<JobIndex>> last;
  for (const auto& s : run.snapshots) {
    for (const auto& b : s.bins) ordering_step(b, s.time, last, r);
  }
  return r;
}

VerificationReport check_score_height_equality(const RunResult& run) {
  VerificationReport r = named("score-height");
  for (const auto& s : run.snapshots) {
    for (const auto& b : s.bins) score_step(b, s.time, r);
  }
  return r;
}

Decision decision_of(const Snapshot& s) {
  if (!s.selected) throw std::invalid_argument("decision_of: snapshot without a selected bin");
  for (const auto& b : s.bins) {
    if (b.key() == *s.selected) return {s.time, b.key(), b.top().index()};
  }
  throw std::invalid_argument("decision_of: selected bin is empty");
}

VerificationReport check_top_job_discipline(const ScheduleTrace& trace, const Instance& inst,
                                            const std::vector<Decision>& decisions) {
  VerificationReport r = named("top-job");
  std::map<Rational, const Decision*> at;
  for (const auto& d : decisions) at[d.time] = &d;

  for (const auto& seg : trace.segments) {
    if (!seg.job) {
      for (const auto& j : inst.jobs()) {
        ++r.assertions;
        if (j.release <= seg.start && seg.start < trace.completions.at(j.index)) {
          Witness w;
          w.time = seg.start;
          w.jobs = {j.index};
          w.detail = "machine idle while a job is alive";
          r.violations.push_back(std::move(w));
        }
      }
      continue;
    }
    // a merged segment may span several decisions
    auto it = at.lower_bound(seg.start);
    if (it == at.end() || it->first != seg.start) {
      Witness w;
      w.time = seg.start;
      w.jobs = {*seg.job};
      w.detail = "segment starts without a decision";
      r.violations.push_back(std::move(w));
    }
    for (; it != at.end() && it->first < seg.end; ++it) {
      const Decision& d = *it->second;
      ++r.assertions;
      if (d.top != *seg.job || (seg.bin && d.bin != *seg.bin)) {
        Witness w;
        w.time = d.time;
        w.jobs = {*seg.job, d.top};
        w.detail = "processed job is not the top of the selected bin " + to_string(d.bin);
        r.violations.push_back(std::move(w));
      }
    }
  }
  return r;
}

VerificationReport check_top_job_discipline(const RunResult& run, const Instance& inst) {
  std::vector<Decision> decisions;
  for (const auto& s : run.snapshots) decisions.push_back(decision_of(s));
  return check_top_job_discipline(run.trace, inst, decisions);
}

StructureMonitor::StructureMonitor()
    : short_proc_(named("short-jobs/proc")),
      short_dens_(named("short-jobs/dens")),
      ordering_(named("ordering-invariance")),
      score_(named("score-height")) {}

void StructureMonitor::observe(const Snapshot& s) {
  for (const auto& b : s.bins) {
    if (b.family() != BinFamily::Weight) {
      auto& r = b.family() == BinFamily::ProcTime ? short_proc_ : short_dens_;
      ++r.assertions;
      for (auto& w : short_job_violations(b, s.time)) r.violations.push_back(std::move(w));
    }
    ordering_step(b, s.time, last_order_, ordering_);
    score_step(b, s.time, score_);
  }
  decisions_.push_back(decision_of(s));
}

std::vector<VerificationReport> StructureMonitor::finish(const RunResult& run, const Instance& inst) {
  return {short_proc_, short_dens_, ordering_, score_, check_top_job_discipline(run.trace, inst, decisions_)};
}

VerificationReport check_flow_identity(const RunResult& run, const Instance& inst) {
  VerificationReport r;
  r.check = "flow-identity/" + run.policy;
  r.instances = 1;
  r.assertions = 1;
  const Rational flow = weighted_flow(run.trace, inst);
  const Rational integral = integrate_step(weight_trace(run, inst, WeightBasis::Original));
  if (flow != integral || flow != run.cost) {
    Witness w;
    w.left = flow;
    w.right = integral;
    w.detail = "weighted flow != integral of alive weight (" + run.policy + ")";
    r.violations.push_back(std::move(w));
  }
  return r;
}

Instance rounded_instance(const RunResult& run, const Instance& inst) {
  std::vector<Rational> weights;
  for (const auto& j : inst.jobs()) {
    auto it = run.rounded_weights.find(j.index);
    weights.push_back(it == run.rounded_weights.end() ? j.weight : it->second);
  }
  return inst.with_weights(weights);
}

VerificationReport check_local_competitiveness(const RunResult& run, const Instance& rounded,
                                               const OracleResult& opt, const Rational& c) {
  VerificationReport r;
  r.check = "local-competitiveness/" + run.policy;
  r.instances = 1;
  for (const auto& j : rounded.jobs()) {
    auto rw = run.rounded_weights.find(j.index);
    if (rw == run.rounded_weights.end() || rw->second != j.weight || !run.trace.completions.count(j.index) ||
        !opt.best.trace.completions.count(j.index)) {
      throw std::invalid_argument("check_local_competitiveness: run, oracle and instance disagree on job " +
                                  std::to_string(j.index));
    }
  }
  if (run.trace.completions.size() != rounded.size() || opt.best.trace.completions.size() != rounded.size()) {
    throw std::invalid_argument("check_local_competitiveness: job sets differ");
  }

  const StepFunction alg = weight_trace(run, rounded, WeightBasis::Original);
  const StepFunction star = weight_trace(opt.best, rounded, WeightBasis::Original);
  std::set<Rational> points;
  for (const auto& [t, v] : alg.breakpoints) points.insert(t);
  for (const auto& [t, v] : star.breakpoints) points.insert(t);

  for (const auto& t : points) {
    std::set<BinKey> nonempty;
    for (const auto& j : rounded.jobs()) {
      if (j.release <= t && t < run.trace.completions.at(j.index)) nonempty.insert(run.bin_of.at(j.index));
    }
    const Rational w_alg = alg.value_at(t);
    const Rational w_opt = star.value_at(t);
    ++r.assertions;
    if (w_opt.is_zero()) {
      if (w_alg.is_positive()) {
        Witness w;
        w.time = t;
        w.left = w_alg;
        w.right = w_opt;
        w.detail = "optimum idle while the algorithm holds weight";
        r.flagged.push_back(std::move(w));
      }
      continue;
    }
    r.note_ratio(w_alg / w_opt);
    const Rational bound = Rational(2) * c * Rational(static_cast<std::int64_t>(nonempty.size())) * w_opt;
    if (w_alg > bound) {
      Witness w;
      w.time = t;
      w.left = w_alg;
      w.right = bound;
      w.detail = "W(t) > 2c|A'|W*(t) with |A'|=" + std::to_string(nonempty.size());
      r.violations.push_back(std::move(w));
    }
  }
  return r;
}

std::int64_t combined_bin_bound(const InstanceStats& stats) {
  return 3 * (ceil_log2(stats.min_ratio()) + 1);
}

VerificationReport check_bin_count(const RunResult& run, const InstanceStats& stats) {
  VerificationReport r;
  r.check = "bin-count";
  r.instances = 1;
  r.assertions = 1;
  const std::int64_t bound = combined_bin_bound(stats);
  const auto opened = static_cast<std::int64_t>(run.opened_bins);
  r.note_ratio(Rational(opened, bound));
  if (opened > bound) {
    Witness w;
    w.left = Rational(opened);
    w.right = Rational(bound);
    w.detail = "opened bins exceed 3(ceil(log2 min(W,P,D)) + 1)";
    r.violations.push_back(std::move(w));
  }
  return r;
}

}  // namespace wfsched
