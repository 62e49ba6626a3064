#include "wfsched/simulation.hpp"

#include <sstream>
#include <stdexcept>

namespace wfsched {

namespace {

enum class Reason { Completion, Release, Threshold, Boundary };

Rational next_boundary(const Rational& t, const Rational& delta) {
  return Rational(mpq_class(floor(t / delta) + 1)) * delta;
}

void record_snapshot(RunResult& run, const SchedulerState& st, const Rational& t,
                     const std::optional<BinKey>& selected, const SimOptions& opts) {
  Snapshot s;
  s.time = t;
  s.selected = selected;
  s.opened_bins = st.open_keys.size();
  for (const auto& [key, b] : st.bins) {
    if (!b.empty()) s.bins.push_back(b);
  }
  if (opts.on_snapshot) opts.on_snapshot(s);
  if (opts.record_snapshots) run.snapshots.push_back(std::move(s));
}

RunResult simulate(const Instance& inst, SchedulerKind kind, const std::optional<Rational>& delta,
                   const SimOptions& opts) {
  if (inst.empty()) throw std::invalid_argument("simulate: empty instance");
  RunResult run;
  run.policy = to_string(kind);
  SchedulerState st(kind);

  const std::size_t n = inst.size();
  std::size_t next = 0;
  Rational t = inst[0].release;
  std::optional<BinKey> current;

  while (true) {
    while (next < n && inst[next].release == t) {
      const Job& j = inst[next];
      ArrivalRecord rec;
      rec.time = t;
      rec.job = j.index;
      Assignment a = assign(j, st);
      BinState& b = st.bin(a.bin);
      rec.before = b;
      b.insert(JobState{&j, a.rounded_weight, j.proc});
      rec.after = b;
      rec.assignment = a;
      run.rounded_weights[j.index] = a.rounded_weight;
      run.bin_of[j.index] = a.bin;
      run.arrivals.push_back(std::move(rec));
      run.events.push_back({t, EventKind::Release, j.index, a.bin});
      ++next;
    }

    const std::optional<BinKey> sel = select_bin(st, current);
    if (!sel) {
      if (next == n) break;
      append_segment(run.trace, t, inst[next].release, std::nullopt, std::nullopt);
      t = inst[next].release;
      current.reset();
      continue;
    }
    if (opts.record_snapshots || opts.on_snapshot) record_snapshot(run, st, t, sel, opts);

    BinState& b = st.bins.at(*sel);
    JobState& top = b.top();
    Rational t_next = t + top.remaining;
    Reason reason = Reason::Completion;
    if (next < n && inst[next].release < t_next) {
      t_next = inst[next].release;
      reason = Reason::Release;
    }
    const Rational threshold = pow2(b.index());
    if (b.family() == BinFamily::ProcTime && top.remaining > threshold) {
      const Rational cross = t + top.remaining - threshold;
      if (cross <= t_next) {
        t_next = cross;
        reason = Reason::Threshold;
      }
    }
    if (delta) {
      const Rational boundary = next_boundary(t, *delta);
      if (boundary < t_next) {
        t_next = boundary;
        reason = Reason::Boundary;
      }
    }

    const Rational before = top.remaining;
    top.remaining -= t_next - t;
    append_segment(run.trace, t, t_next, top.index(), *sel);
    t = t_next;
    current = sel;

    if (top.remaining.is_zero()) {
      const JobIndex done = top.index();
      run.trace.completions[done] = t;
      b.pop_top();
      run.events.push_back({t, EventKind::Completion, done, *sel});
    } else if (b.family() == BinFamily::ProcTime && before > threshold && top.remaining == threshold) {
      run.events.push_back({t, EventKind::ThresholdCross, top.index(), *sel});
    } else if (reason == Reason::Boundary) {
      run.events.push_back({t, EventKind::QuantumBoundary, std::nullopt, std::nullopt});
    }
  }

  run.opened_bins = kind == SchedulerKind::CombinedAlgo ? st.open_keys.size() : st.bins.size();
  finalize_run(run, inst);
  return run;
}

}  // namespace

std::string to_string(EventKind k) {
  switch (k) {
    case EventKind::Release:
      return "release";
    case EventKind::Completion:
      return "completion";
    case EventKind::ThresholdCross:
      return "threshold";
    case EventKind::QuantumBoundary:
      return "quantum";
  }
  return "?";
}

Rational StepFunction::value_at(const Rational& t) const {
  Rational v;
  for (const auto& [time, value] : breakpoints) {
    if (time > t) break;
    v = value;
  }
  return v;
}

void append_segment(ScheduleTrace& trace, const Rational& start, const Rational& end,
                    std::optional<JobIndex> job, std::optional<BinKey> bin) {
  if (!(start < end)) return;
  if (!trace.segments.empty()) {
    Segment& last = trace.segments.back();
    if (last.end == start && last.job == job && last.bin == bin) {
      last.end = end;
      return;
    }
  }
  trace.segments.push_back({start, end, job, bin});
}

void finalize_run(RunResult& run, const Instance& inst) {
  run.cost = weighted_flow(run.trace, inst);
  run.weight_fn = weight_trace(run, inst, WeightBasis::Original);
}

RunResult simulate_exact(const Instance& inst, SchedulerKind kind, const SimOptions& opts) {
  if (!supports_exact(kind)) {
    throw std::invalid_argument("exact mode supports only p and w; use quantum mode for " +
                                to_string(kind));
  }
  return simulate(inst, kind, std::nullopt, opts);
}

RunResult simulate_quantum(const Instance& inst, SchedulerKind kind, const Rational& delta,
                           const SimOptions& opts) {
  if (!delta.is_positive()) throw std::invalid_argument("quantum delta must be positive");
  return simulate(inst, kind, delta, opts);
}

Rational default_delta(const Instance& inst) { return inst.min_proc() / Rational(16); }

Rational weighted_flow(const ScheduleTrace& trace, const Instance& inst) {
  Rational total;
  for (const auto& j : inst.jobs()) {
    auto it = trace.completions.find(j.index);
    if (it == trace.completions.end()) {
      throw std::invalid_argument("weighted_flow: job " + std::to_string(j.index) + " never completes");
    }
    total += j.weight * (it->second - j.release);
  }
  return total;
}

StepFunction weight_trace(const RunResult& run, const Instance& inst, WeightBasis basis) {
  std::map<Rational, Rational> jumps;
  for (const auto& j : inst.jobs()) {
    auto c = run.trace.completions.find(j.index);
    if (c == run.trace.completions.end()) {
      throw std::invalid_argument("weight_trace: job " + std::to_string(j.index) + " never completes");
    }
    Rational w = j.weight;
    if (basis == WeightBasis::Rounded) {
      auto r = run.rounded_weights.find(j.index);
      if (r != run.rounded_weights.end()) w = r->second;
    }
    jumps[j.release] += w;
    jumps[c->second] -= w;
  }
  StepFunction f;
  Rational value;
  for (const auto& [time, dw] : jumps) {
    if (dw.is_zero()) continue;
    value += dw;
    f.breakpoints.emplace_back(time, value);
  }
  return f;
}

Rational integrate_step(const StepFunction& f) {
  if (f.breakpoints.empty()) return Rational(0);
  if (!f.breakpoints.back().second.is_zero()) {
    throw std::domain_error("integrate_step: unbounded support (final value is nonzero)");
  }
  Rational total;
  for (std::size_t k = 0; k + 1 < f.breakpoints.size(); ++k) {
    total += f.breakpoints[k].second * (f.breakpoints[k + 1].first - f.breakpoints[k].first);
  }
  return total;
}

std::string trace_csv(const ScheduleTrace& trace, bool with_decimal) {
  std::ostringstream out;
  out << "start,end,job_index,bin_family,bin_index";
  if (with_decimal) out << ",start_dec,end_dec";
  out << '\n';
  for (const auto& s : trace.segments) {
    out << s.start << ',' << s.end << ',';
    if (s.job) {
      out << *s.job;
    } else {
      out << "idle";
    }
    out << ',';
    if (s.bin) out << to_string(s.bin->family) << ',' << s.bin->index;
    else out << ',';
    if (with_decimal) out << ',' << s.start.decimal() << ',' << s.end.decimal();
    out << '\n';
  }
  return out.str();
}

std::string weight_csv(const StepFunction& f, bool with_decimal) {
  std::ostringstream out;
  out << "time,W_alg";
  if (with_decimal) out << ",time_dec,W_alg_dec";
  out << '\n';
  for (const auto& [t, v] : f.breakpoints) {
    out << t << ',' << v;
    if (with_decimal) out << ',' << t.decimal() << ',' << v.decimal();
    out << '\n';
  }
  return out.str();
}

}  // namespace wfsched
