#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wfsched/bins.hpp"
#include "wfsched/instance.hpp"
#include "wfsched/scheduler.hpp"

namespace wfsched {

enum class EventKind { Release, Completion, ThresholdCross, QuantumBoundary };

std::string to_string(EventKind k);

struct Event {
  Rational time;
  EventKind kind = EventKind::Release;
  std::optional<JobIndex> job;
  std::optional<BinKey> bin;
};

/// [start, end) during which `job` (or nothing, when idle) is processed.
struct Segment {
  Rational start;
  Rational end;
  std::optional<JobIndex> job;
  std::optional<BinKey> bin;
};

struct ScheduleTrace {
  std::vector<Segment> segments;
  std::map<JobIndex, Rational> completions;
};

/// Right-continuous step function: value v_k on [t_k, t_{k+1}), 0 before t_0.
struct StepFunction {
  std::vector<std::pair<Rational, Rational>> breakpoints;

  Rational value_at(const Rational& t) const;
};

/// State of every nonempty bin at a decision point, and the bin chosen there.
struct Snapshot {
  Rational time;
  std::vector<BinState> bins;
  std::optional<BinKey> selected;
  std::size_t opened_bins = 0;
};

/// Bin contents just before (t^-) and just after (t) one job's arrival.
struct ArrivalRecord {
  Rational time;
  JobIndex job = 0;
  Assignment assignment;
  BinState before{BinKey{}};
  BinState after{BinKey{}};
};

struct RunResult {
  std::string policy;
  ScheduleTrace trace;
  /// Weighted flow time on the original weights.
  Rational cost;
  /// Alive weight on the original weights.
  StepFunction weight_fn;
  std::vector<Snapshot> snapshots;
  std::vector<ArrivalRecord> arrivals;
  std::vector<Event> events;
  std::map<JobIndex, Rational> rounded_weights;
  std::map<JobIndex, BinKey> bin_of;
  std::size_t opened_bins = 0;
};

struct SimOptions {
  /// Per-decision bin snapshots; arrival records are always kept.
  bool record_snapshots = true;
  /// Called with every decision snapshot, whether or not it is stored.
  std::function<void(const Snapshot&)> on_snapshot;
};

/// Event-driven run for ProcAlgo and WeightAlgo. Decisions are taken at
/// releases, completions and processing-time threshold crossings.
/// Throws std::invalid_argument for other kinds or an empty instance.
RunResult simulate_exact(const Instance& inst, SchedulerKind kind, const SimOptions& opts = {});

/// Same engine with additional decision points at every multiple of delta.
/// Throws std::invalid_argument for delta <= 0 or an empty instance.
RunResult simulate_quantum(const Instance& inst, SchedulerKind kind, const Rational& delta,
                           const SimOptions& opts = {});

/// Default quantum: smallest processing time / 16.
Rational default_delta(const Instance& inst);

/// Sum of w(J)(c(J) - r(J)) with the instance's weights.
/// Throws std::invalid_argument if some job has no completion.
Rational weighted_flow(const ScheduleTrace& trace, const Instance& inst);

enum class WeightBasis { Original, Rounded };

/// Total alive weight over time: up at releases, down at completions.
StepFunction weight_trace(const RunResult& run, const Instance& inst, WeightBasis basis);

/// Exact integral. Throws std::domain_error if the final value is nonzero.
Rational integrate_step(const StepFunction& f);

/// `start,end,job_index,bin_family,bin_index[,start_dec,end_dec]`
std::string trace_csv(const ScheduleTrace& trace, bool with_decimal = false);
/// `time,W_alg[,time_dec,W_alg_dec]`
std::string weight_csv(const StepFunction& f, bool with_decimal = false);

/// Appends [start, end) for `job`, merging with a contiguous segment of the same job.
void append_segment(ScheduleTrace& trace, const Rational& start, const Rational& end,
                    std::optional<JobIndex> job, std::optional<BinKey> bin);

/// Fills cost and weight_fn from the trace (original weights).
void finalize_run(RunResult& run, const Instance& inst);

}  // namespace wfsched
