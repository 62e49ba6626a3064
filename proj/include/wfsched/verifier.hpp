#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wfsched/bins.hpp"
#include "wfsched/instance.hpp"
#include "wfsched/oracle.hpp"
#include "wfsched/simulation.hpp"

namespace wfsched {

/// Enough to replay a failure: instance seed, event time, bar height, jobs,
/// and the two sides of the violated comparison.
struct Witness {
  std::uint64_t seed = 0;
  Rational time;
  std::optional<Rational> x;
  std::vector<JobIndex> jobs;
  Rational left;
  Rational right;
  std::string detail;

  std::string describe() const;
};

struct VerificationReport {
  std::string check;
  std::size_t instances = 0;
  std::uint64_t assertions = 0;
  std::vector<Witness> violations;
  /// Points needing manual review rather than counted as violations.
  std::vector<Witness> flagged;
  std::optional<Rational> max_ratio;

  bool passed() const { return violations.empty(); }
  void merge(const VerificationReport& other);
  void stamp_seed(std::uint64_t seed);
  void note_ratio(const Rational& r);
};

/// Human-readable summary, one line per report plus the first witnesses.
std::string format_reports(const std::vector<VerificationReport>& reports, std::size_t max_witnesses = 3);
/// `check,instances,violations,max_ratio`
std::string reports_csv(const std::vector<VerificationReport>& reports);

// ---------------------------------------------------------------------------
// Contribution-function axioms

/// One randomized round of all six axioms for one family. Deterministic in
/// (seed, trial), so trials can run in any order.
void fuzz_axioms_trial(BinFamily family, std::int64_t i_lo, std::int64_t i_hi, std::uint64_t seed,
                       std::uint64_t trial, VerificationReport& report);

VerificationReport fuzz_contribution_axioms(BinFamily family, std::int64_t i_lo, std::int64_t i_hi,
                                            std::uint64_t trials, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Piecewise-linear comparison on [0, inf)

using BarFunction = std::function<Rational(const Rational&)>;

/// Left limit of a function that is linear on (q, p).
Rational left_limit(const BarFunction& f, const Rational& q, const Rational& p);

struct BarViolation {
  Rational x;
  bool left_limit = false;
  Rational lhs;
  Rational rhs;
};

/// Checks lhs(x) >= rhs(x) for every x >= 0, given that both sides are
/// right-continuous and linear between consecutive `points`. Evaluates at each
/// point and at each left limit.
std::optional<BarViolation> first_bar_violation(const BarFunction& lhs, const BarFunction& rhs,
                                                std::vector<Rational> points);

// ---------------------------------------------------------------------------
// c-goodness

struct GoodnessParams {
  BinFamily family = BinFamily::ProcTime;
  Rational c{3};
};

/// The proven constants: 3 for processing-time, 10 for density, 1 for weight bins.
GoodnessParams proven_goodness(BinFamily family);

/// Ordering property on one state: whenever a job contributes, every job
/// below it contributes its whole remaining volume. Checked at all breakpoints
/// and midpoints between them.
std::vector<Witness> ordering_property_violations(const BinState& bin, const Rational& time = {});

/// Arrival properties for one arrival of `arrived` with rounded weight w and
/// volume p: B(x,t) >= B(x,t^-) and B(x + c*w, t) >= B(x, t^-) + p.
std::vector<Witness> arrival_violations(const BinState& before, const BinState& after,
                                        const Rational& w, const Rational& p, const Rational& c,
                                        const Rational& time, JobIndex arrived);

VerificationReport check_goodness_at_arrivals(const RunResult& run, const GoodnessParams& params);

// ---------------------------------------------------------------------------
// Structural invariants

/// Short-job uniqueness per weight class, plus the derived weight bounds.
/// Processing-time bins: jobs with p_t < 2^i, classes by exact weight, w(S) < 2x.
/// Density bins: jobs with d_t < 2^i, classes by lg w, w(S) < 4 * 2^y.
/// Weight bins carry no such bound and yield no witnesses.
std::vector<Witness> short_job_violations(const BinState& bin, const Rational& time = {});

VerificationReport check_short_jobs(const RunResult& run, BinFamily family);

/// Every snapshot is sorted under the order of its own time, and co-alive
/// pairs keep their relative order across snapshots.
VerificationReport check_ordering_invariance(const RunResult& run);

VerificationReport check_score_height_equality(const RunResult& run);

/// The bin chosen at a decision point and the job on top of it.
struct Decision {
  Rational time;
  BinKey bin;
  JobIndex top = 0;
};

Decision decision_of(const Snapshot& s);

/// Each processed segment runs the top job of the bin selected at its start,
/// and the machine never idles while a job is alive.
VerificationReport check_top_job_discipline(const ScheduleTrace& trace, const Instance& inst,
                                            const std::vector<Decision>& decisions);
VerificationReport check_top_job_discipline(const RunResult& run, const Instance& inst);

/// Streaming form of the snapshot checks above, for runs too long to keep
/// every snapshot. Pass observe() as SimOptions::on_snapshot.
class StructureMonitor {
 public:
  StructureMonitor();
  void observe(const Snapshot& s);
  /// short-jobs (both families), ordering invariance, score/height, top-job.
  std::vector<VerificationReport> finish(const RunResult& run, const Instance& inst);

 private:
  VerificationReport short_proc_;
  VerificationReport short_dens_;
  VerificationReport ordering_;
  VerificationReport score_;
  std::map<BinKey, std::vector<JobIndex>> last_order_;
  std::vector<Decision> decisions_;
};

/// weighted_flow(trace) == integral of the alive-weight trace.
VerificationReport check_flow_identity(const RunResult& run, const Instance& inst);

// ---------------------------------------------------------------------------
// Competitiveness

/// W(t) <= 2c |A'(t)| W*(t) at every breakpoint, where W uses the run's rounded
/// weights, W* comes from `opt` computed on `rounded` (the instance with the
/// run's rounded weights), and |A'(t)| counts nonempty bins. Points with
/// W*(t) = 0 < W(t) are flagged, not counted. Throws std::invalid_argument if
/// the run, the rounded instance and the oracle disagree on jobs or weights.
VerificationReport check_local_competitiveness(const RunResult& run, const Instance& rounded,
                                               const OracleResult& opt, const Rational& c);

/// 3 (ceil(log2 min(W, P, D)) + 1)
std::int64_t combined_bin_bound(const InstanceStats& stats);

VerificationReport check_bin_count(const RunResult& run, const InstanceStats& stats);

/// The run's rounded-weight instance (what the oracle is compared against).
Instance rounded_instance(const RunResult& run, const Instance& inst);

}  // namespace wfsched
