#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "wfsched/instance.hpp"
#include "wfsched/simulation.hpp"

namespace wfsched {

/// What a chooser sees at a decision epoch (a release, or the completion of
/// the job chosen at the previous epoch). Positions index Instance::jobs().
struct EpochView {
  const Rational& time;
  const std::vector<Rational>& remaining;
  const std::vector<std::size_t>& alive;
};

/// Returns one element of view.alive.
using EpochChooser = std::function<std::size_t(const EpochView&)>;

/// Runs the work-conserving schedule that, at each epoch, processes the chosen
/// alive job until it completes or the next release arrives.
RunResult run_epoch_schedule(const Instance& inst, const EpochChooser& choose, std::string policy);

/// Uniformly random choice at every epoch.
RunResult random_epoch_schedule(const Instance& inst, std::mt19937_64& rng);

struct OracleResult {
  RunResult best;
  /// Complete schedules enumerated; with memoization, distinct final states.
  std::uint64_t schedules_explored = 0;
};

struct OracleOptions {
  std::size_t limit = 6;
  bool memoize = true;
};

/// Minimum weighted flow time over all epoch schedules (see run_epoch_schedule).
///
/// Some optimal preemptive schedule belongs to this class. Take any optimum
/// and an interval between consecutive releases. Moving the jobs that
/// complete inside the interval to its front never delays a completion. If
/// two jobs A, B are processed in the interval without completing there and
/// A completes first overall, reassigning the union of their slots from that
/// point on to A first and then B leaves B's completion unchanged and does
/// not delay A, while leaving at most one of them unfinished in the interval.
/// Repeating left to right gives an optimum that switches jobs only at
/// releases and completions, so exhaustive search over this class is exact.
///
/// Throws std::invalid_argument for an empty instance or more than limit jobs.
OracleResult brute_force_opt(const Instance& inst, const OracleOptions& opts = {});

/// Highest residual density w / p_t first, ties by smaller index.
RunResult hdf_baseline(const Instance& inst);

/// Alive weight of the oracle's schedule. With Rounded, the weights the
/// oracle was run on are used (the oracle's instance may itself be rounded).
StepFunction opt_weight_trace(const OracleResult& oracle, const Instance& inst,
                              WeightBasis basis = WeightBasis::Original);

}  // namespace wfsched
