#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wfsched/instance.hpp"
#include "wfsched/rational.hpp"

namespace wfsched {

/// The three bin families: processing-time classes, density classes and
/// weight classes. Declaration order is the select_bin tie-break order.
enum class BinFamily { ProcTime, Density, Weight };

std::string to_string(BinFamily f);

struct BinKey {
  BinFamily family = BinFamily::ProcTime;
  std::int64_t index = 0;

  friend auto operator<=>(const BinKey&, const BinKey&) = default;
};

std::string to_string(const BinKey& k);

/// A job alive inside a bin. `job` points into the owning Instance, which
/// must outlive every state and snapshot referring to it.
struct JobState {
  const Job* job = nullptr;
  Rational rounded_weight;
  Rational remaining;

  JobIndex index() const { return job->index; }
  /// Remaining density p_t / w under the rounded weight.
  Rational current_density() const { return remaining / rounded_weight; }
};

/// Priority order within a bin: lower weight class first, then higher
/// remaining density, then larger index. Throws when a and b are the same job.
bool prec_less(const JobState& a, const JobState& b);

/// Jobs of one bin, bottom to top. back() is the processable top job.
class BinState {
 public:
  explicit BinState(BinKey key) : key_(key) {}
  /// Trusts the caller's bottom-to-top order. Used for hand-built states,
  /// including illegal ones for detector self-tests.
  BinState(BinKey key, std::vector<JobState> bottom_to_top)
      : key_(key), jobs_(std::move(bottom_to_top)) {}

  const BinKey& key() const { return key_; }
  BinFamily family() const { return key_.family; }
  std::int64_t index() const { return key_.index; }

  const std::vector<JobState>& jobs() const { return jobs_; }
  bool empty() const { return jobs_.empty(); }
  std::size_t size() const { return jobs_.size(); }

  const JobState& top() const;
  JobState& top();

  /// Inserts at the position given by prec_less (binary search).
  void insert(JobState js);
  void pop_top();

  /// Position of the job, throws std::out_of_range if it is not in the bin.
  std::size_t position_of(JobIndex index) const;
  bool contains(JobIndex index) const;

  Rational total_weight() const;
  Rational total_remaining() const;

 private:
  BinKey key_;
  std::vector<JobState> jobs_;
};

/// Total rounded weight strictly below `j` in its bin.
Rational base(const BinState& bin, const JobState& j);
/// Bases of all jobs, bottom to top.
std::vector<Rational> bases(const BinState& bin);

// Contribution functions. All throw std::invalid_argument for w <= 0 or p <= 0.
Rational mu_proc(std::int64_t i, const Rational& x, const Rational& w, const Rational& p,
                 const Rational& h);
Rational mu_dens(std::int64_t i, const Rational& x, const Rational& w, const Rational& p,
                 const Rational& h);
Rational mu_weight(const Rational& x, const Rational& w, const Rational& p, const Rational& h);

/// Points where mu(., w, p, h) of the given family jumps or changes slope.
std::vector<Rational> mu_breakpoints(BinFamily family, std::int64_t i, const Rational& w,
                                     const Rational& p, const Rational& h);

/// Dispatches to the family contribution function with the bin's index.
Rational mu_for(const BinKey& key, const Rational& x, const Rational& w, const Rational& p,
                const Rational& h);

/// gamma_J(x): the job's contribution to the bar at height x.
Rational contribution(const BinState& bin, const JobState& j, const Rational& x);

/// B_A(x): total contribution of the bin at height x.
Rational bin_bar_total(const BinState& bin, const Rational& x);

/// Per-job contributions at height x, bottom to top (bases computed once).
std::vector<Rational> contributions(const BinState& bin, const Rational& x);

/// Sorted, deduplicated points where B_A(., t) jumps or changes slope.
std::vector<Rational> bar_breakpoints(const BinState& bin);

/// The family score used to pick a bin. Throws std::invalid_argument on an empty bin.
Rational score(const BinState& bin);

/// Height of the bin: the least bar height at which the top job contributes
/// its whole remaining volume, in closed form. Throws on an empty bin.
Rational bin_height(const BinState& bin);

}  // namespace wfsched
