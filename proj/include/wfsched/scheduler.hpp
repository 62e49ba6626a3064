#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "wfsched/bins.hpp"
#include "wfsched/instance.hpp"

namespace wfsched {

enum class SchedulerKind { ProcAlgo, DensAlgo, WeightAlgo, CombinedAlgo };

std::string to_string(SchedulerKind k);
/// Accepts p, d, w, min (and the long names). Throws std::invalid_argument.
SchedulerKind parse_scheduler_kind(const std::string& s);

/// True for policies whose scores are piecewise constant between releases,
/// completions and threshold crossings, so exact event-driven simulation applies.
bool supports_exact(SchedulerKind k);

struct Assignment {
  BinKey bin;
  Rational rounded_weight;
  std::vector<BinKey> newly_opened;
};

/// Processing-time class lg p, weight rounded up to 2^{lg w + 1}.
Assignment assign_proc(const Job& j);
/// Density class lg d, weight raised so the density becomes exactly 2^{lg d}.
Assignment assign_dens(const Job& j);
/// Weight class lg w + 1, weight rounded up to 2^{lg w + 1}.
Assignment assign_weight(const Job& j);

struct SchedulerState {
  explicit SchedulerState(SchedulerKind k) : kind(k) {}

  SchedulerKind kind;
  std::map<BinKey, BinState> bins;
  /// Only used by CombinedAlgo; grows by triplets and never shrinks.
  std::set<BinKey> open_keys;

  BinState& bin(const BinKey& key);
  std::size_t nonempty_bins() const;
};

/// Prefers an open processing-time bin, then density, then weight; if none of
/// the three candidates is open, opens all three and uses the weight bin.
Assignment assign_combined(const Job& j, SchedulerState& state);

/// Assignment rule of state.kind (opens bins for CombinedAlgo).
Assignment assign(const Job& j, SchedulerState& state);

/// Inserts the job into its assigned bin and returns the assignment.
Assignment admit(const Job& j, SchedulerState& state);

/// Nonempty bin of maximum score. Ties go to `current` if it is among the
/// maximizers, otherwise to the smallest key (family order, then index).
std::optional<BinKey> select_bin(const SchedulerState& state, const std::optional<BinKey>& current);

}  // namespace wfsched
