#include "wfsched/scheduler.hpp"

#include <stdexcept>

namespace wfsched {

std::string to_string(SchedulerKind k) {
  switch (k) {
    case SchedulerKind::ProcAlgo:
      return "p";
    case SchedulerKind::DensAlgo:
      return "d";
    case SchedulerKind::WeightAlgo:
      return "w";
    case SchedulerKind::CombinedAlgo:
      return "min";
  }
  return "?";
}

SchedulerKind parse_scheduler_kind(const std::string& s) {
  if (s == "p" || s == "proc") return SchedulerKind::ProcAlgo;
  if (s == "d" || s == "dens" || s == "density") return SchedulerKind::DensAlgo;
  if (s == "w" || s == "weight") return SchedulerKind::WeightAlgo;
  if (s == "min" || s == "combined") return SchedulerKind::CombinedAlgo;
  throw std::invalid_argument("unknown algorithm '" + s + "' (expected p, d, w or min)");
}

bool supports_exact(SchedulerKind k) {
  return k == SchedulerKind::ProcAlgo || k == SchedulerKind::WeightAlgo;
}

Assignment assign_proc(const Job& j) {
  return {{BinFamily::ProcTime, floor_log2(j.proc)}, pow2(floor_log2(j.weight) + 1), {}};
}

Assignment assign_dens(const Job& j) {
  const auto i = floor_log2(j.density());
  return {{BinFamily::Density, i}, j.proc / pow2(i), {}};
}

Assignment assign_weight(const Job& j) {
  const auto cls = floor_log2(j.weight) + 1;
  return {{BinFamily::Weight, cls}, pow2(cls), {}};
}

BinState& SchedulerState::bin(const BinKey& key) {
  return bins.try_emplace(key, key).first->second;
}

std::size_t SchedulerState::nonempty_bins() const {
  std::size_t n = 0;
  for (const auto& [key, b] : bins) n += b.empty() ? 0 : 1;
  return n;
}

Assignment assign_combined(const Job& j, SchedulerState& state) {
  if (state.kind != SchedulerKind::CombinedAlgo) {
    throw std::invalid_argument("assign_combined: scheduler is not CombinedAlgo");
  }
  Assignment proc = assign_proc(j);
  if (state.open_keys.count(proc.bin)) return proc;
  Assignment dens = assign_dens(j);
  if (state.open_keys.count(dens.bin)) return dens;
  Assignment weight = assign_weight(j);
  if (state.open_keys.count(weight.bin)) return weight;

  weight.newly_opened = {proc.bin, dens.bin, weight.bin};
  for (const auto& k : weight.newly_opened) {
    state.open_keys.insert(k);
    state.bin(k);
  }
  return weight;
}

Assignment assign(const Job& j, SchedulerState& state) {
  switch (state.kind) {
    case SchedulerKind::ProcAlgo:
      return assign_proc(j);
    case SchedulerKind::DensAlgo:
      return assign_dens(j);
    case SchedulerKind::WeightAlgo:
      return assign_weight(j);
    case SchedulerKind::CombinedAlgo:
      return assign_combined(j, state);
  }
  throw std::logic_error("unknown scheduler kind");
}

Assignment admit(const Job& j, SchedulerState& state) {
  Assignment a = assign(j, state);
  state.bin(a.bin).insert(JobState{&j, a.rounded_weight, j.proc});
  return a;
}

std::optional<BinKey> select_bin(const SchedulerState& state, const std::optional<BinKey>& current) {
  std::optional<BinKey> best;
  Rational best_score;
  for (const auto& [key, b] : state.bins) {
    if (b.empty()) continue;
    Rational s = score(b);
    if (!best || s > best_score) {
      best = key;
      best_score = std::move(s);
    }
  }
  if (best && current && *current != *best) {
    auto it = state.bins.find(*current);
    if (it != state.bins.end() && !it->second.empty() && score(it->second) == best_score) {
      return current;
    }
  }
  return best;
}

}  // namespace wfsched
