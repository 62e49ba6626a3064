#include "wfsched/oracle.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>

namespace wfsched {

namespace {

std::vector<std::size_t> alive_at(const Instance& inst, const Rational& t,
                                  const std::vector<Rational>& rem) {
  std::vector<std::size_t> alive;
  for (std::size_t k = 0; k < inst.size(); ++k) {
    if (inst[k].release <= t && rem[k].is_positive()) alive.push_back(k);
  }
  return alive;
}

std::optional<Rational> next_release_after(const Instance& inst, const Rational& t) {
  for (const auto& j : inst.jobs()) {
    if (j.release > t) return j.release;
  }
  return std::nullopt;
}

/// Exhaustive search; value of a state is the minimum remaining integral of
/// alive weight from `t` on.
class Search {
 public:
  Search(const Instance& inst, bool memoize) : inst_(inst), memoize_(memoize) {}

  Rational solve(const Rational& t, std::vector<Rational>& rem) {
    std::vector<Rational> key;
    if (memoize_) {
      key.reserve(rem.size() + 1);
      key.push_back(t);
      key.insert(key.end(), rem.begin(), rem.end());
      if (auto it = memo_.find(key); it != memo_.end()) return it->second.cost;
    }

    const auto alive = alive_at(inst_, t, rem);
    const auto next_r = next_release_after(inst_, t);
    Entry best;
    if (alive.empty()) {
      if (!next_r) {
        ++explored_;
        best.cost = Rational(0);
      } else {
        best.cost = solve(*next_r, rem);
      }
    } else {
      Rational alive_weight;
      for (auto k : alive) alive_weight += inst_[k].weight;
      bool first = true;
      for (auto k : alive) {
        Rational dt = rem[k];
        if (next_r && t + dt > *next_r) dt = *next_r - t;
        const Rational saved = rem[k];
        rem[k] -= dt;
        Rational c = alive_weight * dt + solve(t + dt, rem);
        rem[k] = saved;
        if (first || c < best.cost) {
          best.cost = std::move(c);
          best.choice = k;
          first = false;
        }
      }
    }
    if (memoize_) {
      memo_.emplace(std::move(key), best);
      return best.cost;
    }
    last_choice_ = best.choice;
    return best.cost;
  }

  /// Best choice at a state (re-solving it when not memoized).
  std::size_t choice(const Rational& t, std::vector<Rational> rem) {
    if (memoize_) {
      std::vector<Rational> key;
      key.push_back(t);
      key.insert(key.end(), rem.begin(), rem.end());
      auto it = memo_.find(key);
      if (it == memo_.end()) {
        solve(t, rem);
        it = memo_.find(key);
      }
      return it->second.choice;
    }
    solve(t, rem);
    return last_choice_;
  }

  std::uint64_t explored() const { return explored_; }

 private:
  struct Entry {
    Rational cost;
    std::size_t choice = 0;
  };

  const Instance& inst_;
  bool memoize_;
  std::map<std::vector<Rational>, Entry> memo_;
  std::uint64_t explored_ = 0;
  std::size_t last_choice_ = 0;
};

}  // namespace

RunResult run_epoch_schedule(const Instance& inst, const EpochChooser& choose, std::string policy) {
  if (inst.empty()) throw std::invalid_argument("run_epoch_schedule: empty instance");
  RunResult run;
  run.policy = std::move(policy);
  std::vector<Rational> rem;
  for (const auto& j : inst.jobs()) {
    rem.push_back(j.proc);
    run.rounded_weights[j.index] = j.weight;
  }
  Rational t = inst[0].release;
  while (true) {
    const auto alive = alive_at(inst, t, rem);
    const auto next_r = next_release_after(inst, t);
    if (alive.empty()) {
      if (!next_r) break;
      append_segment(run.trace, t, *next_r, std::nullopt, std::nullopt);
      t = *next_r;
      continue;
    }
    const std::size_t k = choose(EpochView{t, rem, alive});
    if (std::find(alive.begin(), alive.end(), k) == alive.end()) {
      throw std::logic_error("epoch chooser picked a job that is not alive");
    }
    Rational dt = rem[k];
    if (next_r && t + dt > *next_r) dt = *next_r - t;
    rem[k] -= dt;
    append_segment(run.trace, t, t + dt, inst[k].index, std::nullopt);
    t += dt;
    if (rem[k].is_zero()) run.trace.completions[inst[k].index] = t;
  }
  finalize_run(run, inst);
  return run;
}

RunResult random_epoch_schedule(const Instance& inst, std::mt19937_64& rng) {
  return run_epoch_schedule(
      inst,
      [&rng](const EpochView& v) {
        std::uniform_int_distribution<std::size_t> pick(0, v.alive.size() - 1);
        return v.alive[pick(rng)];
      },
      "random");
}

OracleResult brute_force_opt(const Instance& inst, const OracleOptions& opts) {
  if (inst.empty()) throw std::invalid_argument("brute_force_opt: empty instance");
  if (inst.size() > opts.limit) {
    throw std::invalid_argument("brute_force_opt: " + std::to_string(inst.size()) +
                                " jobs exceed the oracle limit of " + std::to_string(opts.limit));
  }
  Search search(inst, opts.memoize);
  std::vector<Rational> rem;
  for (const auto& j : inst.jobs()) rem.push_back(j.proc);
  const Rational best_cost = search.solve(inst[0].release, rem);

  OracleResult out;
  out.schedules_explored = search.explored();
  out.best = run_epoch_schedule(
      inst, [&](const EpochView& v) { return search.choice(v.time, v.remaining); }, "opt");
  if (out.best.cost != best_cost) {
    throw std::logic_error("brute_force_opt: reconstructed schedule does not attain the optimum");
  }
  return out;
}

RunResult hdf_baseline(const Instance& inst) {
  return run_epoch_schedule(
      inst,
      [&inst](const EpochView& v) {
        std::size_t best = v.alive.front();
        for (auto k : v.alive) {
          // w_k / p_k > w_b / p_b  <=>  w_k * p_b > w_b * p_k
          const Rational lhs = inst[k].weight * v.remaining[best];
          const Rational rhs = inst[best].weight * v.remaining[k];
          if (lhs > rhs || (lhs == rhs && inst[k].index < inst[best].index)) best = k;
        }
        return best;
      },
      "hdf");
}

StepFunction opt_weight_trace(const OracleResult& oracle, const Instance& inst, WeightBasis basis) {
  return weight_trace(oracle.best, inst, basis);
}

}  // namespace wfsched
