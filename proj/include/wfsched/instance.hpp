#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "wfsched/rational.hpp"

namespace wfsched {

using JobIndex = std::uint64_t;

/// One job of a scheduling instance. Immutable after validation.
struct Job {
  JobIndex index = 0;
  Rational release;
  Rational proc;
  Rational weight;

  Rational density() const { return proc / weight; }

  friend bool operator==(const Job&, const Job&) = default;
};

/// Jobs sorted by (release, index). Validates positivity and index uniqueness.
class Instance {
 public:
  Instance() = default;
  explicit Instance(std::vector<Job> jobs);

  const std::vector<Job>& jobs() const { return jobs_; }
  std::size_t size() const { return jobs_.size(); }
  bool empty() const { return jobs_.empty(); }
  const Job& operator[](std::size_t k) const { return jobs_[k]; }

  /// Position of the job with the given index; throws std::out_of_range.
  std::size_t position_of(JobIndex index) const;
  const Job& job(JobIndex index) const { return jobs_[position_of(index)]; }

  /// Same jobs with weights replaced; `weights` is parallel to jobs().
  Instance with_weights(const std::vector<Rational>& weights) const;

  Rational min_proc() const;

  friend bool operator==(const Instance&, const Instance&) = default;

 private:
  std::vector<Job> jobs_;
};

/// Max-to-min ratios of processing times (P), weights (W) and densities (D).
struct InstanceStats {
  Rational p_ratio{1};
  Rational w_ratio{1};
  Rational d_ratio{1};

  Rational min_ratio() const { return min(p_ratio, min(w_ratio, d_ratio)); }
};

InstanceStats instance_stats(const Instance& inst);

/// Reported by parse_instance with the 1-based line number of the offending line.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

Instance parse_instance(std::string_view text);
std::string serialize_instance(const Instance& inst);

Instance load_instance(const std::string& path);
void save_instance(const Instance& inst, const std::string& path);

/// Closed interval of rationals sampled with denominators up to max_den.
struct RationalRange {
  Rational lo;
  Rational hi;
};

struct GeneratorParams {
  RationalRange proc{Rational(1, 8), Rational(8)};
  RationalRange weight{Rational(1, 8), Rational(8)};
  RationalRange release{Rational(0), Rational(10)};
  std::int64_t max_den = 8;
};

/// Throws std::invalid_argument when a range is empty, non-positive where
/// positivity is required, or holds no rational with denominator <= max_den.
void validate(const GeneratorParams& params);

/// Derives an independent seed for item k of a seeded batch (splitmix64).
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t k);

/// Deterministic for fixed (n, seed, params). Job indices are 1..n.
Instance generate_instance(std::size_t n, std::uint64_t seed, const GeneratorParams& params = {});

}  // namespace wfsched
