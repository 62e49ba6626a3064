#include "wfsched/instance.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

namespace wfsched {

namespace {

void check_job(const Job& j) {
  if (!j.proc.is_positive()) {
    throw std::invalid_argument("job " + std::to_string(j.index) + ": nonpositive processing time");
  }
  if (!j.weight.is_positive()) {
    throw std::invalid_argument("job " + std::to_string(j.index) + ": nonpositive weight");
  }
  if (j.release.is_negative()) {
    throw std::invalid_argument("job " + std::to_string(j.index) + ": negative release time");
  }
}

Rational ratio_of(const std::vector<Rational>& values) {
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return *hi / *lo;
}

mpz_class ceil_div(const mpz_class& a, const mpz_class& b) {
  mpz_class q;
  mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

// Numerator bounds [lo*q, hi*q] for denominator q.
std::pair<mpz_class, mpz_class> numerator_bounds(const RationalRange& r, std::int64_t q) {
  const Rational lo = r.lo * Rational(q);
  const Rational hi = r.hi * Rational(q);
  return {ceil_div(lo.numerator(), lo.denominator()), floor(hi)};
}

bool has_rational(const RationalRange& r, std::int64_t max_den) {
  for (std::int64_t q = 1; q <= max_den; ++q) {
    auto [a, b] = numerator_bounds(r, q);
    if (a <= b) return true;
  }
  return false;
}

Rational draw(const RationalRange& r, std::int64_t max_den, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::int64_t> den_dist(1, max_den);
  std::int64_t q = den_dist(rng);
  // fall back to the next denominator that admits a value in range
  for (std::int64_t tries = 0; tries < max_den; ++tries) {
    auto [a, b] = numerator_bounds(r, q);
    if (a <= b) {
      std::uniform_int_distribution<long> num_dist(a.get_si(), b.get_si());
      return Rational(num_dist(rng), q);
    }
    q = q % max_den + 1;
  }
  throw std::invalid_argument("range holds no rational with bounded denominator");
}

}  // namespace

Instance::Instance(std::vector<Job> jobs) : jobs_(std::move(jobs)) {
  std::set<JobIndex> seen;
  for (const auto& j : jobs_) {
    check_job(j);
    if (!seen.insert(j.index).second) {
      throw std::invalid_argument("duplicate job index " + std::to_string(j.index));
    }
  }
  std::sort(jobs_.begin(), jobs_.end(), [](const Job& a, const Job& b) {
    if (a.release != b.release) return a.release < b.release;
    return a.index < b.index;
  });
}

std::size_t Instance::position_of(JobIndex index) const {
  for (std::size_t k = 0; k < jobs_.size(); ++k) {
    if (jobs_[k].index == index) return k;
  }
  throw std::out_of_range("no job with index " + std::to_string(index));
}

Instance Instance::with_weights(const std::vector<Rational>& weights) const {
  if (weights.size() != jobs_.size()) throw std::invalid_argument("with_weights: size mismatch");
  std::vector<Job> out = jobs_;
  for (std::size_t k = 0; k < out.size(); ++k) out[k].weight = weights[k];
  return Instance(std::move(out));
}

Rational Instance::min_proc() const {
  if (jobs_.empty()) throw std::invalid_argument("min_proc: empty instance");
  Rational m = jobs_.front().proc;
  for (const auto& j : jobs_) m = min(m, j.proc);
  return m;
}

InstanceStats instance_stats(const Instance& inst) {
  if (inst.empty()) throw std::invalid_argument("instance_stats: empty instance");
  std::vector<Rational> p, w, d;
  for (const auto& j : inst.jobs()) {
    p.push_back(j.proc);
    w.push_back(j.weight);
    d.push_back(j.density());
  }
  return {ratio_of(p), ratio_of(w), ratio_of(d)};
}

Instance parse_instance(std::string_view text) {
  std::vector<Job> jobs;
  std::set<JobIndex> seen;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream fields(line);
    std::vector<std::string> tok;
    for (std::string t; fields >> t;) tok.push_back(t);
    if (tok.empty() || tok.front().front() == '#') continue;
    if (tok.front() != "job" || tok.size() != 5) {
      throw ParseError(lineno, "expected 'job <index> <release> <proc> <weight>'");
    }
    Job j;
    try {
      std::size_t used = 0;
      const unsigned long long idx = std::stoull(tok[1], &used);
      if (used != tok[1].size() || tok[1].front() == '-') throw std::invalid_argument("index");
      j.index = idx;
    } catch (const std::exception&) {
      throw ParseError(lineno, "malformed job index '" + tok[1] + "'");
    }
    try {
      j.release = Rational::parse(tok[2]);
      j.proc = Rational::parse(tok[3]);
      j.weight = Rational::parse(tok[4]);
    } catch (const std::exception& e) {
      throw ParseError(lineno, e.what());
    }
    if (!j.proc.is_positive()) throw ParseError(lineno, "nonpositive processing time");
    if (!j.weight.is_positive()) throw ParseError(lineno, "nonpositive weight");
    if (j.release.is_negative()) throw ParseError(lineno, "negative release time");
    if (!seen.insert(j.index).second) {
      throw ParseError(lineno, "duplicate job index " + std::to_string(j.index));
    }
    jobs.push_back(std::move(j));
  }
  return Instance(std::move(jobs));
}

std::string serialize_instance(const Instance& inst) {
  std::ostringstream out;
  out << "# job <index> <release> <proc> <weight>\n";
  for (const auto& j : inst.jobs()) {
    out << "job " << j.index << ' ' << j.release << ' ' << j.proc << ' ' << j.weight << '\n';
  }
  return out.str();
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

void save_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::ios_base::failure("cannot write " + path);
  out << serialize_instance(inst);
  if (!out) throw std::ios_base::failure("write failed for " + path);
}

void validate(const GeneratorParams& params) {
  auto check = [&](const RationalRange& r, const char* name, bool positive) {
    if (r.hi < r.lo) throw std::invalid_argument(std::string(name) + " range is empty");
    if (positive && !r.lo.is_positive()) {
      throw std::invalid_argument(std::string(name) + " range must be positive");
    }
    if (!positive && r.lo.is_negative()) {
      throw std::invalid_argument(std::string(name) + " range must be nonnegative");
    }
    if (!has_rational(r, params.max_den)) {
      throw std::invalid_argument(std::string(name) + " range holds no admissible rational");
    }
  };
  if (params.max_den < 1) throw std::invalid_argument("max denominator must be >= 1");
  check(params.proc, "processing time", true);
  check(params.weight, "weight", true);
  check(params.release, "release", false);
}

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t k) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (k + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Instance generate_instance(std::size_t n, std::uint64_t seed, const GeneratorParams& params) {
  if (n == 0) throw std::invalid_argument("generate_instance: n must be >= 1");
  validate(params);
  std::mt19937_64 rng(seed);
  std::vector<Job> jobs;
  jobs.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    Job j;
    j.index = k + 1;
    j.release = draw(params.release, params.max_den, rng);
    j.proc = draw(params.proc, params.max_den, rng);
    j.weight = draw(params.weight, params.max_den, rng);
    jobs.push_back(std::move(j));
  }
  return Instance(std::move(jobs));
}

}  // namespace wfsched
