#include "wfsched/bins.hpp"

#include <algorithm>
#include <stdexcept>

namespace wfsched {

namespace {

void require_positive(const Rational& w, const Rational& p) {
  if (!w.is_positive()) throw std::invalid_argument("contribution: weight must be positive");
  if (!p.is_positive()) throw std::invalid_argument("contribution: volume must be positive");
}

void require_nonempty(const BinState& bin, const char* what) {
  if (bin.empty()) throw std::invalid_argument(std::string(what) + ": empty bin");
}

void sort_unique(std::vector<Rational>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

std::string to_string(BinFamily f) {
  switch (f) {
    case BinFamily::ProcTime:
      return "proc";
    case BinFamily::Density:
      return "dens";
    case BinFamily::Weight:
      return "weight";
  }
  return "?";
}

std::string to_string(const BinKey& k) { return to_string(k.family) + "[" + std::to_string(k.index) + "]"; }

bool prec_less(const JobState& a, const JobState& b) {
  if (a.index() == b.index()) throw std::invalid_argument("prec_less: a job compared with itself");
  const auto la = floor_log2(a.rounded_weight);
  const auto lb = floor_log2(b.rounded_weight);
  if (la != lb) return la < lb;
  // d_t(a) > d_t(b)  <=>  p_a * w_b > p_b * w_a
  const Rational lhs = a.remaining * b.rounded_weight;
  const Rational rhs = b.remaining * a.rounded_weight;
  if (lhs != rhs) return lhs > rhs;
  return b.index() < a.index();
}

const JobState& BinState::top() const {
  if (jobs_.empty()) throw std::logic_error("top of empty bin " + to_string(key_));
  return jobs_.back();
}

JobState& BinState::top() {
  if (jobs_.empty()) throw std::logic_error("top of empty bin " + to_string(key_));
  return jobs_.back();
}

void BinState::insert(JobState js) {
  auto pos = std::upper_bound(jobs_.begin(), jobs_.end(), js,
                              [](const JobState& a, const JobState& b) { return prec_less(a, b); });
  jobs_.insert(pos, std::move(js));
}

void BinState::pop_top() {
  if (jobs_.empty()) throw std::logic_error("pop_top on empty bin " + to_string(key_));
  jobs_.pop_back();
}

std::size_t BinState::position_of(JobIndex index) const {
  for (std::size_t k = 0; k < jobs_.size(); ++k) {
    if (jobs_[k].index() == index) return k;
  }
  throw std::out_of_range("job " + std::to_string(index) + " not in bin " + to_string(key_));
}

bool BinState::contains(JobIndex index) const {
  return std::any_of(jobs_.begin(), jobs_.end(), [&](const JobState& j) { return j.index() == index; });
}

Rational BinState::total_weight() const {
  Rational s;
  for (const auto& j : jobs_) s += j.rounded_weight;
  return s;
}

Rational BinState::total_remaining() const {
  Rational s;
  for (const auto& j : jobs_) s += j.remaining;
  return s;
}

Rational base(const BinState& bin, const JobState& j) {
  const std::size_t pos = bin.position_of(j.index());
  Rational s;
  for (std::size_t k = 0; k < pos; ++k) s += bin.jobs()[k].rounded_weight;
  return s;
}

std::vector<Rational> bases(const BinState& bin) {
  std::vector<Rational> out;
  out.reserve(bin.size());
  Rational s;
  for (const auto& j : bin.jobs()) {
    out.push_back(s);
    s += j.rounded_weight;
  }
  return out;
}

Rational mu_proc(std::int64_t i, const Rational& x, const Rational& w, const Rational& p,
                 const Rational& h) {
  require_positive(w, p);
  if (x >= h + w) return p;
  if (x >= h + w / Rational(2)) return min(pow2(i), p);
  return Rational(0);
}

Rational mu_dens(std::int64_t i, const Rational& x, const Rational& w, const Rational& p,
                 const Rational& h) {
  require_positive(w, p);
  const Rational width = pow2(i);
  const Rational kappa = h + pow2(floor_log2(w));
  if (x >= kappa + p / width) return p;
  if (x >= kappa) return width * (x - kappa);
  return Rational(0);
}

Rational mu_weight(const Rational& x, const Rational& w, const Rational& p, const Rational& h) {
  require_positive(w, p);
  return x >= h + w ? p : Rational(0);
}

std::vector<Rational> mu_breakpoints(BinFamily family, std::int64_t i, const Rational& w,
                                     const Rational& p, const Rational& h) {
  switch (family) {
    case BinFamily::ProcTime:
    case BinFamily::Weight:
      return {h + w / Rational(2), h + w};
    case BinFamily::Density: {
      const Rational kappa = h + pow2(floor_log2(w));
      return {kappa, kappa + p / pow2(i)};
    }
  }
  return {};
}

Rational mu_for(const BinKey& key, const Rational& x, const Rational& w, const Rational& p,
                const Rational& h) {
  switch (key.family) {
    case BinFamily::ProcTime:
      return mu_proc(key.index, x, w, p, h);
    case BinFamily::Density:
      return mu_dens(key.index, x, w, p, h);
    case BinFamily::Weight:
      return mu_weight(x, w, p, h);
  }
  throw std::logic_error("unknown bin family");
}

Rational contribution(const BinState& bin, const JobState& j, const Rational& x) {
  return mu_for(bin.key(), x, j.rounded_weight, j.remaining, base(bin, j));
}

std::vector<Rational> contributions(const BinState& bin, const Rational& x) {
  std::vector<Rational> out;
  out.reserve(bin.size());
  Rational h;
  for (const auto& j : bin.jobs()) {
    out.push_back(mu_for(bin.key(), x, j.rounded_weight, j.remaining, h));
    h += j.rounded_weight;
  }
  return out;
}

Rational bin_bar_total(const BinState& bin, const Rational& x) {
  Rational total;
  Rational h;
  for (const auto& j : bin.jobs()) {
    total += mu_for(bin.key(), x, j.rounded_weight, j.remaining, h);
    h += j.rounded_weight;
  }
  return total;
}

std::vector<Rational> bar_breakpoints(const BinState& bin) {
  std::vector<Rational> out;
  Rational h;
  for (const auto& j : bin.jobs()) {
    for (auto& b : mu_breakpoints(bin.family(), bin.index(), j.rounded_weight, j.remaining, h)) {
      out.push_back(std::move(b));
    }
    h += j.rounded_weight;
  }
  sort_unique(out);
  return out;
}

Rational score(const BinState& bin) {
  require_nonempty(bin, "score");
  const JobState& top = bin.top();
  switch (bin.family()) {
    case BinFamily::ProcTime: {
      Rational s = bin.total_weight();
      if (top.remaining <= pow2(bin.index())) s -= top.rounded_weight / Rational(2);
      return s;
    }
    case BinFamily::Density:
      return bin.total_weight() - top.rounded_weight + pow2(floor_log2(top.rounded_weight)) +
             top.remaining / pow2(bin.index());
    case BinFamily::Weight:
      return bin.total_weight();
  }
  throw std::logic_error("unknown bin family");
}

Rational bin_height(const BinState& bin) {
  require_nonempty(bin, "bin_height");
  const JobState& top = bin.top();
  const Rational beta = base(bin, top);
  switch (bin.family()) {
    case BinFamily::ProcTime:
      // the half-height plateau already holds min(2^i, p_t) = p_t when p_t <= 2^i
      return min(pow2(bin.index()), top.remaining) >= top.remaining
                 ? beta + top.rounded_weight / Rational(2)
                 : beta + top.rounded_weight;
    case BinFamily::Density:
      return beta + pow2(floor_log2(top.rounded_weight)) + top.remaining / pow2(bin.index());
    case BinFamily::Weight:
      return beta + top.rounded_weight;
  }
  throw std::logic_error("unknown bin family");
}

}  // namespace wfsched
