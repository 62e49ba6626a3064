#include "wfsched/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace wfsched {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

mpz_class pow10(std::size_t k) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, k);
  return r;
}

}  // namespace

Rational::Rational(std::int64_t value) : value_(mpz_class(static_cast<long>(value))) {}

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::invalid_argument("Rational: zero denominator");
  value_ = mpq_class(mpz_class(static_cast<long>(num)), mpz_class(static_cast<long>(den)));
  value_.canonicalize();
}

Rational::Rational(mpq_class value) : value_(std::move(value)) { value_.canonicalize(); }

Rational Rational::parse(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  mpq_class q;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    auto num = s.substr(0, slash);
    auto den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) {
      throw std::invalid_argument("malformed fraction '" + std::string(text) + "'");
    }
    mpz_class d{std::string(den)};
    if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    q = mpq_class(mpz_class(std::string(num)), d);
  } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
    auto whole = s.substr(0, dot);
    auto frac = s.substr(dot + 1);
    if ((whole.empty() && frac.empty()) || (!whole.empty() && !all_digits(whole)) ||
        (!frac.empty() && !all_digits(frac))) {
      throw std::invalid_argument("malformed decimal '" + std::string(text) + "'");
    }
    mpz_class w = whole.empty() ? mpz_class(0) : mpz_class(std::string(whole));
    mpz_class f = frac.empty() ? mpz_class(0) : mpz_class(std::string(frac));
    mpz_class scale = pow10(frac.size());
    q = mpq_class(w * scale + f, scale);
  } else {
    if (!all_digits(s)) {
      throw std::invalid_argument("malformed number '" + std::string(text) + "'");
    }
    q = mpq_class(mpz_class(std::string(s)));
  }
  q.canonicalize();
  if (negative) q = -q;
  return Rational(std::move(q));
}

std::string Rational::decimal(int digits) const {
  mpz_class scale = pow10(static_cast<std::size_t>(digits));
  mpq_class scaled = value_ * scale;
  // round half away from zero
  mpz_class num = abs(scaled.get_num()) * 2 + scaled.get_den();
  mpz_class den = scaled.get_den() * 2;
  mpz_class rounded;
  mpz_fdiv_q(rounded.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  mpz_class ip, fp;
  mpz_fdiv_qr(ip.get_mpz_t(), fp.get_mpz_t(), rounded.get_mpz_t(), scale.get_mpz_t());
  std::string out = (sgn(value_) < 0 && rounded != 0) ? "-" : "";
  out += ip.get_str();
  if (digits > 0) {
    std::string f = fp.get_str();
    out += '.';
    out += std::string(static_cast<std::size_t>(digits) - f.size(), '0') + f;
  }
  return out;
}

Rational& Rational::operator+=(const Rational& o) {
  value_ += o.value_;
  return *this;
}
Rational& Rational::operator-=(const Rational& o) {
  value_ -= o.value_;
  return *this;
}
Rational& Rational::operator*=(const Rational& o) {
  value_ *= o.value_;
  return *this;
}
Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw std::domain_error("Rational: division by zero");
  value_ /= o.value_;
  return *this;
}

Rational abs(const Rational& r) { return r.is_negative() ? -r : r; }
Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

mpz_class floor(const Rational& x) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), x.raw().get_num_mpz_t(), x.raw().get_den_mpz_t());
  return q;
}

Rational pow2(std::int64_t i) {
  mpz_class p(1);
  const auto k = static_cast<mp_bitcnt_t>(i < 0 ? -i : i);
  mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), k);
  return i < 0 ? Rational(mpq_class(mpz_class(1), p)) : Rational(mpq_class(p));
}

std::int64_t floor_log2(const Rational& x) {
  if (!x.is_positive()) throw std::domain_error("floor_log2: argument must be positive");
  const mpz_class num = x.numerator();
  const mpz_class den = x.denominator();
  // estimate from bit lengths, then correct by exact comparison
  auto i = static_cast<std::int64_t>(mpz_sizeinbase(num.get_mpz_t(), 2)) -
           static_cast<std::int64_t>(mpz_sizeinbase(den.get_mpz_t(), 2));
  while (pow2(i) > x) --i;
  while (pow2(i + 1) <= x) ++i;
  return i;
}

std::int64_t ceil_log2(const Rational& x) {
  const std::int64_t f = floor_log2(x);
  return pow2(f) == x ? f : f + 1;
}

}  // namespace wfsched
