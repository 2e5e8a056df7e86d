#include "hetcache/rational.h"

#include <cctype>
#include <cstdio>
#include <string>

namespace hetcache {
namespace {

bool AllDigits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

Rational ParseRational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw DomainError("empty rational");
  bool negative = false;
  std::string_view body = s;
  if (body.front() == '-' || body.front() == '+') {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }

  Rational result;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    std::string_view num = body.substr(0, slash);
    std::string_view den = body.substr(slash + 1);
    if (!AllDigits(num) || !AllDigits(den)) {
      throw DomainError("malformed rational '" + s + "'");
    }
    mpz_class d(std::string(den), 10);
    if (d == 0) throw DomainError("zero denominator in '" + s + "'");
    result = Rational(mpz_class(std::string(num), 10), d);
  } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
    std::string_view whole = body.substr(0, dot);
    std::string_view frac = body.substr(dot + 1);
    if ((!whole.empty() && !AllDigits(whole)) || (!frac.empty() && !AllDigits(frac)) ||
        (whole.empty() && frac.empty())) {
      throw DomainError("malformed decimal '" + s + "'");
    }
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    mpz_class w = whole.empty() ? mpz_class(0) : mpz_class(std::string(whole), 10);
    mpz_class f = frac.empty() ? mpz_class(0) : mpz_class(std::string(frac), 10);
    result = Rational(w * scale + f, scale);
  } else {
    if (!AllDigits(body)) throw DomainError("malformed integer '" + s + "'");
    result = Rational(mpz_class(std::string(body), 10));
  }
  result.canonicalize();
  return negative ? Rational(-result) : result;
}

std::string ToString(const Rational& value) {
  if (value.get_den() == 1) return value.get_num().get_str();
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

std::string ToDecimal(const Rational& value) {
  mpf_class f(value, 128);
  char buf[64];
  gmp_snprintf(buf, sizeof buf, "%.15Fg", f.get_mpf_t());
  return buf;
}

mpz_class DenominatorLcm(const mpz_class& a, const mpz_class& b) {
  mpz_class out;
  mpz_lcm(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return out;
}

Latency Latency::Ratio(const Rational& num, const Rational& den) {
  if (den < 0 || num < 0) throw DomainError("latency ratio of negative quantities");
  if (den == 0) return num == 0 ? Latency() : Infinite();
  return Latency(Rational(num / den));
}

const Rational& Latency::value() const {
  if (infinite_) throw std::logic_error("infinite latency has no rational value");
  return value_;
}

bool operator==(const Latency& a, const Latency& b) {
  if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
  return a.value_ == b.value_;
}

std::strong_ordering operator<=>(const Latency& a, const Latency& b) {
  if (a.infinite_ || b.infinite_) {
    return static_cast<int>(a.infinite_) <=> static_cast<int>(b.infinite_);
  }
  int c = cmp(a.value_, b.value_);
  return c <=> 0;
}

std::string Latency::ToString() const {
  return infinite_ ? std::string("inf") : hetcache::ToString(value_);
}

Latency Max(const Latency& a, const Latency& b) { return a < b ? b : a; }

}  // namespace hetcache
