#ifndef HETCACHE_RATIONAL_H_
#define HETCACHE_RATIONAL_H_

#include <gmpxx.h>

#include <compare>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hetcache {

// Exact rational scalar used for every rate, capacity and latency.
using Rational = mpq_class;

// Raised when inputs fall outside an operation's domain.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Parses "7", "-3/4" or "1.25" into a canonical rational.
Rational ParseRational(std::string_view text);

// Canonical "p/q" form; integers print without the denominator.
std::string ToString(const Rational& value);

// Decimal rendering with 15 significant digits. Advisory only.
std::string ToDecimal(const Rational& value);

inline Rational Min(const Rational& a, const Rational& b) { return a < b ? a : b; }
inline Rational Max(const Rational& a, const Rational& b) { return a < b ? b : a; }

// Least common multiple of the denominators of a and b.
mpz_class DenominatorLcm(const mpz_class& a, const mpz_class& b);

// Nonnegative time value that may be +infinity (x/0 with x > 0).
class Latency {
 public:
  Latency() = default;
  explicit Latency(Rational value) : value_(std::move(value)) {}

  static Latency Infinite() {
    Latency l;
    l.infinite_ = true;
    return l;
  }

  // num/den with 0/0 treated as 0 and x/0 (x > 0) as +infinity.
  static Latency Ratio(const Rational& num, const Rational& den);

  bool infinite() const { return infinite_; }
  const Rational& value() const;

  friend bool operator==(const Latency& a, const Latency& b);
  friend std::strong_ordering operator<=>(const Latency& a, const Latency& b);

  std::string ToString() const;

 private:
  Rational value_{0};
  bool infinite_ = false;
};

Latency Max(const Latency& a, const Latency& b);

}  // namespace hetcache

#endif  // HETCACHE_RATIONAL_H_
