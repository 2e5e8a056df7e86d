#include "hetcache/rate_laws.h"

#include <cmath>
#include <string>

namespace hetcache {
namespace {

void RequireFiles(int n, int min_n) {
  if (n < min_n) {
    throw DomainError("N must be at least " + std::to_string(min_n) + ", got " +
                      std::to_string(n));
  }
}

void RequireCache(int n, const Rational& m) {
  if (m < 0 || m > n) throw DomainError("cache size " + ToString(m) + " outside [0, N]");
}

void RequireUnitRate(const Rational& r) {
  if (r < 0 || r > 1) throw DomainError("private rate " + ToString(r) + " outside [0, 1]");
}

// Nonpositive numerators contribute 0; x/0 with x > 0 is +inf.
Latency ClippedTerm(const Rational& num, const Rational& den) {
  if (num <= 0) return Latency();
  return Latency::Ratio(num, den);
}

Rational ClippedMax(const std::vector<Rational>& terms) {
  Rational best = 0;
  for (const Rational& t : terms) best = Max(best, t);
  return best;
}

}  // namespace

ProblemInstance ProblemInstance::Create(int n, Rational m1, Rational m2, Rational rc,
                                        Rational rp1, Rational rp2) {
  RequireFiles(n, 2);
  if (m1 < 0 || m2 < 0) throw DomainError("cache sizes must be nonnegative");
  if (rc < 0 || rp1 < 0 || rp2 < 0) throw DomainError("link capacities must be nonnegative");

  ProblemInstance inst;
  inst.n_ = n;
  if (m1 > n) {
    m1 = n;
    inst.cache_clipped_ = true;
  }
  if (m2 > n) {
    m2 = n;
    inst.cache_clipped_ = true;
  }
  if (rc + rp1 == 0 && m1 < n) {
    throw DomainError("user 1 has no link capacity and an incomplete cache");
  }
  if (rc + rp2 == 0 && m2 < n) {
    throw DomainError("user 2 has no link capacity and an incomplete cache");
  }
  inst.m1_ = std::move(m1);
  inst.m2_ = std::move(m2);
  inst.rc_ = std::move(rc);
  inst.rp1_ = std::move(rp1);
  inst.rp2_ = std::move(rp2);
  return inst;
}

ProblemInstance ProblemInstance::Mirrored() const {
  ProblemInstance out = *this;
  std::swap(out.m1_, out.m2_);
  std::swap(out.rp1_, out.rp2_);
  return out;
}

Latency LatencyOf(const RateTriple& rates, const Rational& link_rc,
                  const Rational& link_rp1, const Rational& link_rp2) {
  Latency t = Latency::Ratio(rates.rc, link_rc);
  t = Max(t, Latency::Ratio(rates.rp1, link_rp1));
  return Max(t, Latency::Ratio(rates.rp2, link_rp2));
}

Latency LatencyOf(const RateTriple& rates, const ProblemInstance& inst) {
  return LatencyOf(rates, inst.rc(), inst.rp1(), inst.rp2());
}

Rational RcStar(int n, const Rational& m1, const Rational& m2) {
  RequireFiles(n, 2);
  RequireCache(n, m1);
  RequireCache(n, m2);
  if (n == 2) {
    return ClippedMax({1 - m1 / 2, 1 - m2 / 2, 2 - (m1 + m2), Rational(3, 2) - (m1 + m2) / 2});
  }
  const Rational nn(n);
  return ClippedMax({1 - m1 / nn, 1 - m2 / nn, 2 - 3 * m1 / nn - (m2 - m1) / (nn - 1),
                     2 - 3 * m2 / nn - (m1 - m2) / (nn - 1)});
}

Latency TStar(const ProblemInstance& inst) {
  const int n = inst.n();
  const Rational nn(n);
  const Rational& m1 = inst.m1();
  const Rational& m2 = inst.m2();
  const Rational& rc = inst.rc();
  const Rational& rp1 = inst.rp1();
  const Rational& rp2 = inst.rp2();

  Latency t;
  t = Max(t, ClippedTerm(1 - m1 / nn, rc + rp1));
  t = Max(t, ClippedTerm(1 - m2 / nn, rc + rp2));
  if (n == 2) {
    t = Max(t, ClippedTerm(2 - m1 - m2, rc + rp1 + rp2));
    t = Max(t, ClippedTerm(3 - m1 - m2, 2 * (rc + rp2) + rp1));
    t = Max(t, ClippedTerm(3 - m1 - m2, 2 * (rc + rp1) + rp2));
    return t;
  }
  t = Max(t, ClippedTerm(2 - 3 * m2 / nn - (m1 - m2) / (nn - 1), rc + rp1 + rp2));
  t = Max(t, ClippedTerm(2 - 3 * m1 / nn - (m2 - m1) / (nn - 1), rc + rp1 + rp2));
  t = Max(t, ClippedTerm(nn * (2 * nn - 1) - 2 * (nn - 1) * m1 - nn * m2,
                         nn * nn * (rc + rp2) + nn * (nn - 1) * rp1));
  t = Max(t, ClippedTerm(nn * (2 * nn - 1) - 2 * (nn - 1) * m2 - nn * m1,
                         nn * nn * (rc + rp1) + nn * (nn - 1) * rp2));
  return t;
}

std::vector<AffineRate> FBarBranches(int n, const Rational& m1, const Rational& m2,
                                     RateOrder order) {
  RequireFiles(n, 2);
  const Rational nn(n);
  std::vector<AffineRate> out;
  out.push_back({0, 0, 0});
  if (n == 2) {
    out.push_back({2 - m1 - m2, -1, -1});
    if (order == RateOrder::kRp1AtLeastRp2) {
      out.push_back({(3 - m1 - m2) / 2, Rational(-1, 2), -1});
    } else {
      out.push_back({(3 - m1 - m2) / 2, -1, Rational(-1, 2)});
    }
    out.push_back({1 - m2 / 2, 0, -1});
    out.push_back({1 - m1 / 2, -1, 0});
    return out;
  }
  out.push_back({2 - 3 * m2 / nn - (m1 - m2) / (nn - 1), -1, -1});
  out.push_back({2 - 3 * m1 / nn - (m2 - m1) / (nn - 1), -1, -1});
  const Rational lead = (2 * nn - 1) / nn;
  const Rational partial = -(nn - 1) / nn;
  if (order == RateOrder::kRp1AtLeastRp2) {
    out.push_back({lead - 2 * (nn - 1) * m1 / (nn * nn) - m2 / nn, partial, -1});
  } else {
    out.push_back({lead - 2 * (nn - 1) * m2 / (nn * nn) - m1 / nn, -1, partial});
  }
  out.push_back({1 - m2 / nn, 0, -1});
  out.push_back({1 - m1 / nn, -1, 0});
  return out;
}

Rational FBar(int n, const Rational& m1, const Rational& m2, const Rational& rp1,
              const Rational& rp2) {
  RequireFiles(n, 2);
  RequireCache(n, m1);
  RequireCache(n, m2);
  RequireUnitRate(rp1);
  RequireUnitRate(rp2);
  const RateOrder order = rp1 >= rp2 ? RateOrder::kRp1AtLeastRp2 : RateOrder::kRp1AtMostRp2;
  Rational best = 0;
  for (const AffineRate& branch : FBarBranches(n, m1, m2, order)) {
    best = Max(best, branch.At(rp1, rp2));
  }
  return best;
}

Rational LhcRate(int n, const Rational& m1, const Rational& m2) {
  RequireFiles(n, 3);
  RequireCache(n, m1);
  RequireCache(n, m2);
  const Rational nn(n);
  return ClippedMax({2 - 2 * m2 / nn - m1 / nn, 2 - 2 * m1 / nn - m2 / nn, 1 - m2 / nn,
                     1 - m1 / nn});
}

Rational YangBound(int n, const Rational& m1, const Rational& m2) {
  RequireFiles(n, 3);
  RequireCache(n, m1);
  RequireCache(n, m2);
  const Rational nn(n);
  const Rational half(n / 2);
  const Rational third(n / 3);
  const Rational sum = m1 + m2;
  return ClippedMax({1 - m1 / nn, 1 - m2 / nn, 2 - sum / half, Rational(3, 2) - sum / (2 * half),
                     2 - sum / (2 * third)});
}

bool PairBoundHolds(int n, const Rational& mi, const Rational& mj, const Rational& rc) {
  RequireFiles(n, 3);
  const Rational nn(n);
  return nn * mi + (2 * nn - 3) * mj + nn * (nn - 1) * rc >= 2 * nn * (nn - 1);
}

bool PairBoundTight(int n, const Rational& mi, const Rational& mj, const Rational& rc) {
  RequireFiles(n, 3);
  const Rational nn(n);
  return nn * mi + (2 * nn - 3) * mj + nn * (nn - 1) * rc == 2 * nn * (nn - 1);
}

bool JointLinkBoundHolds(int n, const Rational& m1, const Rational& m2, const Rational& rc_plus_rp2,
                  const Rational& rp1) {
  RequireFiles(n, 2);
  const Rational nn(n);
  return nn * nn * rc_plus_rp2 + nn * (nn - 1) * rp1 >=
         nn * (2 * nn - 1) - 2 * (nn - 1) * m1 - nn * m2;
}

bool CutSetHolds(int n, const Rational& m, const Rational& rc) { return rc + m / n >= 1; }

bool CutSetTight(int n, const Rational& m, const Rational& rc) { return rc + m / n == 1; }

std::pair<double, double> DistortionLevels(double sigma2, double d1, double d2,
                                           double log_base) {
  if (!(sigma2 > 0)) throw DomainError("source variance must be positive");
  if (!(log_base > 0) || log_base == 1.0) throw DomainError("invalid logarithm base");
  auto level = [&](double d) {
    if (!(d > 0) || d > sigma2) throw DomainError("distortion must lie in (0, sigma^2]");
    return 0.5 * std::log(sigma2 / d) / std::log(log_base);
  };
  return {level(d1), level(d2)};
}

Rational QuantizeLevel(double level, long denominator) {
  if (denominator <= 0) throw DomainError("quantization denominator must be positive");
  if (!std::isfinite(level)) throw DomainError("level must be finite");
  Rational q(mpz_class(static_cast<long>(std::llround(level * static_cast<double>(denominator)))),
             mpz_class(denominator));
  q.canonicalize();
  return q;
}

Rational DistortionRate(int n, const Rational& m1, const Rational& m2, const Rational& l1,
                        const Rational& l2) {
  RequireFiles(n, 3);
  if (m1 < 0 || m2 < 0) throw DomainError("cache sizes must be nonnegative");
  if (l1 < 0) throw DomainError("layer rates must be nonnegative");
  if (l1 > l2) throw DomainError("users must be ordered so that l1 <= l2");
  const Rational nn(n);
  const Rational nsq = nn * nn;
  return ClippedMax({
      l1 + l2 - 3 * m2 / nn - (m1 - m2) / (nn - 1),
      l1 + l2 - 3 * m1 / nn - (m2 - m1) / (nn - 1),
      l2 - m2 / nn,
      l1 - m1 / nn,
      (nn - 1) / nn * l1 + l2 - 2 * (nn - 1) * m1 / nsq - m2 / nn,
      (nn - 1) / nn * l2 + l1 - 2 * (nn - 1) * m2 / nsq - m1 / nn,
  });
}

}  // namespace hetcache
