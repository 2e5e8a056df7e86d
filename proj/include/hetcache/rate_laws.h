#ifndef HETCACHE_RATE_LAWS_H_
#define HETCACHE_RATE_LAWS_H_

#include <utility>
#include <vector>

#include "hetcache/rational.h"

namespace hetcache {

// Two-user caching problem with file size normalized to 1.
//
// Cache sizes above N are clipped to N on construction; `cache_clipped()`
// reports whether that happened. Construction fails when some user with
// an incomplete cache has no link capacity at all.
class ProblemInstance {
 public:
  static ProblemInstance Create(int n, Rational m1, Rational m2, Rational rc,
                                Rational rp1, Rational rp2);

  int n() const { return n_; }
  const Rational& m1() const { return m1_; }
  const Rational& m2() const { return m2_; }
  const Rational& rc() const { return rc_; }
  const Rational& rp1() const { return rp1_; }
  const Rational& rp2() const { return rp2_; }
  bool cache_clipped() const { return cache_clipped_; }

  // Same problem with the user labels exchanged.
  ProblemInstance Mirrored() const;

 private:
  ProblemInstance() = default;

  int n_ = 2;
  Rational m1_, m2_, rc_, rp1_, rp2_;
  bool cache_clipped_ = false;
};

// Per-unit-file delivery rates (common link and the two private links).
struct RateTriple {
  Rational rp1;
  Rational rp2;
  Rational rc;
};

// max{rc/Rc, rp1/Rp1, rp2/Rp2} with 0/0 = 0 and x/0 = +inf.
Latency LatencyOf(const RateTriple& rates, const Rational& link_rc,
                  const Rational& link_rp1, const Rational& link_rp2);
Latency LatencyOf(const RateTriple& rates, const ProblemInstance& inst);

// Optimal shared-link rate for the pure broadcast problem (no private links).
Rational RcStar(int n, const Rational& m1, const Rational& m2);

// Optimal worst-case delivery latency.
Latency TStar(const ProblemInstance& inst);

// Affine rate expression c0 + c_rp1 * rp1 + c_rp2 * rp2 for fixed caches.
struct AffineRate {
  Rational constant;
  Rational rp1_coeff;
  Rational rp2_coeff;

  Rational At(const Rational& rp1, const Rational& rp2) const {
    return constant + rp1_coeff * rp1 + rp2_coeff * rp2;
  }
};

// Which ordering of the private rates a branch set is valid for.
enum class RateOrder { kRp1AtLeastRp2, kRp1AtMostRp2 };

// Candidate branches of the common-link envelope for fixed (M1, M2). The
// first entry is the zero branch; the rest follow the region order
// (five branches for N >= 3, four for N = 2).
std::vector<AffineRate> FBarBranches(int n, const Rational& m1, const Rational& m2,
                                     RateOrder order);

// Smallest common-link rate reachable by sharing the corner schemes, given
// caches and private rates in [0, 1].
Rational FBar(int n, const Rational& m1, const Rational& m2, const Rational& rp1,
              const Rational& rp2);

// Rate of the layered unicast/multicast baseline (sharing among points A-E).
Rational LhcRate(int n, const Rational& m1, const Rational& m2);

// Earlier five-term converse for N >= 3.
Rational YangBound(int n, const Rational& m1, const Rational& m2);

// N*Mi + (2N-3)*Mj + N(N-1)*rc >= 2N(N-1).
bool PairBoundHolds(int n, const Rational& mi, const Rational& mj, const Rational& rc);
bool PairBoundTight(int n, const Rational& mi, const Rational& mj, const Rational& rc);

// N^2*(rc+rp2) + N(N-1)*rp1 >= N(2N-1) - 2(N-1)*M1 - N*M2.
bool JointLinkBoundHolds(int n, const Rational& m1, const Rational& m2,
                  const Rational& rc_plus_rp2, const Rational& rp1);

// rc + M/N >= 1 for one user.
bool CutSetHolds(int n, const Rational& m, const Rational& rc);
bool CutSetTight(int n, const Rational& m, const Rational& rc);

// Layer rates l_k = 1/2 log_base(sigma2 / D_k). Floating point by nature.
std::pair<double, double> DistortionLevels(double sigma2, double d1, double d2,
                                           double log_base = 2.0);

// Rounds a layer rate to the nearest multiple of 1/denominator.
Rational QuantizeLevel(double level, long denominator = 1L << 20);

// Optimal cache/delivery trade-off with heterogeneous distortion targets.
// Requires l1 <= l2.
Rational DistortionRate(int n, const Rational& m1, const Rational& m2,
                        const Rational& l1, const Rational& l2);

}  // namespace hetcache

#endif  // HETCACHE_RATE_LAWS_H_
