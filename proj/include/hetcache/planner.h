#ifndef HETCACHE_PLANNER_H_
#define HETCACHE_PLANNER_H_

#include <string>
#include <string_view>

#include "hetcache/rate_laws.h"
#include "hetcache/rational.h"

namespace hetcache {

enum class CaseLabel {
  kBalancedLineOP,        // ray r_p2 = (Rp2/Rp1) r_p1, all three ratios equal
  kEdgeQR,                // r_p1 = 1 - M1/N
  kBalancedLineOPMirror,  // ray that leaves the rectangle through r_p2 = 1 - M2/N
  kEdgeSR,                // r_p2 = 1 - M2/N
  kTrivialReduction,      // no private capacity, or nothing to deliver
};

std::string_view CaseLabelName(CaseLabel label);  // "balanced-line-OP", ...

struct Plan {
  Rational rp1, rp2, rc;
  Latency t;
  CaseLabel case_label = CaseLabel::kTrivialReduction;

  // {"T", "case_label", "rc", "rp1", "rp2"}; rationals as "p/q" strings.
  std::string ToJson() const;
};

enum class GFunction { kG1, kG2, kG3, kG4 };

// Caches and link rates the g functions are evaluated for.
struct GParams {
  int n = 2;
  Rational m1, m2, rc, rp1, rp2;
};

// g1(r) = r / (f(r, a r) + a r), g2(r) = f(1 - M1/N, r) / r,
// g3(r) = a r / (f(r, a r) + r), g4(r) = f(r, 1 - M2/N) / r, with a = Rp2/Rp1
// and f the common-link envelope. Division by zero yields +inf.
Latency GValue(GFunction g, const GParams& p, const Rational& r);

// Root of g(r) = target on [lo, hi]: bisection to width 2^-48, then the
// active affine branch of f is solved exactly. The target is given as a
// ratio num/den so that infinite targets (den = 0) stay exact.
Rational SolveMonotone(GFunction g, const GParams& p, const Rational& target_num,
                       const Rational& target_den, const Rational& lo, const Rational& hi);

// Operating point on the envelope with latency TStar(inst).
Plan MakePlan(const ProblemInstance& inst);

}  // namespace hetcache

#endif  // HETCACHE_PLANNER_H_
