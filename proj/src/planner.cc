#include "hetcache/planner.h"

#include <array>
#include <optional>
#include <stdexcept>
#include <vector>

#include "json.hpp"

namespace hetcache {
namespace {

// h(r) = a * r + b * f(point(r)) is nondecreasing in r and vanishes exactly
// where g(r) equals the target.
struct Residual {
  int n;
  Rational m1, m2;
  Rational p0, u, q0, v;  // point(r) = (p0 + u r, q0 + v r)
  Rational a, b;

  Rational Rp1At(const Rational& r) const { return p0 + u * r; }
  Rational Rp2At(const Rational& r) const { return q0 + v * r; }
  Rational F(const Rational& r) const { return FBar(n, m1, m2, Rp1At(r), Rp2At(r)); }
  Rational operator()(const Rational& r) const { return a * r + b * F(r); }
};

class BracketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Rational Slope(const GParams& p) {
  if (p.rp1 == 0) throw DomainError("the ray r_p2 = (Rp2/Rp1) r_p1 needs Rp1 > 0");
  return p.rp2 / p.rp1;
}

Residual MakeResidual(GFunction g, const GParams& p, const Rational& tn, const Rational& td) {
  const Rational nn(p.n);
  Residual h{p.n, p.m1, p.m2, 0, 0, 0, 0, 0, 0};
  switch (g) {
    case GFunction::kG1: {
      const Rational s = Slope(p);
      h.u = 1;
      h.v = s;
      h.a = td - tn * s;
      h.b = -tn;
      break;
    }
    case GFunction::kG2:
      h.p0 = 1 - p.m1 / nn;
      h.v = 1;
      h.a = tn;
      h.b = -td;
      break;
    case GFunction::kG3: {
      const Rational s = Slope(p);
      h.u = 1;
      h.v = s;
      h.a = td * s - tn;
      h.b = -tn;
      break;
    }
    case GFunction::kG4:
      h.q0 = 1 - p.m2 / nn;
      h.u = 1;
      h.a = tn;
      h.b = -td;
      break;
  }
  return h;
}

// Roots of h restricted to each affine branch of f, kept only when they are
// exact roots of h inside [lo, hi].
std::optional<Rational> SmallestBranchRoot(const Residual& h, const Rational& lo,
                                           const Rational& hi) {
  std::optional<Rational> best;
  auto consider = [&](const Rational& r) {
    if (r < lo || r > hi) return;
    if (best && *best <= r) return;
    if (h(r) == 0) best = r;
  };
  for (RateOrder order : {RateOrder::kRp1AtLeastRp2, RateOrder::kRp1AtMostRp2}) {
    for (const AffineRate& br : FBarBranches(h.n, h.m1, h.m2, order)) {
      const Rational e0 = br.constant + br.rp1_coeff * h.p0 + br.rp2_coeff * h.q0;
      const Rational e1 = br.rp1_coeff * h.u + br.rp2_coeff * h.v;
      const Rational den = h.a + h.b * e1;
      if (den != 0) {
        consider(-h.b * e0 / den);
      } else if (h.b * e0 == 0) {
        consider(lo);
      }
    }
  }
  consider(lo);
  consider(hi);
  return best;
}

Rational Pow2Inverse(unsigned bits) {
  mpz_class den = 1;
  den <<= bits;
  return Rational(mpz_class(1), den);
}

struct Candidate {
  Rational rp1, rp2, rc;
  Latency t;
  CaseLabel label;
};

Candidate PointOn(const Residual& h, const Rational& r, const ProblemInstance& inst,
                  CaseLabel label) {
  Candidate c{h.Rp1At(r), h.Rp2At(r), h.F(r), {}, label};
  c.t = LatencyOf({c.rp1, c.rp2, c.rc}, inst);
  return c;
}

// Every exact branch root of every case's balance equation; the best one.
std::optional<Candidate> Exhaustive(const ProblemInstance& inst, const GParams& p,
                                    const Rational& c1, const Rational& c2) {
  struct Curve {
    GFunction g;
    Rational tn, td, hi;
    CaseLabel label;
  };
  std::vector<Curve> curves = {
      {GFunction::kG2, p.rc, p.rp2, c2, CaseLabel::kEdgeQR},
      {GFunction::kG4, p.rc, p.rp1, c1, CaseLabel::kEdgeSR},
  };
  if (p.rp1 > 0) {
    const Rational s = p.rp2 / p.rp1;
    Rational ray_end = c1;
    if (s > 0) ray_end = Min(c1, c2 / s);
    curves.push_back({GFunction::kG1, p.rp1, p.rc + p.rp2, ray_end, CaseLabel::kBalancedLineOP});
    curves.push_back(
        {GFunction::kG3, p.rp2, p.rc + p.rp1, ray_end, CaseLabel::kBalancedLineOPMirror});
  }
  std::optional<Candidate> best;
  for (const Curve& c : curves) {
    const Residual h = MakeResidual(c.g, p, c.tn, c.td);
    for (RateOrder order : {RateOrder::kRp1AtLeastRp2, RateOrder::kRp1AtMostRp2}) {
      for (const AffineRate& br : FBarBranches(h.n, h.m1, h.m2, order)) {
        const Rational e0 = br.constant + br.rp1_coeff * h.p0 + br.rp2_coeff * h.q0;
        const Rational e1 = br.rp1_coeff * h.u + br.rp2_coeff * h.v;
        const Rational den = h.a + h.b * e1;
        std::vector<Rational> roots = {0, c.hi};
        if (den != 0) roots.push_back(-h.b * e0 / den);
        for (const Rational& r : roots) {
          if (r < 0 || r > c.hi) continue;
          Candidate cand = PointOn(h, r, inst, c.label);
          if (!best || cand.t < best->t) best = cand;
        }
      }
    }
  }
  return best;
}

}  // namespace

std::string_view CaseLabelName(CaseLabel label) {
  switch (label) {
    case CaseLabel::kBalancedLineOP: return "balanced-line-OP";
    case CaseLabel::kEdgeQR: return "edge-QR";
    case CaseLabel::kBalancedLineOPMirror: return "balanced-line-OP-mirror";
    case CaseLabel::kEdgeSR: return "edge-SR";
    case CaseLabel::kTrivialReduction: return "trivial-reduction";
  }
  return "unknown";
}

std::string Plan::ToJson() const {
  nlohmann::json doc{{"rp1", ToString(rp1)},
                     {"rp2", ToString(rp2)},
                     {"rc", ToString(rc)},
                     {"T", t.ToString()},
                     {"case_label", std::string(CaseLabelName(case_label))}};
  return doc.dump(2) + "\n";
}

Latency GValue(GFunction g, const GParams& p, const Rational& r) {
  const Rational nn(p.n);
  switch (g) {
    case GFunction::kG1: {
      const Rational s = Slope(p);
      return Latency::Ratio(r, FBar(p.n, p.m1, p.m2, r, s * r) + s * r);
    }
    case GFunction::kG2:
      return Latency::Ratio(FBar(p.n, p.m1, p.m2, 1 - p.m1 / nn, r), r);
    case GFunction::kG3: {
      const Rational s = Slope(p);
      return Latency::Ratio(s * r, FBar(p.n, p.m1, p.m2, r, s * r) + r);
    }
    case GFunction::kG4:
      return Latency::Ratio(FBar(p.n, p.m1, p.m2, r, 1 - p.m2 / nn), r);
  }
  throw DomainError("unknown g function");
}

Rational SolveMonotone(GFunction g, const GParams& p, const Rational& target_num,
                       const Rational& target_den, const Rational& lo, const Rational& hi) {
  if (lo > hi) throw DomainError("empty search interval");
  const Residual h = MakeResidual(g, p, target_num, target_den);
  const Rational h_lo = h(lo);
  if (h_lo == 0) return lo;
  if (h_lo > 0 || h(hi) < 0) throw BracketError("target is not bracketed");

  const Rational width = Pow2Inverse(48);
  Rational a = lo;
  Rational b = hi;
  while (b - a > width) {
    Rational mid = (a + b) / 2;
    if (h(mid) < 0) {
      a = std::move(mid);
    } else {
      b = std::move(mid);
    }
  }
  if (auto root = SmallestBranchRoot(h, a, b)) return *root;
  if (auto root = SmallestBranchRoot(h, lo, hi)) return *root;
  throw BracketError("no affine branch of the envelope has an exact root");
}

Plan MakePlan(const ProblemInstance& original) {
  const bool swapped = original.rp1() < original.rp2();
  const ProblemInstance inst = swapped ? original.Mirrored() : original;
  const int n = inst.n();
  const Rational nn(n);
  const Rational c1 = 1 - inst.m1() / nn;
  const Rational c2 = 1 - inst.m2() / nn;
  const GParams p{n, inst.m1(), inst.m2(), inst.rc(), inst.rp1(), inst.rp2()};

  Candidate chosen;
  if (inst.rp1() == 0 || (c1 == 0 && c2 == 0)) {
    // Rp1 >= Rp2 here, so both private links are idle.
    const Rational rc = RcStar(n, inst.m1(), inst.m2());
    chosen = {0, 0, rc, LatencyOf({0, 0, rc}, inst), CaseLabel::kTrivialReduction};
  } else {
    const Rational s = inst.rp2() / inst.rp1();
    std::optional<Candidate> found;
    try {
      if (inst.rp2() * c1 <= inst.rp1() * c2) {
        if (inst.rp1() * c2 <= c1 * (inst.rc() + inst.rp2())) {
          const Rational r = SolveMonotone(GFunction::kG1, p, inst.rp1(),
                                           inst.rc() + inst.rp2(), 0, c1);
          found = PointOn(MakeResidual(GFunction::kG1, p, 1, 1), r, inst,
                          CaseLabel::kBalancedLineOP);
        } else {
          const Rational r = SolveMonotone(GFunction::kG2, p, inst.rc(), inst.rp2(), 0, c2);
          found = PointOn(MakeResidual(GFunction::kG2, p, 1, 1), r, inst, CaseLabel::kEdgeQR);
        }
      } else if (inst.rp2() * c1 <= c2 * (inst.rc() + inst.rp1())) {
        const Rational r = SolveMonotone(GFunction::kG3, p, inst.rp2(), inst.rc() + inst.rp1(),
                                         0, c2 / s);
        found = PointOn(MakeResidual(GFunction::kG3, p, 1, 1), r, inst,
                        CaseLabel::kBalancedLineOPMirror);
      } else {
        const Rational r = SolveMonotone(GFunction::kG4, p, inst.rc(), inst.rp1(), 0, c1);
        found = PointOn(MakeResidual(GFunction::kG4, p, 1, 1), r, inst, CaseLabel::kEdgeSR);
      }
    } catch (const BracketError&) {
      found.reset();
    }
    if (!found || found->t != TStar(inst)) found = Exhaustive(inst, p, c1, c2);
    if (!found) throw std::logic_error("planner found no operating point");
    chosen = *found;
  }

  if (chosen.t != TStar(inst)) {
    throw std::logic_error("planner latency " + chosen.t.ToString() + " differs from optimum " +
                           TStar(inst).ToString());
  }

  Plan plan;
  plan.rc = chosen.rc;
  plan.t = chosen.t;
  plan.case_label = chosen.label;
  plan.rp1 = chosen.rp1;
  plan.rp2 = chosen.rp2;
  if (swapped) {
    std::swap(plan.rp1, plan.rp2);
    switch (plan.case_label) {
      case CaseLabel::kBalancedLineOP: plan.case_label = CaseLabel::kBalancedLineOPMirror; break;
      case CaseLabel::kBalancedLineOPMirror: plan.case_label = CaseLabel::kBalancedLineOP; break;
      case CaseLabel::kEdgeQR: plan.case_label = CaseLabel::kEdgeSR; break;
      case CaseLabel::kEdgeSR: plan.case_label = CaseLabel::kEdgeQR; break;
      case CaseLabel::kTrivialReduction: break;
    }
  }
  return plan;
}

}  // namespace hetcache
