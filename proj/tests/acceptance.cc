// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hetcache/composer.h"
#include "hetcache/planner.h"
#include "hetcache/rate_laws.h"
#include "hetcache/simulator.h"
#include "support/random_rationals.h"

namespace hetcache {
namespace {

using test_support::Frac;

// All criteria compare exact rationals; tolerance is zero throughout.
constexpr int kGridDivisions = 20;  // (M1, M2) step N/20
constexpr int kRateDivisions = 8;   // private-rate step 1/8
constexpr int kRandomInstances = 1000;
constexpr std::uint64_t kSeed = 20240601;

struct Outcome {
  bool pass = true;
  std::string detail;
  std::string first_failure;

  void Check(bool ok, const std::function<std::string()>& what) {
    if (ok) return;
    if (pass) first_failure = what();
    pass = false;
  }
};

std::vector<Rational> Grid(const Rational& hi, int divisions) {
  std::vector<Rational> g;
  for (int k = 0; k <= divisions; ++k) g.push_back(hi * Frac(k, divisions));
  return g;
}

std::string Point(int n, const Rational& m1, const Rational& m2) {
  std::ostringstream s;
  s << "N=" << n << " M=(" << m1 << "," << m2 << ")";
  return s.str();
}

Rational PerFile(std::size_t bits, std::size_t f) {
  return Frac(static_cast<long>(bits), static_cast<long>(f));
}

// Criteria 1 and 2 share one pass over the grid.
void DecodeAndRateGrid(Outcome& decode, Outcome& rate) {
  std::size_t codes = 0, demands = 0, max_f = 0;
  std::uint64_t seed = kSeed;
  const std::vector<Rational> rp_grid = Grid(1, kRateDivisions);
  for (int n = 3; n <= 6; ++n) {
    const std::vector<Rational> m_grid = Grid(n, kGridDivisions);
    for (const Rational& m1 : m_grid) {
      for (const Rational& m2 : m_grid) {
        for (const Rational& rp1 : rp_grid) {
          for (const Rational& rp2 : rp_grid) {
            const SharePlan plan = MakeSharePlan(n, m1, m2, rp1, rp2);
            const ComposedCode code = ComposedCode::Compose(plan, MinFileSize(plan));
            const std::size_t f = code.file_bits();
            const Library lib = MakeLibrary(n, f, seed++);
            const SimulationReport r = RunAll(code, lib, {1, 1, 1});
            ++codes;
            demands += r.rows.size();
            max_f = std::max(max_f, f);
            auto where = [&] {
              std::ostringstream s;
              s << Point(n, m1, m2) << " rp=(" << rp1 << "," << rp2 << ") F=" << f;
              return s.str();
            };
            decode.Check(r.all_decoded && r.rows.size() == static_cast<std::size_t>(n * n),
                         where);
            const Rational target = FBar(n, m1, m2, rp1, rp2);
            rate.Check(r.rates_demand_invariant && r.worst_rates.rc == target, where);
            rate.Check(r.worst_rates.rp1 <= rp1 && r.worst_rates.rp2 <= rp2, where);
            rate.Check(PerFile(code.CacheBits(1), f) <= m1 &&
                           PerFile(code.CacheBits(2), f) <= m2,
                       where);
            if (rp1 == 0 && rp2 == 0) rate.Check(r.worst_rates.rc == RcStar(n, m1, m2), where);
          }
        }
      }
    }
  }
  std::ostringstream s;
  s << codes << " codes, " << demands << " demand pairs, largest F " << max_f << " bits";
  decode.detail = s.str();
  rate.detail = s.str() + ", shared-link bits/F equal to the envelope exactly";
}

void LatencyOptimality(Outcome& out) {
  std::mt19937_64 rng(kSeed);
  std::size_t max_f = 0;
  for (int i = 0; i < kRandomInstances; ++i) {
    const int n = test_support::UniformInt(rng, 2, 6);
    const Rational m1 = test_support::RandomRational(rng, 0, n, 6);
    const Rational m2 = test_support::RandomRational(rng, 0, n, 6);
    Rational rc, rp1, rp2;
    do {
      rc = test_support::RandomRational(rng, 0, 2, 6);
      rp1 = test_support::RandomRational(rng, 0, 2, 6);
      rp2 = test_support::RandomRational(rng, 0, 2, 6);
    } while (rc + rp1 == 0 || rc + rp2 == 0);
    const ProblemInstance inst = ProblemInstance::Create(n, m1, m2, rc, rp1, rp2);
    auto where = [&] {
      std::ostringstream s;
      s << "instance " << i << ": " << Point(n, m1, m2) << " R=(" << rc << "," << rp1 << ","
        << rp2 << ")";
      return s.str();
    };
    Plan plan;
    try {
      plan = MakePlan(inst);
    } catch (const std::exception& e) {
      out.Check(false, [&] { return where() + ": " + e.what(); });
      continue;
    }
    out.Check(plan.t == TStar(inst), where);
    const SharePlan share = MakeSharePlan(n, m1, m2, plan.rp1, plan.rp2);
    const ComposedCode code = ComposedCode::Compose(share, MinFileSize(share));
    max_f = std::max(max_f, code.file_bits());
    const SimulationReport r =
        RunAll(code, MakeLibrary(n, code.file_bits(), kSeed + i), {rc, rp1, rp2});
    out.Check(r.all_decoded && r.worst_case_t == plan.t, where);
  }
  out.detail = std::to_string(kRandomInstances) +
               " random instances, planner T = optimum = simulated T, largest F " +
               std::to_string(max_f) + " bits";
}

void LhcImprovement(Outcome& out) {
  const int n = 4;
  int points = 0;
  for (const Rational& m2 : Grid(n, kGridDivisions)) {
    ++points;
    const Rational ours = RcStar(n, 0, m2);
    const Rational lhc = LhcRate(n, 0, m2);
    out.Check(ours <= lhc, [&] { return Point(n, 0, m2); });
  }
  const Rational gap = LhcRate(n, 0, n - 1) - RcStar(n, 0, n - 1);
  out.Check(gap == Frac(1, n), [&] { return "gap at M2=N-1 is " + ToString(gap); });
  out.detail = "N=4, M1=0: " + std::to_string(points) + " points, gap at M2=3 is " + ToString(gap);
}

void BoundComparison(Outcome& out) {
  int points = 0;
  for (int n = 3; n <= 6; ++n) {
    for (const Rational& m1 : Grid(n, kGridDivisions)) {
      for (const Rational& m2 : Grid(n, kGridDivisions)) {
        ++points;
        const Rational gap = RcStar(n, m1, m2) - YangBound(n, m1, m2);
        out.Check(gap >= 0, [&] { return Point(n, m1, m2); });
        if (n == 3) out.Check(gap == 0, [&] { return Point(n, m1, m2) + " nonzero at N=3"; });
      }
    }
  }
  const Rational ours = RcStar(4, Frac(3, 2), 2);
  const Rational yang = YangBound(4, Frac(3, 2), 2);
  out.Check(ours == Frac(17, 24) && yang == Frac(5, 8),
            [&] { return "N=4 M=(3/2,2): " + ToString(ours) + " vs " + ToString(yang); });
  out.detail = std::to_string(points) + " points, zero gap at N=3, N=4 M=(3/2,2): " +
               ToString(ours) + " vs " + ToString(yang);
}

void BoundTightness(Outcome& out) {
  int points = 0;
  for (int n = 3; n <= 6; ++n) {
    for (const Rational& m1 : Grid(n, kGridDivisions)) {
      for (const Rational& m2 : Grid(n, kGridDivisions)) {
        ++points;
        const Rational rc = RcStar(n, m1, m2);
        auto where = [&] { return Point(n, m1, m2); };
        out.Check(PairBoundHolds(n, m1, m2, rc) && PairBoundHolds(n, m2, m1, rc), where);
        out.Check(CutSetHolds(n, m1, rc) && CutSetHolds(n, m2, rc), where);
        out.Check(PairBoundTight(n, m1, m2, rc) || PairBoundTight(n, m2, m1, rc) ||
                      CutSetTight(n, m1, rc) || CutSetTight(n, m2, rc),
                  where);
      }
    }
  }
  out.detail = std::to_string(points) + " points, every point meets a constraint with equality";
}

void DistortionConsistency(Outcome& out) {
  int points = 0;
  const std::vector<Rational> levels = Grid(1, kRateDivisions);
  for (int n = 3; n <= 6; ++n) {
    for (const Rational& m1 : Grid(n, kGridDivisions)) {
      for (const Rational& m2 : Grid(n, kGridDivisions)) {
        ++points;
        auto where = [&] { return Point(n, m1, m2); };
        out.Check(DistortionRate(n, m1, m2, 1, 1) == RcStar(n, m1, m2), where);
        for (std::size_t i = 0; i < levels.size(); ++i) {
          for (std::size_t j = i; j < levels.size(); ++j) {
            const Rational here = DistortionRate(n, m1, m2, levels[i], levels[j]);
            if (j + 1 < levels.size()) {
              out.Check(here <= DistortionRate(n, m1, m2, levels[i], levels[j + 1]), where);
            }
            if (i + 1 <= j) {
              out.Check(here <= DistortionRate(n, m1, m2, levels[i + 1], levels[j]), where);
            }
          }
        }
      }
    }
  }
  out.detail = std::to_string(points) +
               " points, full-quality rate equals the shared-link optimum, "
               "monotone on the 1/8 level grid";
}

}  // namespace
}  // namespace hetcache

int main() {
  using namespace hetcache;
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();

  Outcome c[8];
  const char* names[8] = {"",
                          "decode exhaustiveness",
                          "formula attainment",
                          "latency optimality",
                          "LHC improvement",
                          "bound comparison",
                          "bound tightness",
                          "distortion-rate consistency"};
  auto guard = [](Outcome& o, const std::function<void()>& body) {
    try {
      body();
    } catch (const std::exception& e) {
      o.Check(false, [&] { return std::string("exception: ") + e.what(); });
    }
  };
  guard(c[1], [&] { DecodeAndRateGrid(c[1], c[2]); });
  if (!c[1].pass && c[2].detail.empty()) c[2].Check(false, [] { return "grid run aborted"; });
  guard(c[3], [&] { LatencyOptimality(c[3]); });
  guard(c[4], [&] { LhcImprovement(c[4]); });
  guard(c[5], [&] { BoundComparison(c[5]); });
  guard(c[6], [&] { BoundTightness(c[6]); });
  guard(c[7], [&] { DistortionConsistency(c[7]); });

  bool all = true;
  for (int k = 1; k <= 7; ++k) {
    all = all && c[k].pass;
    std::printf("%s criterion %d (%s): %s%s%s\n", c[k].pass ? "PASS" : "FAIL", k, names[k],
                c[k].detail.c_str(), c[k].pass ? "" : "; first failure: ",
                c[k].first_failure.c_str());
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  std::printf("elapsed %.1f s\n", secs);
  return all ? 0 : 1;
}
