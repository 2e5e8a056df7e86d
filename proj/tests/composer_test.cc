#include "hetcache/composer.h"

#include <gtest/gtest.h>

#include <random>

#include "hetcache/rate_laws.h"
#include "hetcache/simulator.h"
#include "support/random_rationals.h"

namespace hetcache {
namespace {

using test_support::Frac;

Rational Q(const char* s) { return ParseRational(s); }

const DerivedPoint& Find(const std::vector<DerivedPoint>& pts, DerivedName name) {
  for (const DerivedPoint& p : pts) {
    if (p.name == name) return p;
  }
  throw std::logic_error("missing derived point");
}

TEST(NinePoints, PublishedSignatures) {
  const int n = 5;
  const Rational rp1 = Q("3/4"), rp2 = Q("1/3");
  const Rational l1 = 1 - rp1, l2 = 1 - rp2;
  const auto pts = NinePoints(n, rp1, rp2);
  ASSERT_EQ(pts.size(), 9u);
  EXPECT_EQ(Find(pts, DerivedName::kB).signature,
            (Signature{n * l1 / 2, n * l1 / 2, rp1, rp2, l2 - l1 / 2}));
  EXPECT_EQ(Find(pts, DerivedName::kBPrime).signature,
            (Signature{n * l1 / 2, n * l2 - n * l1 / 2, rp1, rp2, l1 / 2}));
  EXPECT_EQ(Find(pts, DerivedName::kCPrime).signature, (Signature{n * l1, n * l2, rp1, rp2, 0}));
  EXPECT_EQ(Find(pts, DerivedName::kA).signature, (Signature{0, 0, rp1, rp2, l1 + l2}));
  for (const DerivedPoint& p : pts) {
    Rational total = 0;
    for (const auto& [id, frac] : p.constituents) total += frac;
    EXPECT_EQ(total, 1) << DerivedPointName(p.name);
    EXPECT_EQ(p.signature.rp1, rp1);
    EXPECT_EQ(p.signature.rp2, rp2);
  }
  EXPECT_THROW(NinePoints(n, Q("1/3"), Q("1/2")), DomainError);
}

TEST(NinePoints, CollapseToSharedLinkPoints) {
  const int n = 4;
  const auto pts = NinePoints(n, 0, 0);
  EXPECT_EQ(Find(pts, DerivedName::kA).signature, (Signature{0, 0, 0, 0, 2}));
  EXPECT_EQ(Find(pts, DerivedName::kB).signature, (Signature{2, 2, 0, 0, Q("1/2")}));
  EXPECT_EQ(Find(pts, DerivedName::kBPrime).signature, Find(pts, DerivedName::kB).signature);
  EXPECT_EQ(Find(pts, DerivedName::kCPrime).signature, (Signature{4, 4, 0, 0, 0}));
  EXPECT_EQ(Find(pts, DerivedName::kEPrime).signature, (Signature{0, 4, 0, 0, 1}));
  EXPECT_EQ(Find(pts, DerivedName::kF).signature, (Signature{3, 0, 0, 0, 1}));
  EXPECT_EQ(Find(pts, DerivedName::kGPrime).signature, Find(pts, DerivedName::kG).signature);
}

TEST(RegionOf, Examples) {
  EXPECT_EQ(RegionOf(4, 0, 0, 0, 0), Region::kM1);
  const Rational rp1 = Q("1/2"), rp2 = Q("1/4");
  EXPECT_EQ(RegionOf(4, 4 * (1 - rp1), 0, rp1, rp2), Region::kM4);
  EXPECT_EQ(RegionOf(4, 0, 4 * (1 - rp2), rp1, rp2), Region::kM5);
  EXPECT_EQ(RegionOf(4, 4, 4, rp1, rp2), Region::kM6);
  EXPECT_EQ(RegionOf(4, 3, 1, rp1, rp2), Region::kM7);
  EXPECT_EQ(RegionOf(4, 1, 4, rp1, rp2), Region::kM8);
}

TEST(RegionOf, SelectedFormulaEqualsEnvelope) {
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 10000; ++trial) {
    const int n = test_support::UniformInt(rng, 2, 7);
    const Rational m1 = test_support::RandomRational(rng, 0, n, 12);
    const Rational m2 = test_support::RandomRational(rng, 0, n, 12);
    const Rational r1 = test_support::RandomRational(rng, 0, 1, 12);
    const Rational r2 = test_support::RandomRational(rng, 0, 1, 12);
    const Region region = RegionOf(n, m1, m2, r1, r2);
    ASSERT_EQ(RegionFormula(region, n, m1, m2, r1, r2), FBar(n, m1, m2, r1, r2))
        << RegionName(region) << " N=" << n << " M=(" << m1 << "," << m2 << ") rp=(" << r1
        << "," << r2 << ")";
  }
}

TEST(SharePlan, ExamplesWithoutPrivateLinks) {
  const SharePlan origin = MakeSharePlan(4, 0, 0, 0, 0);
  ASSERT_EQ(origin.entries.size(), 1u);
  EXPECT_EQ(origin.entries[0].scheme, SchemeId::kA);
  EXPECT_EQ(origin.entries[0].weight, 1);

  const SharePlan p = MakeSharePlan(4, 1, 1, 0, 0);
  EXPECT_EQ(p.predicted_rc, Q("5/4"));
  EXPECT_EQ(p.Achieved().rc, Q("5/4"));
  EXPECT_EQ(p.Achieved().m1, 1);
  EXPECT_EQ(p.Achieved().m2, 1);
}

TEST(SharePlan, DerivedPointTargetUsesThatPointAlone) {
  const int n = 4;
  const Rational rp1 = Q("1/2"), rp2 = Q("1/4");
  for (const DerivedPoint& pt : NinePoints(n, rp1, rp2)) {
    const SharePlan p = MakeSharePlan(n, pt.signature.m1, pt.signature.m2, rp1, rp2);
    if (p.predicted_rc != pt.signature.rc) continue;  // point lies above the envelope
    EXPECT_EQ(p.Achieved(), pt.signature) << DerivedPointName(pt.name);
  }
}

void ExpectPlanInvariants(const SharePlan& p) {
  Rational total = 0;
  for (const PlanEntry& e : p.entries) {
    EXPECT_GT(e.weight, 0);
    EXPECT_LE(e.weight, 1);
    total += e.weight;
  }
  EXPECT_EQ(total, 1);
  const Signature s = p.Achieved();
  EXPECT_EQ(s.rc, p.predicted_rc);
  EXPECT_EQ(s.rc, FBar(p.n, p.m1, p.m2, p.rp1, p.rp2));
  EXPECT_LE(s.m1, p.m1);
  EXPECT_LE(s.m2, p.m2);
  EXPECT_LE(s.rp1, p.rp1);
  EXPECT_LE(s.rp2, p.rp2);
  if (!p.cache_discarded) {
    EXPECT_EQ(s.m1, p.m1);
    EXPECT_EQ(s.m2, p.m2);
  }
}

TEST(SharePlan, AttainsEnvelopeOnRandomTargets) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 3000; ++trial) {
    const int n = test_support::UniformInt(rng, 2, 7);
    const SharePlan p = MakeSharePlan(n, test_support::RandomRational(rng, 0, n, 10),
                                      test_support::RandomRational(rng, 0, n, 10),
                                      test_support::RandomRational(rng, 0, 1, 10),
                                      test_support::RandomRational(rng, 0, 1, 10));
    ExpectPlanInvariants(p);
  }
}

TEST(SharePlan, CollapseReproducesSharedLinkRate) {
  for (int n = 2; n <= 6; ++n) {
    const Rational step = Frac(n, 10);
    for (Rational m1 = 0; m1 <= n; m1 += step) {
      for (Rational m2 = 0; m2 <= n; m2 += step) {
        const SharePlan p = MakeSharePlan(n, m1, m2, 0, 0);
        EXPECT_EQ(p.Achieved().rc, RcStar(n, m1, m2));
        for (const PlanEntry& e : p.entries) {
          EXPECT_LE(static_cast<int>(e.scheme), static_cast<int>(SchemeId::kG));
        }
      }
    }
  }
}

TEST(SharePlan, RejectsOutOfRangeTargets) {
  EXPECT_THROW(MakeSharePlan(4, 5, 0, 0, 0), DomainError);
  EXPECT_THROW(MakeSharePlan(4, 0, 0, 2, 0), DomainError);
  EXPECT_THROW(MakeSharePlan(1, 0, 0, 0, 0), DomainError);
}

TEST(MinFileSize, Examples) {
  EXPECT_EQ(MinFileSize(PlanFromEntries(4, {{SchemeId::kB, 1}})), 2u);
  EXPECT_EQ(MinFileSize(PlanFromEntries(4, {{SchemeId::kB, Q("1/3")}, {SchemeId::kA, Q("2/3")}})),
            6u);
  EXPECT_EQ(MinFileSize(PlanFromEntries(4, {{SchemeId::kH, 1}})), 1u);
  EXPECT_EQ(MinFileSize(PlanFromEntries(4, {{SchemeId::kB, Q("2/3")}, {SchemeId::kA, Q("1/3")}})),
            3u);
}

TEST(MinFileSize, IsLeastValidSize) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = test_support::UniformInt(rng, 2, 5);
    const SharePlan p = MakeSharePlan(n, test_support::RandomRational(rng, 0, n, 4),
                                      test_support::RandomRational(rng, 0, n, 4),
                                      test_support::RandomRational(rng, 0, 1, 4),
                                      test_support::RandomRational(rng, 0, 1, 4));
    const std::size_t f = MinFileSize(p);
    ASSERT_NO_THROW(ComposedCode::Compose(p, f));
    ASSERT_NO_THROW(ComposedCode::Compose(p, 3 * f));
    for (std::size_t g = 1; g < f; ++g) {
      EXPECT_THROW(ComposedCode::Compose(p, g), SizingError) << g;
    }
  }
}

TEST(PlanFromEntries, ValidatesWeights) {
  EXPECT_THROW(PlanFromEntries(4, {{SchemeId::kA, Q("1/2")}}), DomainError);
  EXPECT_THROW(PlanFromEntries(4, {{SchemeId::kA, Q("3/2")}, {SchemeId::kC, Q("-1/2")}}),
               DomainError);
  const SharePlan merged = PlanFromEntries(4, {{SchemeId::kA, Q("1/4")}, {SchemeId::kA, Q("3/4")}});
  ASSERT_EQ(merged.entries.size(), 1u);
}

TEST(Compose, HalfNoCacheHalfFullCache) {
  const SharePlan p = PlanFromEntries(3, {{SchemeId::kA, Q("1/2")}, {SchemeId::kC, Q("1/2")}});
  const ComposedCode code = ComposedCode::Compose(p, 2);
  const Library lib = MakeLibrary(3, 2, 9);
  auto [z1, z2] = code.Place(lib);
  ASSERT_EQ(z1.payload.size(), 3u);
  for (int i = 1; i <= 3; ++i) {
    EXPECT_EQ(z1.payload.Get(i - 1), lib.file(i).Get(1));
    EXPECT_EQ(z2.payload.Get(i - 1), lib.file(i).Get(1));
  }
  const Transcript t = code.Deliver(lib, {1, 2});
  EXPECT_EQ(t.xc.size(), 2u);
  EXPECT_EQ(code.CommonBits(), 2u);
  EXPECT_EQ(code.Decode(1, z1, t, {1, 2}), lib.file(1));
  EXPECT_EQ(code.Decode(2, z2, t, {1, 2}), lib.file(2));
}

TEST(Compose, SingleEntryMatchesBaseScheme) {
  const Library lib = MakeLibrary(4, 8, 10);
  for (SchemeId id : kAllSchemes) {
    const ComposedCode code = ComposedCode::Compose(PlanFromEntries(4, {{id, 1}}), 8);
    auto [a1, a2] = code.Place(lib);
    auto [b1, b2] = Place(id, lib);
    EXPECT_EQ(a1.payload, b1.payload);
    EXPECT_EQ(a2.payload, b2.payload);
    const Transcript ta = code.Deliver(lib, {3, 1});
    const Transcript tb = Deliver(id, lib, {3, 1});
    EXPECT_EQ(ta.xc, tb.xc);
    EXPECT_EQ(ta.xp1, tb.xp1);
    EXPECT_EQ(ta.xp2, tb.xp2);
  }
}

TEST(Compose, PointBConstructionLayout) {
  const int n = 4;
  const Rational rp1 = Q("1/2"), rp2 = Q("1/4");
  const auto pts = NinePoints(n, rp1, rp2);
  const DerivedPoint& b = Find(pts, DerivedName::kB);
  std::vector<PlanEntry> entries;
  for (const auto& [id, frac] : b.constituents) entries.push_back({id, frac});
  const SharePlan p = PlanFromEntries(n, entries);
  const std::size_t f = 8 * MinFileSize(p);
  const ComposedCode code = ComposedCode::Compose(p, f);
  const Library lib = MakeLibrary(n, f, 11);
  const Transcript t = code.Deliver(lib, {2, 3});
  // P_B part: XOR of halves; P_I part: W_{d2} segment in the clear.
  const Segment& sb = code.segments()[0];
  const Segment& si = code.segments()[2];
  ASSERT_EQ(sb.scheme, SchemeId::kB);
  ASSERT_EQ(si.scheme, SchemeId::kI);
  const std::size_t h = sb.length / 2;
  const BitString w2 = lib.file(2).Slice(sb.offset, sb.length);
  const BitString w3 = lib.file(3).Slice(sb.offset, sb.length);
  EXPECT_EQ(t.xc.Slice(0, h), w2.Slice(h, h) ^ w3.Slice(0, h));
  EXPECT_EQ(t.xc.Slice(h, si.length), lib.file(3).Slice(si.offset, si.length));
  EXPECT_EQ(Rational(mpz_class(static_cast<unsigned long>(t.xc.size()))) / f, b.signature.rc);
}

TEST(Compose, SegmentsPartitionFile) {
  const SharePlan p = MakeSharePlan(5, Q("7/3"), Q("1/2"), Q("1/3"), Q("1/5"));
  const std::size_t f = MinFileSize(p);
  const ComposedCode code = ComposedCode::Compose(p, f);
  std::size_t next = 0;
  for (const Segment& s : code.segments()) {
    EXPECT_EQ(s.offset, next);
    EXPECT_EQ(Rational(mpz_class(static_cast<unsigned long>(s.length))), s.weight * f);
    next += s.length;
  }
  EXPECT_EQ(next, f);
}

TEST(Compose, DecodeRejectsWrongLengths) {
  const SharePlan p = MakeSharePlan(4, 1, 2, Q("1/2"), Q("1/4"));
  const std::size_t f = MinFileSize(p);
  const ComposedCode code = ComposedCode::Compose(p, f);
  const Library lib = MakeLibrary(4, f, 12);
  auto [z1, z2] = code.Place(lib);
  Transcript t = code.Deliver(lib, {1, 2});
  t.xc.Append(BitString(1));
  EXPECT_THROW(code.Decode(1, z1, t, {1, 2}), DecodeError);
  EXPECT_THROW(code.Split(MakeLibrary(4, f + 1, 1)), DomainError);
}

TEST(Serialize, ByteExactRoundTrip) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = test_support::UniformInt(rng, 2, 6);
    const SharePlan p = MakeSharePlan(n, test_support::RandomRational(rng, 0, n, 6),
                                      test_support::RandomRational(rng, 0, n, 6),
                                      test_support::RandomRational(rng, 0, 1, 6),
                                      test_support::RandomRational(rng, 0, 1, 6));
    const ComposedCode code = ComposedCode::Compose(p, 2 * MinFileSize(p));
    const std::string text = code.Serialize();
    const ComposedCode back = ComposedCode::Deserialize(text);
    EXPECT_EQ(back.Serialize(), text);
    EXPECT_EQ(back.file_bits(), code.file_bits());
    EXPECT_EQ(back.segments().size(), code.segments().size());
  }
}

TEST(Serialize, RejectsTamperedDescriptions) {
  const SharePlan p = MakeSharePlan(4, 1, 1, 0, 0);
  const std::string text = ComposedCode::Compose(p, MinFileSize(p)).Serialize();
  EXPECT_THROW(ComposedCode::Deserialize("{"), DomainError);
  EXPECT_THROW(ComposedCode::Deserialize("{}"), DomainError);
  std::string bad_scheme = text;
  bad_scheme.replace(bad_scheme.find("\"P_"), 4, "\"P_Z");
  EXPECT_THROW(ComposedCode::Deserialize(bad_scheme), DomainError);
  std::string bad_size = text;
  bad_size.replace(bad_size.find("\"file_bits\": "), 13, "\"file_bits\": 1");
  EXPECT_THROW(ComposedCode::Deserialize(bad_size), std::invalid_argument);
}

}  // namespace
}  // namespace hetcache
