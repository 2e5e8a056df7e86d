#include "hetcache/composer.h"

#include <algorithm>
#include <array>
#include <map>
#include <string>

#include "hetcache/linear_solve.h"
#include "hetcache/rate_laws.h"
#include "json.hpp"

namespace hetcache {
namespace {

using json = nlohmann::json;

constexpr int kCodeFormatVersion = 1;

enum PointIndex { kA = 0, kB, kBp, kCp, kD, kEp, kF, kG, kGp };

// Vertex sets per region (indices into NinePoints), in the rp1 >= rp2 frame.
const std::vector<int>& RegionVertices(int n, Region region) {
  static const std::map<Region, std::vector<int>> kGeneral = {
      {Region::kM1, {kA, kB, kF}},          {Region::kM2, {kA, kB, kG}},
      {Region::kM3, {kB, kBp, kG, kGp}},    {Region::kM4, {kB, kBp, kF, kD, kCp}},
      {Region::kM5, {kCp, kBp, kGp, kEp}},  {Region::kM6, {kCp}},
  };
  static const std::map<Region, std::vector<int>> kTwoFiles = {
      {Region::kM1, {kA, kF, kG}},          {Region::kM2, {kF, kB, kBp, kGp, kG}},
      {Region::kM3, {kF, kD, kCp, kBp, kB}}, {Region::kM4, {kGp, kEp, kCp, kBp}},
      {Region::kM6, {kCp}},
  };
  static const std::vector<int> kNone;
  const auto& table = n == 2 ? kTwoFiles : kGeneral;
  auto it = table.find(region);
  return it == table.end() ? kNone : it->second;
}

void RequirePlanInputs(int n, const Rational& m1, const Rational& m2, const Rational& rp1,
                       const Rational& rp2) {
  if (n < 2) throw DomainError("N must be at least 2");
  if (m1 < 0 || m1 > n || m2 < 0 || m2 > n) throw DomainError("cache sizes must lie in [0, N]");
  if (rp1 < 0 || rp1 > 1 || rp2 < 0 || rp2 > 1) {
    throw DomainError("private rates must lie in [0, 1]");
  }
}

struct Weighted {
  int point;
  Rational weight;
};

// Convex combination of `candidates` with cache coordinates equal to
// (m1, m2) and interpolated rc equal to `rc`; tries triangles, then edges,
// then single points.
std::optional<std::vector<Weighted>> FindCombination(const std::vector<DerivedPoint>& points,
                                                     const std::vector<int>& candidates,
                                                     const Rational& m1, const Rational& m2,
                                                     const Rational& rc) {
  const std::size_t k = candidates.size();
  auto at = [&](std::size_t i) -> const Signature& { return points[candidates[i]].signature; };

  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      for (std::size_t l = j + 1; l < k; ++l) {
        const Signature& p = at(i);
        const Signature& q = at(j);
        const Signature& r = at(l);
        SquareMatrix<Rational, 3> a = {{{p.m1, q.m1, r.m1}, {p.m2, q.m2, r.m2}, {1, 1, 1}}};
        auto w = SolveExact<Rational, 3>(a, {m1, m2, 1});
        if (!w) continue;
        if ((*w)[0] < 0 || (*w)[1] < 0 || (*w)[2] < 0) continue;
        if ((*w)[0] * p.rc + (*w)[1] * q.rc + (*w)[2] * r.rc != rc) continue;
        return std::vector<Weighted>{{candidates[i], (*w)[0]},
                                     {candidates[j], (*w)[1]},
                                     {candidates[l], (*w)[2]}};
      }
    }
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      const Signature& p = at(i);
      const Signature& q = at(j);
      const Rational dx = q.m1 - p.m1;
      const Rational dy = q.m2 - p.m2;
      Rational t;
      if (dx != 0) {
        t = (m1 - p.m1) / dx;
      } else if (dy != 0) {
        t = (m2 - p.m2) / dy;
      } else {
        continue;
      }
      if (t < 0 || t > 1) continue;
      if (p.m1 + t * dx != m1 || p.m2 + t * dy != m2) continue;
      if ((1 - t) * p.rc + t * q.rc != rc) continue;
      return std::vector<Weighted>{{candidates[i], Rational(1 - t)}, {candidates[j], t}};
    }
  }
  for (std::size_t i = 0; i < k; ++i) {
    const Signature& p = at(i);
    if (p.m1 == m1 && p.m2 == m2 && p.rc == rc) {
      return std::vector<Weighted>{{candidates[i], Rational(1)}};
    }
  }
  return std::nullopt;
}

std::size_t ExactBits(const Rational& coeff, std::size_t s) {
  Rational bits = coeff * Rational(mpz_class(static_cast<unsigned long>(s)));
  if (bits.get_den() != 1 || !bits.get_num().fits_ulong_p()) {
    throw SizingError("segment of " + std::to_string(s) + " bits is not divisible by " +
                      ToString(coeff));
  }
  return bits.get_num().get_ui();
}

json SignatureJson(const Signature& s) {
  return json{{"m1", ToString(s.m1)},
              {"m2", ToString(s.m2)},
              {"rp1", ToString(s.rp1)},
              {"rp2", ToString(s.rp2)},
              {"rc", ToString(s.rc)}};
}

}  // namespace

std::string_view DerivedPointName(DerivedName name) {
  static constexpr std::array<std::string_view, 9> kNames = {"A", "B",  "B'", "C'", "D",
                                                             "E'", "F", "G",  "G'"};
  return kNames[static_cast<std::size_t>(name)];
}

std::vector<DerivedPoint> NinePoints(int n, const Rational& rp1, const Rational& rp2) {
  if (n < 2) throw DomainError("N must be at least 2");
  if (!(0 <= rp2 && rp2 <= rp1 && rp1 <= 1)) {
    throw DomainError("derived points need 0 <= rp2 <= rp1 <= 1");
  }
  const Rational l1 = 1 - rp1;
  const Rational l2 = 1 - rp2;
  const Rational unused = 1 - l2;
  const Rational gap = l2 - l1;

  struct Recipe {
    DerivedName name;
    SchemeId corner;
    SchemeId third;  // P_I sends user 2's extra part on the common link, P_K caches it
  };
  static constexpr std::array<Recipe, 9> kRecipes = {{
      {DerivedName::kA, SchemeId::kA, SchemeId::kI},
      {DerivedName::kB, SchemeId::kB, SchemeId::kI},
      {DerivedName::kBPrime, SchemeId::kB, SchemeId::kK},
      {DerivedName::kCPrime, SchemeId::kC, SchemeId::kK},
      {DerivedName::kD, SchemeId::kD, SchemeId::kI},
      {DerivedName::kEPrime, SchemeId::kE, SchemeId::kK},
      {DerivedName::kF, SchemeId::kF, SchemeId::kI},
      {DerivedName::kG, SchemeId::kG, SchemeId::kI},
      {DerivedName::kGPrime, SchemeId::kG, SchemeId::kK},
  }};

  std::vector<DerivedPoint> out;
  out.reserve(kRecipes.size());
  for (const Recipe& r : kRecipes) {
    DerivedPoint p{r.name, {{r.corner, l1}, {SchemeId::kH, unused}, {r.third, gap}}, {}};
    p.signature = Signature{0, 0, 0, 0, 0};
    for (const auto& [id, frac] : p.constituents) {
      p.signature = p.signature + Scale(SchemeSignature(id, n), frac);
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::string RegionName(Region r) { return "M" + std::to_string(static_cast<int>(r)); }

Region RegionOf(int n, const Rational& m1, const Rational& m2, const Rational& rp1,
                const Rational& rp2) {
  RequirePlanInputs(n, m1, m2, rp1, rp2);
  const Rational full1 = n * (1 - rp1);
  const Rational full2 = n * (1 - rp2);
  if (m1 >= full1 && m2 >= full2) return Region::kM6;
  if (m1 > full1) return Region::kM7;
  if (m2 > full2) return Region::kM8;

  const RateOrder order = rp1 >= rp2 ? RateOrder::kRp1AtLeastRp2 : RateOrder::kRp1AtMostRp2;
  const std::vector<AffineRate> branches = FBarBranches(n, m1, m2, order);
  std::size_t best = 1;
  Rational best_value = branches[1].At(rp1, rp2);
  for (std::size_t i = 2; i < branches.size(); ++i) {
    Rational v = branches[i].At(rp1, rp2);
    if (v > best_value) {
      best = i;
      best_value = v;
    }
  }
  return static_cast<Region>(best);
}

Rational RegionFormula(Region region, int n, const Rational& m1, const Rational& m2,
                       const Rational& rp1, const Rational& rp2) {
  RequirePlanInputs(n, m1, m2, rp1, rp2);
  switch (region) {
    case Region::kM6:
      return 0;
    case Region::kM7:
      return 1 - rp2 - m2 / n;
    case Region::kM8:
      return 1 - rp1 - m1 / n;
    default:
      break;
  }
  const RateOrder order = rp1 >= rp2 ? RateOrder::kRp1AtLeastRp2 : RateOrder::kRp1AtMostRp2;
  const std::vector<AffineRate> branches = FBarBranches(n, m1, m2, order);
  const auto index = static_cast<std::size_t>(region);
  if (index >= branches.size()) throw DomainError(RegionName(region) + " is not used for N = 2");
  return branches[index].At(rp1, rp2);
}

Signature SharePlan::Achieved() const {
  Signature total{0, 0, 0, 0, 0};
  for (const PlanEntry& e : entries) total = total + Scale(SchemeSignature(e.scheme, n), e.weight);
  return total;
}

SharePlan MakeSharePlan(int n, const Rational& m1, const Rational& m2, const Rational& rp1,
                        const Rational& rp2) {
  RequirePlanInputs(n, m1, m2, rp1, rp2);
  SharePlan plan;
  plan.n = n;
  plan.m1 = m1;
  plan.m2 = m2;
  plan.rp1 = rp1;
  plan.rp2 = rp2;
  plan.region = RegionOf(n, m1, m2, rp1, rp2);
  plan.predicted_rc = FBar(n, m1, m2, rp1, rp2);

  // Work in the frame where user 1 has the larger private rate.
  plan.users_swapped = rp1 < rp2;
  const Rational& a1 = plan.users_swapped ? m2 : m1;
  const Rational& a2 = plan.users_swapped ? m1 : m2;
  const Rational& q1 = plan.users_swapped ? rp2 : rp1;
  const Rational& q2 = plan.users_swapped ? rp1 : rp2;

  const Rational c1 = Min(a1, n * (1 - q1));
  const Rational c2 = Min(a2, n * (1 - q2));
  plan.cache_discarded = c1 != a1 || c2 != a2;
  if (FBar(n, c1, c2, q1, q2) != plan.predicted_rc) {
    throw std::logic_error("discarding unusable cache changed the envelope");
  }

  const std::vector<DerivedPoint> points = NinePoints(n, q1, q2);
  const Region local = RegionOf(n, c1, c2, q1, q2);
  std::optional<std::vector<Weighted>> combo =
      FindCombination(points, RegionVertices(n, local), c1, c2, plan.predicted_rc);
  if (!combo) {
    // Degenerate cells (e.g. l1 = 0 collapses several points): search all
    // nine points instead.
    std::vector<int> all(points.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    combo = FindCombination(points, all, c1, c2, plan.predicted_rc);
  }
  if (!combo) {
    throw std::logic_error("no convex combination of derived points attains the envelope");
  }

  std::map<SchemeId, Rational> merged;
  for (const Weighted& w : *combo) {
    if (w.weight == 0) continue;
    plan.derived.emplace_back(points[w.point].name, w.weight);
    for (const auto& [id, frac] : points[w.point].constituents) {
      Rational share = w.weight * frac;
      if (share == 0) continue;
      SchemeId target = plan.users_swapped ? Mirror(id) : id;
      merged[target] += share;
    }
  }
  for (auto& [id, weight] : merged) plan.entries.push_back({id, weight});

  if (plan.Achieved().rc != plan.predicted_rc) {
    throw std::logic_error("share plan does not reproduce the envelope rate");
  }
  return plan;
}

SharePlan PlanFromEntries(int n, std::vector<PlanEntry> entries) {
  if (n < 2) throw DomainError("N must be at least 2");
  std::map<SchemeId, Rational> merged;
  Rational total = 0;
  for (const PlanEntry& e : entries) {
    if (e.weight <= 0) throw DomainError("plan weights must be positive");
    merged[e.scheme] += e.weight;
    total += e.weight;
  }
  if (total != 1) throw DomainError("plan weights must sum to 1");
  SharePlan plan;
  plan.n = n;
  for (auto& [id, weight] : merged) plan.entries.push_back({id, weight});
  const Signature s = plan.Achieved();
  plan.m1 = s.m1;
  plan.m2 = s.m2;
  plan.rp1 = s.rp1;
  plan.rp2 = s.rp2;
  plan.predicted_rc = s.rc;
  return plan;
}

std::size_t MinFileSize(const SharePlan& plan) {
  mpz_class f = 1;
  for (const PlanEntry& e : plan.entries) {
    const mpz_class d(static_cast<unsigned long>(Divisibility(e.scheme)));
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), d.get_mpz_t(), e.weight.get_num().get_mpz_t());
    f = DenominatorLcm(f, e.weight.get_den() * d / g);
  }
  if (!f.fits_ulong_p()) throw SizingError("minimum file size does not fit in 64 bits");
  return f.get_ui();
}

ComposedCode::ComposedCode(SharePlan plan, std::size_t file_bits)
    : plan_(std::move(plan)), file_bits_(file_bits) {}

ComposedCode ComposedCode::Compose(const SharePlan& plan, std::size_t file_bits) {
  if (plan.entries.empty()) throw DomainError("plan has no entries");
  const std::size_t unit = MinFileSize(plan);
  if (file_bits == 0 || file_bits % unit != 0) {
    throw SizingError("F = " + std::to_string(file_bits) + " is not a multiple of " +
                      std::to_string(unit));
  }
  ComposedCode code(plan, file_bits);
  std::size_t offset = 0;
  Layout acc;
  for (const PlanEntry& e : plan.entries) {
    const std::size_t len = ExactBits(e.weight, file_bits);
    code.segments_.push_back({e.scheme, e.weight, offset, len});
    offset += len;

    const Signature sig = SchemeSignature(e.scheme, plan.n);
    Layout l;
    l.cache_offset[0] = acc.cache_length[0];
    l.cache_offset[1] = acc.cache_length[1];
    l.cache_length[0] = ExactBits(sig.m1, len);
    l.cache_length[1] = ExactBits(sig.m2, len);
    l.xc_offset = acc.xc_length;
    l.xc_length = ExactBits(sig.rc, len);
    l.xp_offset[0] = acc.xp_length[0];
    l.xp_offset[1] = acc.xp_length[1];
    l.xp_length[0] = ExactBits(sig.rp1, len);
    l.xp_length[1] = ExactBits(sig.rp2, len);
    acc.cache_length[0] += l.cache_length[0];
    acc.cache_length[1] += l.cache_length[1];
    acc.xc_length += l.xc_length;
    acc.xp_length[0] += l.xp_length[0];
    acc.xp_length[1] += l.xp_length[1];
    code.layouts_.push_back(l);
  }
  if (offset != file_bits) throw std::logic_error("segments do not partition the file");
  code.totals_ = acc;
  return code;
}

std::size_t ComposedCode::CacheBits(int user) const { return totals_.cache_length[user - 1]; }
std::size_t ComposedCode::CommonBits() const { return totals_.xc_length; }
std::size_t ComposedCode::PrivateBits(int user) const { return totals_.xp_length[user - 1]; }

std::vector<Library> ComposedCode::Split(const Library& lib) const {
  ValidateLibrary(lib);
  if (lib.n != plan_.n || lib.file_bits != file_bits_) {
    throw DomainError("library shape does not match the composed code");
  }
  std::vector<Library> parts;
  parts.reserve(segments_.size());
  for (const Segment& seg : segments_) {
    Library part{lib.n, seg.length, {}};
    part.files.reserve(lib.files.size());
    for (const BitString& f : lib.files) part.files.push_back(f.Slice(seg.offset, seg.length));
    parts.push_back(std::move(part));
  }
  return parts;
}

std::pair<CacheContents, CacheContents> ComposedCode::Place(const Library& lib) const {
  return PlaceSplit(Split(lib));
}

std::pair<CacheContents, CacheContents> ComposedCode::PlaceSplit(
    const std::vector<Library>& parts) const {
  CacheContents z1{1, {}};
  CacheContents z2{2, {}};
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    auto [a, b] = hetcache::Place(segments_[i].scheme, parts.at(i));
    z1.payload.Append(a.payload);
    z2.payload.Append(b.payload);
  }
  return {std::move(z1), std::move(z2)};
}

Transcript ComposedCode::Deliver(const Library& lib, DemandPair demand) const {
  return DeliverSplit(Split(lib), demand);
}

Transcript ComposedCode::DeliverSplit(const std::vector<Library>& parts,
                                      DemandPair demand) const {
  Transcript out;
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    Transcript t = hetcache::Deliver(segments_[i].scheme, parts.at(i), demand);
    out.xc.Append(t.xc);
    out.xp1.Append(t.xp1);
    out.xp2.Append(t.xp2);
  }
  return out;
}

BitString ComposedCode::Decode(int user, const CacheContents& cache, const Transcript& t,
                               DemandPair demand) const {
  if (user != 1 && user != 2) throw DomainError("user must be 1 or 2");
  const int u = user - 1;
  const BitString& xp = user == 1 ? t.xp1 : t.xp2;
  if (cache.payload.size() != totals_.cache_length[u] || t.xc.size() != totals_.xc_length ||
      xp.size() != totals_.xp_length[u]) {
    throw DecodeError("cache or transcript length does not match the composed code");
  }
  BitString file;
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const Layout& l = layouts_[i];
    CacheContents part{user, cache.payload.Slice(l.cache_offset[u], l.cache_length[u])};
    Transcript seg;
    seg.xc = t.xc.Slice(l.xc_offset, l.xc_length);
    (user == 1 ? seg.xp1 : seg.xp2) = xp.Slice(l.xp_offset[u], l.xp_length[u]);
    file.Append(hetcache::Decode(segments_[i].scheme, plan_.n, user, part, seg, demand));
  }
  return file;
}

std::string ComposedCode::Serialize() const {
  json segs = json::array();
  for (const Segment& s : segments_) {
    segs.push_back(json{{"scheme", std::string(SchemeName(s.scheme))},
                        {"weight", ToString(s.weight)},
                        {"offset", s.offset},
                        {"length", s.length},
                        {"signature", SignatureJson(SchemeSignature(s.scheme, plan_.n))}});
  }
  json doc{{"format", "hetcache.composed_code"},
           {"version", kCodeFormatVersion},
           {"n", plan_.n},
           {"file_bits", file_bits_},
           {"target",
            {{"m1", ToString(plan_.m1)},
             {"m2", ToString(plan_.m2)},
             {"rp1", ToString(plan_.rp1)},
             {"rp2", ToString(plan_.rp2)}}},
           {"predicted_rc", ToString(plan_.predicted_rc)},
           {"segments", segs},
           {"signature", SignatureJson(plan_.Achieved())}};
  return doc.dump(2) + "\n";
}

ComposedCode ComposedCode::Deserialize(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
    if (doc.at("format") != "hetcache.composed_code") throw DomainError("not a composed code");
    if (doc.at("version") != kCodeFormatVersion) throw DomainError("unsupported code version");
    SharePlan plan;
    plan.n = doc.at("n").get<int>();
    const auto& target = doc.at("target");
    plan.m1 = ParseRational(target.at("m1").get<std::string>());
    plan.m2 = ParseRational(target.at("m2").get<std::string>());
    plan.rp1 = ParseRational(target.at("rp1").get<std::string>());
    plan.rp2 = ParseRational(target.at("rp2").get<std::string>());
    plan.predicted_rc = ParseRational(doc.at("predicted_rc").get<std::string>());
    for (const auto& s : doc.at("segments")) {
      plan.entries.push_back({ParseSchemeName(s.at("scheme").get<std::string>()),
                              ParseRational(s.at("weight").get<std::string>())});
    }
    ComposedCode code = Compose(plan, doc.at("file_bits").get<std::size_t>());
    const auto& segs = doc.at("segments");
    for (std::size_t i = 0; i < code.segments_.size(); ++i) {
      if (segs[i].at("offset").get<std::size_t>() != code.segments_[i].offset ||
          segs[i].at("length").get<std::size_t>() != code.segments_[i].length) {
        throw DomainError("segment map does not match the plan weights");
      }
    }
    if (code.Serialize() != std::string(text)) {
      throw DomainError("composed code description is not canonical");
    }
    return code;
  } catch (const json::exception& e) {
    throw DomainError(std::string("malformed composed code: ") + e.what());
  }
}

}  // namespace hetcache
