#ifndef HETCACHE_COMPOSER_H_
#define HETCACHE_COMPOSER_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hetcache/corner_schemes.h"
#include "hetcache/rational.h"

namespace hetcache {

// Points obtained by sharing a shared-link corner with P_H and P_I (or P_K)
// in fractions l1, 1 - l2, l2 - l1, where l_k = 1 - rp_k.
enum class DerivedName { kA, kB, kBPrime, kCPrime, kD, kEPrime, kF, kG, kGPrime };

std::string_view DerivedPointName(DerivedName name);  // "A", "B'", ...

struct DerivedPoint {
  DerivedName name;
  std::vector<std::pair<SchemeId, Rational>> constituents;
  Signature signature;
};

// The nine derived points at private rates 0 <= rp2 <= rp1 <= 1.
std::vector<DerivedPoint> NinePoints(int n, const Rational& rp1, const Rational& rp2);

// Cells of the (M1, M2) plane for fixed private rates. M1..M5 follow the
// branch order of FBarBranches; M6 is "both caches hold all they need",
// M7/M8 mean user 1/user 2 has more cache than it can use. For N = 2 only
// M1..M4 (the four branches) and M6..M8 occur.
enum class Region { kM1 = 1, kM2, kM3, kM4, kM5, kM6, kM7, kM8 };

std::string RegionName(Region r);  // "M1" .. "M8"

// Lowest-index region whose formula attains the envelope at this point.
Region RegionOf(int n, const Rational& m1, const Rational& m2, const Rational& rp1,
                const Rational& rp2);

// The closed-form rate attached to a region.
Rational RegionFormula(Region region, int n, const Rational& m1, const Rational& m2,
                       const Rational& rp1, const Rational& rp2);

struct PlanEntry {
  SchemeId scheme;
  Rational weight;
};

// Convex weights over base corner schemes. Entries are sorted by scheme and
// carry strictly positive weights.
struct SharePlan {
  int n = 2;
  Rational m1, m2, rp1, rp2;  // requested resources
  std::vector<PlanEntry> entries;
  Rational predicted_rc;
  std::optional<Region> region;
  // Derived points used, expressed in the frame where rp1 >= rp2.
  std::vector<std::pair<DerivedName, Rational>> derived;
  bool users_swapped = false;
  bool cache_discarded = false;

  Signature Achieved() const;
};

// Plan attaining FBar(n, m1, m2, rp1, rp2). Cache that cannot help is left
// unused, so the achieved cache sizes may fall below the request.
SharePlan MakeSharePlan(int n, const Rational& m1, const Rational& m2, const Rational& rp1,
                        const Rational& rp2);

// Plan from explicit weights (must be positive and sum to 1).
SharePlan PlanFromEntries(int n, std::vector<PlanEntry> entries);

// Least F for which every segment is a whole number of bits and meets its
// scheme's divisibility.
std::size_t MinFileSize(const SharePlan& plan);

struct Segment {
  SchemeId scheme;
  Rational weight;
  std::size_t offset = 0;  // bit range [offset, offset + length) of every file
  std::size_t length = 0;
};

// A memory-shared code over F-bit files: segment i of every file is served by
// the i-th plan entry and the per-segment caches and transcripts are
// concatenated in segment order.
class ComposedCode {
 public:
  static ComposedCode Compose(const SharePlan& plan, std::size_t file_bits);

  const SharePlan& plan() const { return plan_; }
  int n() const { return plan_.n; }
  std::size_t file_bits() const { return file_bits_; }
  const std::vector<Segment>& segments() const { return segments_; }

  // Exact bit counts implied by the plan.
  std::size_t CacheBits(int user) const;
  std::size_t CommonBits() const;
  std::size_t PrivateBits(int user) const;

  // Per-segment sub-libraries; reuse across demands.
  std::vector<Library> Split(const Library& lib) const;

  std::pair<CacheContents, CacheContents> Place(const Library& lib) const;
  std::pair<CacheContents, CacheContents> PlaceSplit(const std::vector<Library>& parts) const;
  Transcript Deliver(const Library& lib, DemandPair demand) const;
  Transcript DeliverSplit(const std::vector<Library>& parts, DemandPair demand) const;
  BitString Decode(int user, const CacheContents& cache, const Transcript& transcript,
                   DemandPair demand) const;

  // JSON description; Serialize(Deserialize(s)) == s for any s produced here.
  std::string Serialize() const;
  static ComposedCode Deserialize(std::string_view json);

 private:
  struct Layout {
    std::size_t cache_offset[2] = {0, 0};
    std::size_t cache_length[2] = {0, 0};
    std::size_t xc_offset = 0, xc_length = 0;
    std::size_t xp_offset[2] = {0, 0};
    std::size_t xp_length[2] = {0, 0};
  };

  ComposedCode(SharePlan plan, std::size_t file_bits);

  SharePlan plan_;
  std::size_t file_bits_ = 0;
  std::vector<Segment> segments_;
  std::vector<Layout> layouts_;
  Layout totals_;
};

}  // namespace hetcache

#endif  // HETCACHE_COMPOSER_H_
