#ifndef HETCACHE_CORNER_SCHEMES_H_
#define HETCACHE_CORNER_SCHEMES_H_

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hetcache/bit_string.h"
#include "hetcache/rational.h"

namespace hetcache {

// The twelve base corner schemes. kA..kG also serve the shared-link-only
// problem (they never use a private link).
enum class SchemeId { kA, kB, kC, kD, kE, kF, kG, kH, kI, kJ, kK, kL };

inline constexpr std::array<SchemeId, 12> kAllSchemes = {
    SchemeId::kA, SchemeId::kB, SchemeId::kC, SchemeId::kD, SchemeId::kE, SchemeId::kF,
    SchemeId::kG, SchemeId::kH, SchemeId::kI, SchemeId::kJ, SchemeId::kK, SchemeId::kL};

std::string_view SchemeName(SchemeId id);  // "P_A" .. "P_L"
SchemeId ParseSchemeName(std::string_view name);

// Same scheme with the two users exchanged.
SchemeId Mirror(SchemeId id);

// Resources per unit file: cache sizes in file units, rates in files.
struct Signature {
  Rational m1, m2, rp1, rp2, rc;

  friend bool operator==(const Signature&, const Signature&) = default;
};

Signature Scale(const Signature& s, const Rational& w);
Signature operator+(const Signature& a, const Signature& b);

Signature SchemeSignature(SchemeId id, int n);

// Required divisor of the per-file segment length (halving for P_B).
std::size_t Divisibility(SchemeId id);

class SizingError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// N files of F bits each; files[i] holds W_{i+1}.
struct Library {
  int n = 0;
  std::size_t file_bits = 0;
  std::vector<BitString> files;

  const BitString& file(int index_1based) const { return files.at(index_1based - 1); }
};

// Checks shape invariants (N files, each exactly file_bits long).
void ValidateLibrary(const Library& lib);

struct CacheContents {
  int user = 1;
  BitString payload;
};

// 1-based file indices; equal demands are allowed.
struct DemandPair {
  int d1 = 1;
  int d2 = 1;

  bool distinct() const { return d1 != d2; }
  friend bool operator==(const DemandPair&, const DemandPair&) = default;
};

struct Transcript {
  BitString xc;
  BitString xp1;
  BitString xp2;
};

std::pair<CacheContents, CacheContents> Place(SchemeId id, const Library& lib);

Transcript Deliver(SchemeId id, const Library& lib, DemandPair demand);

// Recovers W_{d_user}. Throws DecodeError when the inputs do not have the
// shape this scheme produces.
BitString Decode(SchemeId id, int n, int user, const CacheContents& cache,
                 const Transcript& transcript, DemandPair demand);

// Indices p of the cached sums W_p + W_{p+1} (1-based p) that user 1 of
// P_F folds in, in order, to walk from W_{d2} to W_{d1}.
std::vector<int> PfDecodeChain(int n, DemandPair demand);

}  // namespace hetcache

#endif  // HETCACHE_CORNER_SCHEMES_H_
