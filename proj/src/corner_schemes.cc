#include "hetcache/corner_schemes.h"

#include <string>

namespace hetcache {
namespace {

constexpr std::array<std::string_view, 12> kNames = {"P_A", "P_B", "P_C", "P_D", "P_E", "P_F",
                                                     "P_G", "P_H", "P_I", "P_J", "P_K", "P_L"};

void CheckDemand(int n, DemandPair d) {
  if (d.d1 < 1 || d.d1 > n || d.d2 < 1 || d.d2 > n) {
    throw DomainError("demand (" + std::to_string(d.d1) + "," + std::to_string(d.d2) +
                      ") outside [1, N]");
  }
}

BitString AllFiles(const Library& lib) { return Concat(lib.files); }

// Piece `index` (1-based) of a cache made of equal-length blocks.
BitString Block(const BitString& cache, int index, std::size_t block_bits) {
  return cache.Slice(static_cast<std::size_t>(index - 1) * block_bits, block_bits);
}

BitString AdjacentSums(const Library& lib) {
  BitString out;
  for (int i = 0; i + 1 < lib.n; ++i) out.Append(lib.files[i] ^ lib.files[i + 1]);
  return out;
}

// Walks from the delivered file `start` to `target` through cached adjacent sums.
BitString ChainDecode(int n, const BitString& sums, const BitString& delivered, int start,
                      int target) {
  const std::size_t s = delivered.size();
  BitString current = delivered;
  for (int p : PfDecodeChain(n, DemandPair{target, start})) {
    current ^= Block(sums, p, s);
  }
  return current;
}

// Segment length implied by a user's view of the scheme, with every length
// checked against the signature.
std::size_t InferSegmentBits(SchemeId id, int n, int user, const CacheContents& cache,
                             const Transcript& t) {
  const Signature sig = SchemeSignature(id, n);
  const Rational& m = user == 1 ? sig.m1 : sig.m2;
  const Rational& rp = user == 1 ? sig.rp1 : sig.rp2;
  const BitString& xp = user == 1 ? t.xp1 : t.xp2;
  const std::array<std::pair<const Rational*, std::size_t>, 3> view = {
      std::pair{&m, cache.payload.size()}, std::pair{&sig.rc, t.xc.size()},
      std::pair{&rp, xp.size()}};

  std::size_t s = 0;
  bool found = false;
  for (const auto& [coeff, bits] : view) {
    if (*coeff == 0) continue;
    Rational seg = Rational(mpz_class(static_cast<unsigned long>(bits))) / *coeff;
    if (seg.get_den() != 1 || !seg.get_num().fits_ulong_p()) {
      throw DecodeError(std::string(SchemeName(id)) + ": length does not match signature");
    }
    s = seg.get_num().get_ui();
    found = true;
    break;
  }
  if (!found) throw DecodeError("scheme gives the user no information");
  for (const auto& [coeff, bits] : view) {
    Rational expected = *coeff * Rational(mpz_class(static_cast<unsigned long>(s)));
    if (expected != Rational(mpz_class(static_cast<unsigned long>(bits)))) {
      throw DecodeError(std::string(SchemeName(id)) + ": inconsistent cache/transcript lengths");
    }
  }
  if (s % Divisibility(id) != 0) {
    throw DecodeError(std::string(SchemeName(id)) + ": segment length violates divisibility");
  }
  return s;
}

}  // namespace

std::string_view SchemeName(SchemeId id) { return kNames[static_cast<std::size_t>(id)]; }

SchemeId ParseSchemeName(std::string_view name) {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == name) return kAllSchemes[i];
  }
  throw DomainError("unknown corner scheme '" + std::string(name) + "'");
}

SchemeId Mirror(SchemeId id) {
  switch (id) {
    case SchemeId::kD: return SchemeId::kE;
    case SchemeId::kE: return SchemeId::kD;
    case SchemeId::kF: return SchemeId::kG;
    case SchemeId::kG: return SchemeId::kF;
    case SchemeId::kI: return SchemeId::kJ;
    case SchemeId::kJ: return SchemeId::kI;
    case SchemeId::kK: return SchemeId::kL;
    case SchemeId::kL: return SchemeId::kK;
    default: return id;
  }
}

Signature Scale(const Signature& s, const Rational& w) {
  return {s.m1 * w, s.m2 * w, s.rp1 * w, s.rp2 * w, s.rc * w};
}

Signature operator+(const Signature& a, const Signature& b) {
  return {a.m1 + b.m1, a.m2 + b.m2, a.rp1 + b.rp1, a.rp2 + b.rp2, a.rc + b.rc};
}

Signature SchemeSignature(SchemeId id, int n) {
  if (n < 2) throw DomainError("N must be at least 2");
  const Rational nn(n);
  switch (id) {
    case SchemeId::kA: return {0, 0, 0, 0, 2};
    case SchemeId::kB: return {nn / 2, nn / 2, 0, 0, Rational(1, 2)};
    case SchemeId::kC: return {nn, nn, 0, 0, 0};
    case SchemeId::kD: return {nn, 0, 0, 0, 1};
    case SchemeId::kE: return {0, nn, 0, 0, 1};
    case SchemeId::kF: return {nn - 1, 0, 0, 0, 1};
    case SchemeId::kG: return {0, nn - 1, 0, 0, 1};
    case SchemeId::kH: return {0, 0, 1, 1, 0};
    case SchemeId::kI: return {0, 0, 1, 0, 1};
    case SchemeId::kJ: return {0, 0, 0, 1, 1};
    case SchemeId::kK: return {0, nn, 1, 0, 0};
    case SchemeId::kL: return {nn, 0, 0, 1, 0};
  }
  throw DomainError("unknown corner scheme");
}

std::size_t Divisibility(SchemeId id) { return id == SchemeId::kB ? 2 : 1; }

void ValidateLibrary(const Library& lib) {
  if (lib.n < 2) throw DomainError("library needs at least 2 files");
  if (lib.files.size() != static_cast<std::size_t>(lib.n)) {
    throw DomainError("library file count does not match N");
  }
  for (const BitString& f : lib.files) {
    if (f.size() != lib.file_bits) throw DomainError("library files must all be F bits");
  }
}

std::pair<CacheContents, CacheContents> Place(SchemeId id, const Library& lib) {
  ValidateLibrary(lib);
  if (lib.file_bits % Divisibility(id) != 0) {
    throw SizingError(std::string(SchemeName(id)) + " needs F divisible by " +
                      std::to_string(Divisibility(id)));
  }
  CacheContents z1{1, {}};
  CacheContents z2{2, {}};
  switch (id) {
    case SchemeId::kA:
    case SchemeId::kH:
    case SchemeId::kI:
    case SchemeId::kJ:
      break;
    case SchemeId::kB: {
      const std::size_t h = lib.file_bits / 2;
      for (const BitString& f : lib.files) {
        z1.payload.Append(f.Slice(0, h));
        z2.payload.Append(f.Slice(h, h));
      }
      break;
    }
    case SchemeId::kC:
      z1.payload = AllFiles(lib);
      z2.payload = z1.payload;
      break;
    case SchemeId::kD:
    case SchemeId::kL:
      z1.payload = AllFiles(lib);
      break;
    case SchemeId::kE:
    case SchemeId::kK:
      z2.payload = AllFiles(lib);
      break;
    case SchemeId::kF:
      z1.payload = AdjacentSums(lib);
      break;
    case SchemeId::kG:
      z2.payload = AdjacentSums(lib);
      break;
  }
  return {std::move(z1), std::move(z2)};
}

Transcript Deliver(SchemeId id, const Library& lib, DemandPair demand) {
  ValidateLibrary(lib);
  CheckDemand(lib.n, demand);
  const BitString& w1 = lib.file(demand.d1);
  const BitString& w2 = lib.file(demand.d2);
  Transcript t;
  switch (id) {
    case SchemeId::kA:
      t.xc = w1;
      t.xc.Append(w2);
      break;
    case SchemeId::kB: {
      if (lib.file_bits % 2 != 0) throw SizingError("P_B needs an even segment length");
      const std::size_t h = lib.file_bits / 2;
      t.xc = w1.Slice(h, h) ^ w2.Slice(0, h);
      break;
    }
    case SchemeId::kC:
      break;
    case SchemeId::kD:
    case SchemeId::kF:
      t.xc = w2;
      break;
    case SchemeId::kE:
    case SchemeId::kG:
      t.xc = w1;
      break;
    case SchemeId::kH:
      t.xp1 = w1;
      t.xp2 = w2;
      break;
    case SchemeId::kI:
      t.xp1 = w1;
      t.xc = w2;
      break;
    case SchemeId::kJ:
      t.xp2 = w2;
      t.xc = w1;
      break;
    case SchemeId::kK:
      t.xp1 = w1;
      break;
    case SchemeId::kL:
      t.xp2 = w2;
      break;
  }
  return t;
}

BitString Decode(SchemeId id, int n, int user, const CacheContents& cache,
                 const Transcript& t, DemandPair demand) {
  if (user != 1 && user != 2) throw DomainError("user must be 1 or 2");
  if (cache.user != user) throw DecodeError("cache belongs to the other user");
  CheckDemand(n, demand);
  const std::size_t s = InferSegmentBits(id, n, user, cache, t);
  const int want = user == 1 ? demand.d1 : demand.d2;
  const BitString& z = cache.payload;

  switch (id) {
    case SchemeId::kA:
      return user == 1 ? t.xc.Slice(0, s) : t.xc.Slice(s, s);
    case SchemeId::kB: {
      const std::size_t h = s / 2;
      const int other = user == 1 ? demand.d2 : demand.d1;
      // User 1 caches first halves, user 2 second halves; the broadcast is
      // W_{d1}^2 + W_{d2}^1, so each user cancels the other's half.
      BitString own = Block(z, want, h);
      BitString missing = t.xc ^ Block(z, other, h);
      if (user == 1) {
        own.Append(missing);
        return own;
      }
      missing.Append(own);
      return missing;
    }
    case SchemeId::kC:
      return Block(z, want, s);
    case SchemeId::kD:
      return user == 1 ? Block(z, want, s) : t.xc;
    case SchemeId::kE:
      return user == 1 ? t.xc : Block(z, want, s);
    case SchemeId::kF:
      return user == 1 ? ChainDecode(n, z, t.xc, demand.d2, demand.d1) : t.xc;
    case SchemeId::kG:
      return user == 1 ? t.xc : ChainDecode(n, z, t.xc, demand.d1, demand.d2);
    case SchemeId::kH:
      return user == 1 ? t.xp1 : t.xp2;
    case SchemeId::kI:
      return user == 1 ? t.xp1 : t.xc;
    case SchemeId::kJ:
      return user == 1 ? t.xc : t.xp2;
    case SchemeId::kK:
      return user == 1 ? t.xp1 : Block(z, want, s);
    case SchemeId::kL:
      return user == 1 ? Block(z, want, s) : t.xp2;
  }
  throw DecodeError("unknown corner scheme");
}

std::vector<int> PfDecodeChain(int n, DemandPair demand) {
  CheckDemand(n, demand);
  std::vector<int> chain;
  int j = demand.d2;
  while (j > demand.d1) {
    chain.push_back(j - 1);
    --j;
  }
  while (j < demand.d1) {
    chain.push_back(j);
    ++j;
  }
  return chain;
}

}  // namespace hetcache
