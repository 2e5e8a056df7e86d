#ifndef HETCACHE_SIMULATOR_H_
#define HETCACHE_SIMULATOR_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "hetcache/composer.h"
#include "hetcache/corner_schemes.h"
#include "hetcache/rate_laws.h"

namespace hetcache {

// 64-bit LCG, state = state * 6364136223846793005 + 1442695040888963407.
class Lcg64 {
 public:
  explicit Lcg64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t Next() {
    state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
    return state_;
  }

 private:
  std::uint64_t state_;
};

// Files W_1..W_N filled in order, 64 bits per generator step (bit i of a
// word is bit i of the output); trailing bits of the last word are dropped.
Library MakeLibrary(int n, std::size_t file_bits, std::uint64_t seed);

struct DemandRow {
  DemandPair demand;
  std::size_t rc_bits = 0;
  std::size_t rp1_bits = 0;
  std::size_t rp2_bits = 0;
  bool decode_ok_1 = false;
  bool decode_ok_2 = false;
};

struct DemandRun {
  Transcript transcript;
  BitString decoded_1, decoded_2;
  DemandRow row;
};

// Hook applied to each transcript before decoding (fault injection).
using TranscriptFilter = std::function<void(DemandPair, Transcript&)>;

DemandRun RunDemand(const ComposedCode& code, const Library& lib, DemandPair demand);

struct LinkRates {
  Rational rc, rp1, rp2;
};

struct SimulationReport {
  int n = 2;
  std::size_t file_bits = 0;
  LinkRates links;
  std::vector<DemandRow> rows;  // sorted by (d1, d2), all N^2 demands
  RateTriple predicted;         // plan signature rates per file
  RateTriple worst_rates;       // largest distinct-demand load per link, per file
  Latency worst_case_t;         // over distinct demands
  bool all_decoded = false;
  bool rates_demand_invariant = false;
  bool formula_match = false;   // all decoded and distinct-demand loads equal the prediction

  // Columns: d1,d2,distinct,rc_bits,rp1_bits,rp2_bits,decode_ok_1,decode_ok_2
  std::string ToCsv() const;
  std::string ToJson() const;
};

SimulationReport RunAll(const ComposedCode& code, const Library& lib, const LinkRates& links,
                        std::size_t threads = 1, const TranscriptFilter& filter = {});

// Report is consistent with the code's prediction and its worst-case latency
// does not exceed TStar(inst).
bool VerifyAgainstFormula(const SimulationReport& report, const ProblemInstance& inst);

}  // namespace hetcache

#endif  // HETCACHE_SIMULATOR_H_
