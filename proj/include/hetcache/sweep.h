#ifndef HETCACHE_SWEEP_H_
#define HETCACHE_SWEEP_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hetcache/rational.h"
#include "hetcache/simulator.h"

namespace hetcache {

enum class SweepMode { kRate, kLatency, kCompareLhc, kCompareBounds };

std::string_view SweepModeName(SweepMode mode);  // "rate", "latency", ...
SweepMode ParseSweepMode(std::string_view name);

struct SweepSpec {
  SweepMode mode = SweepMode::kRate;
  std::vector<int> ns;
  Rational step = Rational(1, 4);        // must divide every N
  std::optional<Rational> m1, m2;        // pin a coordinate instead of sweeping it
  std::vector<LinkRates> links;          // latency mode only
  std::size_t threads = 1;
};

// Column names for a mode, in output order.
std::vector<std::string> SweepHeader(SweepMode mode);

// Rows ordered by N, then M1, then M2, then link triple index.
std::vector<std::vector<std::string>> SweepRows(const SweepSpec& spec);

std::string SweepCsv(const SweepSpec& spec);

}  // namespace hetcache

#endif  // HETCACHE_SWEEP_H_
