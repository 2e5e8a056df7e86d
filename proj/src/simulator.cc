#include "hetcache/simulator.h"

#include <algorithm>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace hetcache {
namespace {

constexpr int kReportFormatVersion = 1;

Rational PerFile(std::size_t bits, std::size_t file_bits) {
  Rational r(mpz_class(static_cast<unsigned long>(bits)),
             mpz_class(static_cast<unsigned long>(file_bits)));
  r.canonicalize();
  return r;
}

DemandRow Measure(const ComposedCode& code, const std::pair<CacheContents, CacheContents>& caches,
                  const Library& lib, DemandPair demand, Transcript& t, BitString& out1,
                  BitString& out2) {
  DemandRow row;
  row.demand = demand;
  row.rc_bits = t.xc.size();
  row.rp1_bits = t.xp1.size();
  row.rp2_bits = t.xp2.size();
  try {
    out1 = code.Decode(1, caches.first, t, demand);
    row.decode_ok_1 = out1 == lib.file(demand.d1);
  } catch (const DecodeError&) {
    row.decode_ok_1 = false;
  }
  try {
    out2 = code.Decode(2, caches.second, t, demand);
    row.decode_ok_2 = out2 == lib.file(demand.d2);
  } catch (const DecodeError&) {
    row.decode_ok_2 = false;
  }
  return row;
}

nlohmann::json RatesJson(const RateTriple& r) {
  return {{"rc", ToString(r.rc)}, {"rp1", ToString(r.rp1)}, {"rp2", ToString(r.rp2)}};
}

}  // namespace

Library MakeLibrary(int n, std::size_t file_bits, std::uint64_t seed) {
  if (n < 1) throw DomainError("library needs at least one file");
  if (file_bits < 1) throw DomainError("files need at least one bit");
  Lcg64 rng(seed);
  Library lib{n, file_bits, {}};
  const std::size_t words = (file_bits + 63) / 64;
  for (int i = 0; i < n; ++i) {
    std::vector<std::uint64_t> w(words);
    for (auto& x : w) x = rng.Next();
    lib.files.emplace_back(std::move(w), file_bits);
  }
  return lib;
}

DemandRun RunDemand(const ComposedCode& code, const Library& lib, DemandPair demand) {
  const auto caches = code.Place(lib);
  DemandRun run;
  run.transcript = code.Deliver(lib, demand);
  run.row = Measure(code, caches, lib, demand, run.transcript, run.decoded_1, run.decoded_2);
  return run;
}

SimulationReport RunAll(const ComposedCode& code, const Library& lib, const LinkRates& links,
                        std::size_t threads, const TranscriptFilter& filter) {
  const std::vector<Library> parts = code.Split(lib);
  const auto caches = code.PlaceSplit(parts);
  const int n = code.n();

  std::vector<DemandPair> demands;
  for (int d1 = 1; d1 <= n; ++d1) {
    for (int d2 = 1; d2 <= n; ++d2) demands.push_back({d1, d2});
  }

  SimulationReport report;
  report.n = n;
  report.file_bits = code.file_bits();
  report.links = links;
  report.rows.resize(demands.size());

  auto work = [&](std::size_t begin, std::size_t step) {
    for (std::size_t i = begin; i < demands.size(); i += step) {
      Transcript t = code.DeliverSplit(parts, demands[i]);
      if (filter) filter(demands[i], t);
      BitString out1, out2;
      report.rows[i] = Measure(code, caches, lib, demands[i], t, out1, out2);
    }
  };
  threads = std::clamp<std::size_t>(threads, 1, demands.size());
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t k = 0; k < threads; ++k) pool.emplace_back(work, k, threads);
    for (auto& th : pool) th.join();
  }

  const Signature sig = code.plan().Achieved();
  report.predicted = {sig.rp1, sig.rp2, sig.rc};
  const std::size_t f = code.file_bits();

  report.all_decoded = true;
  report.rates_demand_invariant = true;
  const DemandRow* first = nullptr;
  std::size_t max_rc = 0, max_rp1 = 0, max_rp2 = 0;
  for (const DemandRow& row : report.rows) {
    report.all_decoded = report.all_decoded && row.decode_ok_1 && row.decode_ok_2;
    if (!row.demand.distinct()) continue;
    if (first == nullptr) {
      first = &row;
    } else if (row.rc_bits != first->rc_bits || row.rp1_bits != first->rp1_bits ||
               row.rp2_bits != first->rp2_bits) {
      report.rates_demand_invariant = false;
    }
    max_rc = std::max(max_rc, row.rc_bits);
    max_rp1 = std::max(max_rp1, row.rp1_bits);
    max_rp2 = std::max(max_rp2, row.rp2_bits);
    const RateTriple r{PerFile(row.rp1_bits, f), PerFile(row.rp2_bits, f),
                       PerFile(row.rc_bits, f)};
    report.worst_case_t = Max(report.worst_case_t, LatencyOf(r, links.rc, links.rp1, links.rp2));
  }
  report.worst_rates = {PerFile(max_rp1, f), PerFile(max_rp2, f), PerFile(max_rc, f)};
  report.formula_match = report.all_decoded && report.rates_demand_invariant &&
                         report.worst_rates.rc == report.predicted.rc &&
                         report.worst_rates.rp1 == report.predicted.rp1 &&
                         report.worst_rates.rp2 == report.predicted.rp2;
  return report;
}

bool VerifyAgainstFormula(const SimulationReport& report, const ProblemInstance& inst) {
  if (!report.formula_match) return false;
  if (report.n != inst.n()) return false;
  if (report.links.rc != inst.rc() || report.links.rp1 != inst.rp1() ||
      report.links.rp2 != inst.rp2()) {
    return false;
  }
  return report.worst_case_t <= TStar(inst);
}

std::string SimulationReport::ToCsv() const {
  std::ostringstream out;
  out << "d1,d2,distinct,rc_bits,rp1_bits,rp2_bits,decode_ok_1,decode_ok_2\n";
  for (const DemandRow& r : rows) {
    out << r.demand.d1 << ',' << r.demand.d2 << ',' << (r.demand.distinct() ? 1 : 0) << ','
        << r.rc_bits << ',' << r.rp1_bits << ',' << r.rp2_bits << ',' << (r.decode_ok_1 ? 1 : 0)
        << ',' << (r.decode_ok_2 ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string SimulationReport::ToJson() const {
  nlohmann::json rows_json = nlohmann::json::array();
  for (const DemandRow& r : rows) {
    rows_json.push_back({{"d1", r.demand.d1},
                         {"d2", r.demand.d2},
                         {"distinct", r.demand.distinct()},
                         {"rc_bits", r.rc_bits},
                         {"rp1_bits", r.rp1_bits},
                         {"rp2_bits", r.rp2_bits},
                         {"decode_ok_1", r.decode_ok_1},
                         {"decode_ok_2", r.decode_ok_2}});
  }
  nlohmann::json doc{
      {"format", "hetcache.simulation_report"},
      {"version", kReportFormatVersion},
      {"n", n},
      {"file_bits", file_bits},
      {"links",
       {{"rc", ToString(links.rc)}, {"rp1", ToString(links.rp1)}, {"rp2", ToString(links.rp2)}}},
      {"predicted", RatesJson(predicted)},
      {"worst_rates", RatesJson(worst_rates)},
      {"worst_case_T", worst_case_t.ToString()},
      {"all_decoded", all_decoded},
      {"rates_demand_invariant", rates_demand_invariant},
      {"formula_match", formula_match},
      {"rows", rows_json}};
  return doc.dump(2) + "\n";
}

}  // namespace hetcache
