#include "hetcache/cli.h"

#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <ostream>
#include <string_view>

#include "CLI11.hpp"
#include "hetcache/composer.h"
#include "hetcache/planner.h"
#include "hetcache/rate_laws.h"
#include "hetcache/simulator.h"
#include "hetcache/sweep.h"
#include "json.hpp"

namespace hetcache {
namespace {

constexpr std::array<std::string_view, 8> kLongFlags = {"-M1",   "-M2",   "-Rc",     "-Rp1",
                                                        "-Rp2",  "-seed", "-step",   "-threads"};

struct InstanceFlags {
  int n = 0;
  std::string m1 = "0", m2 = "0";
  std::string rc = "1", rp1 = "0", rp2 = "0";
  std::string out;
};

void AddCacheFlags(CLI::App* cmd, InstanceFlags& f) {
  cmd->add_option("-N", f.n, "number of files")->required();
  cmd->add_option("--M1", f.m1, "cache size of user 1, in files");
  cmd->add_option("--M2", f.m2, "cache size of user 2, in files");
  cmd->add_option("-o", f.out, "output path");
}

void AddLinkFlags(CLI::App* cmd, InstanceFlags& f) {
  cmd->add_option("--Rc", f.rc, "shared link capacity");
  cmd->add_option("--Rp1", f.rp1, "private link capacity of user 1");
  cmd->add_option("--Rp2", f.rp2, "private link capacity of user 2");
}

ProblemInstance ToInstance(const InstanceFlags& f) {
  return ProblemInstance::Create(f.n, ParseRational(f.m1), ParseRational(f.m2),
                                 ParseRational(f.rc), ParseRational(f.rp1), ParseRational(f.rp2));
}

void WriteFile(const std::string& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
  file << text;
  if (!file.flush()) throw std::runtime_error("cannot write '" + path + "'");
}

std::string ValueJson(const InstanceFlags& f, const char* key, const std::string& value,
                      const std::string& decimal, bool links) {
  nlohmann::json doc{{"n", f.n}, {"m1", f.m1}, {"m2", f.m2}, {key, value},
                     {std::string(key) + "_decimal", decimal}};
  if (links) {
    doc["rc"] = f.rc;
    doc["rp1"] = f.rp1;
    doc["rp2"] = f.rp2;
  }
  return doc.dump(2) + "\n";
}

int CmdRate(const InstanceFlags& f, std::ostream& out) {
  const Rational rate = RcStar(f.n, ParseRational(f.m1), ParseRational(f.m2));
  out << ToString(rate) << '\n';
  if (!f.out.empty()) {
    WriteFile(f.out, ValueJson(f, "rc_star", ToString(rate), ToDecimal(rate), false));
  }
  return kExitOk;
}

int CmdLatency(const InstanceFlags& f, std::ostream& out) {
  const Latency t = TStar(ToInstance(f));
  out << t.ToString() << '\n';
  if (!f.out.empty()) {
    WriteFile(f.out, ValueJson(f, "t_star", t.ToString(),
                               t.infinite() ? "inf" : ToDecimal(t.value()), true));
  }
  return kExitOk;
}

int CmdPlan(const InstanceFlags& f, std::ostream& out) {
  const std::string json = MakePlan(ToInstance(f)).ToJson();
  if (f.out.empty()) {
    out << json;
  } else {
    WriteFile(f.out, json);
  }
  return kExitOk;
}

int CmdSimulate(const InstanceFlags& f, std::uint64_t seed, std::size_t threads,
                const std::string& code_out, std::ostream& out, std::ostream& err) {
  const ProblemInstance inst = ToInstance(f);
  const Plan plan = MakePlan(inst);
  const SharePlan share = MakeSharePlan(inst.n(), inst.m1(), inst.m2(), plan.rp1, plan.rp2);
  const ComposedCode code = ComposedCode::Compose(share, MinFileSize(share));
  const Library lib = MakeLibrary(inst.n(), code.file_bits(), seed);
  const SimulationReport report =
      RunAll(code, lib, {inst.rc(), inst.rp1(), inst.rp2()}, threads);

  if (!f.out.empty()) {
    WriteFile(f.out + ".csv", report.ToCsv());
    WriteFile(f.out + ".json", report.ToJson());
  }
  if (!code_out.empty()) WriteFile(code_out, code.Serialize());

  const bool verified = VerifyAgainstFormula(report, inst);
  const bool optimal = report.worst_case_t == plan.t;
  out << "F = " << code.file_bits() << '\n'
      << "case = " << CaseLabelName(plan.case_label) << '\n'
      << "rates (rp1, rp2, rc) = (" << ToString(plan.rp1) << ", " << ToString(plan.rp2) << ", "
      << ToString(plan.rc) << ")\n"
      << "T = " << report.worst_case_t.ToString() << '\n'
      << "t_star = " << TStar(inst).ToString() << '\n'
      << "formula_match = " << (report.formula_match ? "true" : "false") << '\n';
  if (!verified || !optimal) {
    err << "simulation does not reproduce the predicted rates and latency\n";
    return kExitCheckFailed;
  }
  return kExitOk;
}

struct SweepFlags {
  std::vector<int> ns;
  std::string step = "1/4";
  std::string m1, m2;
  std::string rc = "1", rp1 = "0", rp2 = "0";
  std::string out;
  std::size_t threads = 1;
};

void AddSweepFlags(CLI::App* cmd, SweepFlags& f) {
  cmd->add_option("-N", f.ns, "file counts (comma separated)")->required()->delimiter(',');
  cmd->add_option("--step", f.step, "grid step for M1 and M2");
  cmd->add_option("--M1", f.m1, "pin M1 instead of sweeping it");
  cmd->add_option("--M2", f.m2, "pin M2 instead of sweeping it");
  cmd->add_option("-o", f.out, "output CSV path (stdout if omitted)");
  cmd->add_option("--threads", f.threads, "worker threads");
}

int CmdSweep(const SweepFlags& f, SweepMode mode, std::ostream& out) {
  SweepSpec spec;
  spec.mode = mode;
  spec.ns = f.ns;
  spec.step = ParseRational(f.step);
  if (!f.m1.empty()) spec.m1 = ParseRational(f.m1);
  if (!f.m2.empty()) spec.m2 = ParseRational(f.m2);
  spec.links.push_back({ParseRational(f.rc), ParseRational(f.rp1), ParseRational(f.rp2)});
  spec.threads = f.threads;
  const std::string csv = SweepCsv(spec);
  if (f.out.empty()) {
    out << csv;
  } else {
    WriteFile(f.out, csv);
  }
  return kExitOk;
}

std::vector<std::string> NormalizeFlags(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  out.reserve(args.size());
  for (const std::string& a : args) {
    const std::string_view name = std::string_view(a).substr(0, a.find('='));
    if (std::find(kLongFlags.begin(), kLongFlags.end(), name) != kLongFlags.end()) {
      out.push_back("-" + a);
    } else {
      out.push_back(a);
    }
  }
  return out;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-user coded caching with a shared link and private links"};
  app.name("hetcache");
  app.require_subcommand(1);

  InstanceFlags inst;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  std::string code_out;

  auto* rate = app.add_subcommand("rate", "optimal shared-link rate");
  AddCacheFlags(rate, inst);

  auto* latency = app.add_subcommand("latency", "optimal worst-case latency");
  AddCacheFlags(latency, inst);
  AddLinkFlags(latency, inst);

  auto* plan = app.add_subcommand("plan", "latency-optimal operating point (JSON)");
  AddCacheFlags(plan, inst);
  AddLinkFlags(plan, inst);

  auto* simulate = app.add_subcommand("simulate", "plan, compose and simulate every demand");
  AddCacheFlags(simulate, inst);
  AddLinkFlags(simulate, inst);
  simulate->add_option("--seed", seed, "library seed");
  simulate->add_option("--threads", threads, "worker threads");
  simulate->add_option("--code", code_out, "write the composed code description here");

  SweepFlags sweep_flags;
  std::string mode_name = "rate";
  auto* sweep = app.add_subcommand("sweep", "grid sweep as CSV");
  AddSweepFlags(sweep, sweep_flags);
  sweep->add_option("--mode", mode_name, "rate, latency, compare-lhc or compare-bounds");
  AddLinkFlags(sweep, inst);
  auto* compare_lhc = app.add_subcommand("compare-lhc", "sweep against the layered baseline");
  AddSweepFlags(compare_lhc, sweep_flags);
  auto* compare_bounds = app.add_subcommand("compare-bounds", "sweep against the earlier bound");
  AddSweepFlags(compare_bounds, sweep_flags);

  std::vector<std::string> reversed = NormalizeFlags(args);
  std::reverse(reversed.begin(), reversed.end());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitBadInput;
  }

  try {
    if (rate->parsed()) return CmdRate(inst, out);
    if (latency->parsed()) return CmdLatency(inst, out);
    if (plan->parsed()) return CmdPlan(inst, out);
    if (simulate->parsed()) return CmdSimulate(inst, seed, threads, code_out, out, err);
    sweep_flags.rc = inst.rc;
    sweep_flags.rp1 = inst.rp1;
    sweep_flags.rp2 = inst.rp2;
    if (sweep->parsed()) return CmdSweep(sweep_flags, ParseSweepMode(mode_name), out);
    if (compare_lhc->parsed()) return CmdSweep(sweep_flags, SweepMode::kCompareLhc, out);
    if (compare_bounds->parsed()) return CmdSweep(sweep_flags, SweepMode::kCompareBounds, out);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitBadInput;
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitBadInput;
  } catch (const std::logic_error& e) {
    err << "internal check failed: " << e.what() << '\n';
    return kExitCheckFailed;
  }
  return kExitBadInput;
}

}  // namespace hetcache
