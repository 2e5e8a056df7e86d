#include "hetcache/sweep.h"

#include <algorithm>
#include <array>
#include <exception>
#include <sstream>
#include <thread>

#include "hetcache/planner.h"
#include "hetcache/rate_laws.h"

namespace hetcache {
namespace {

constexpr std::array<std::string_view, 4> kModeNames = {"rate", "latency", "compare-lhc",
                                                        "compare-bounds"};

struct GridPoint {
  int n;
  Rational m1, m2;
  std::size_t link = 0;
};

std::vector<Rational> Axis(int n, const Rational& step, const std::optional<Rational>& fixed) {
  if (fixed) {
    if (*fixed < 0 || *fixed > n) throw DomainError("pinned cache size outside [0, N]");
    return {*fixed};
  }
  std::vector<Rational> out;
  for (Rational m = 0; m <= n; m += step) out.push_back(m);
  return out;
}

void AppendRational(std::vector<std::string>& row, const Rational& v) {
  row.push_back(ToString(v));
}

std::vector<std::string> Evaluate(const SweepSpec& spec, const GridPoint& p) {
  std::vector<std::string> row = {std::to_string(p.n), ToString(p.m1), ToString(p.m2)};
  const Rational rc = RcStar(p.n, p.m1, p.m2);
  switch (spec.mode) {
    case SweepMode::kRate:
      AppendRational(row, rc);
      row.push_back(ToDecimal(rc));
      break;
    case SweepMode::kLatency: {
      const LinkRates& l = spec.links[p.link];
      const ProblemInstance inst = ProblemInstance::Create(p.n, p.m1, p.m2, l.rc, l.rp1, l.rp2);
      const Latency t = TStar(inst);
      const Plan plan = MakePlan(inst);
      for (const Rational* v : {&l.rc, &l.rp1, &l.rp2}) AppendRational(row, *v);
      row.push_back(t.ToString());
      row.push_back(t.infinite() ? "inf" : ToDecimal(t.value()));
      row.push_back(plan.t.ToString());
      for (const Rational* v : {&plan.rp1, &plan.rp2, &plan.rc}) AppendRational(row, *v);
      row.push_back(std::string(CaseLabelName(plan.case_label)));
      break;
    }
    case SweepMode::kCompareLhc:
    case SweepMode::kCompareBounds: {
      const Rational other = spec.mode == SweepMode::kCompareLhc ? LhcRate(p.n, p.m1, p.m2)
                                                                 : YangBound(p.n, p.m1, p.m2);
      const Rational gap = spec.mode == SweepMode::kCompareLhc ? other - rc : rc - other;
      for (const Rational* v : {&rc, &other, &gap}) AppendRational(row, *v);
      for (const Rational* v : {&rc, &other, &gap}) row.push_back(ToDecimal(*v));
      break;
    }
  }
  return row;
}

}  // namespace

std::string_view SweepModeName(SweepMode mode) {
  return kModeNames[static_cast<std::size_t>(mode)];
}

SweepMode ParseSweepMode(std::string_view name) {
  for (std::size_t i = 0; i < kModeNames.size(); ++i) {
    if (kModeNames[i] == name) return static_cast<SweepMode>(i);
  }
  throw DomainError("unknown sweep mode '" + std::string(name) + "'");
}

std::vector<std::string> SweepHeader(SweepMode mode) {
  switch (mode) {
    case SweepMode::kRate:
      return {"N", "M1", "M2", "rc_star", "rc_star_decimal"};
    case SweepMode::kLatency:
      return {"N",  "M1",     "M2",          "Rc",         "Rp1",        "Rp2",
              "t_star", "t_star_decimal", "plan_T", "plan_rp1", "plan_rp2", "plan_rc",
              "case_label"};
    case SweepMode::kCompareLhc:
      return {"N",        "M1",           "M2",         "rc_star",
              "lhc_rate", "gap",          "rc_star_decimal", "lhc_rate_decimal",
              "gap_decimal"};
    case SweepMode::kCompareBounds:
      return {"N",          "M1",  "M2",         "rc_star",
              "yang_bound", "gap", "rc_star_decimal", "yang_bound_decimal",
              "gap_decimal"};
  }
  return {};
}

std::vector<std::vector<std::string>> SweepRows(const SweepSpec& spec) {
  if (spec.ns.empty()) throw DomainError("sweep needs at least one N");
  if (spec.step <= 0) throw DomainError("grid step must be positive");
  if (spec.mode == SweepMode::kLatency && spec.links.empty()) {
    throw DomainError("latency sweep needs link rates");
  }
  const int min_n =
      spec.mode == SweepMode::kCompareLhc || spec.mode == SweepMode::kCompareBounds ? 3 : 2;

  std::vector<GridPoint> points;
  for (int n : spec.ns) {
    if (n < min_n) {
      throw DomainError("mode " + std::string(SweepModeName(spec.mode)) + " needs N >= " +
                        std::to_string(min_n));
    }
    const Rational cells = Rational(n) / spec.step;
    if (cells.get_den() != 1) {
      throw DomainError("grid step " + ToString(spec.step) + " does not divide N = " +
                        std::to_string(n));
    }
    const std::size_t link_count = spec.mode == SweepMode::kLatency ? spec.links.size() : 1;
    for (const Rational& m1 : Axis(n, spec.step, spec.m1)) {
      for (const Rational& m2 : Axis(n, spec.step, spec.m2)) {
        for (std::size_t l = 0; l < link_count; ++l) points.push_back({n, m1, m2, l});
      }
    }
  }

  std::vector<std::vector<std::string>> rows(points.size());
  auto work = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t i = begin; i < points.size(); i += stride) rows[i] = Evaluate(spec, points[i]);
  };
  const std::size_t threads = std::clamp<std::size_t>(spec.threads, 1, points.size());
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (std::size_t k = 0; k < threads; ++k) {
      pool.emplace_back([&, k] {
        try {
          work(k, threads);
        } catch (...) {
          errors[k] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  return rows;
}

std::string SweepCsv(const SweepSpec& spec) {
  std::ostringstream out;
  auto emit = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  };
  emit(SweepHeader(spec.mode));
  for (const auto& row : SweepRows(spec)) emit(row);
  return out.str();
}

}  // namespace hetcache
