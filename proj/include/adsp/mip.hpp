#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "adsp/model.hpp"
#include "adsp/validate.hpp"

namespace adsp {

using Rational = boost::multiprecision::cpp_rational;

enum class Sense { LessEq, Eq, GreaterEq };

struct MipVariable {
  std::string name;
  bool binary = false;
  bool free = false;  // continuous variables are >= 0 unless free
};

struct LinearRow {
  std::string name;
  std::vector<std::pair<std::size_t, std::int64_t>> terms;  // (variable index, coefficient)
  Sense sense = Sense::LessEq;
  std::int64_t rhs = 0;
};

/// A task of the extended set: instance tasks first, then one pseudo-task per
/// merged unavailability window.
struct OoeTask {
  std::string label;
  TimeTick duration = 0;
  int crew = 1;
  std::optional<std::size_t> task;   // instance task index
  std::optional<std::size_t> owner;  // technician, for pseudo-tasks
  TimeTick fixedStart = 0;           // pseudo-tasks only
};

struct OoeModel {
  std::vector<MipVariable> variables;
  std::unordered_map<std::string, std::size_t> index;
  std::vector<LinearRow> rows;
  std::string objectiveVar = "t_max";
  std::vector<OoeTask> tasks;  // the extended task set
  std::size_t events = 0;
  std::size_t techs = 0;
  TimeTick bigM = 0;
  RelaxFlags relax;

  std::size_t var(const std::string& name) const {
    auto it = index.find(name);
    if (it == index.end()) throw MissingVariable("model has no variable '" + name + "'");
    return it->second;
  }

  std::size_t count_with_prefix(std::string_view prefix) const {
    return static_cast<std::size_t>(std::count_if(variables.begin(), variables.end(), [&](const MipVariable& v) {
      return std::string_view(v.name).substr(0, prefix.size()) == prefix;
    }));
  }

  const LinearRow* row(std::string_view name) const {
    for (const auto& r : rows)
      if (r.name == name) return &r;
    return nullptr;
  }
};

struct VarAssignment {
  std::map<std::string, Rational> values;

  void set(const std::string& name, const Rational& v) { values[name] = v; }
  const Rational& at(const std::string& name) const {
    auto it = values.find(name);
    if (it == values.end()) throw MissingVariable("assignment has no value for '" + name + "'");
    return it->second;
  }
};

namespace ooe {

inline std::string z(std::size_t i, std::size_t e) { return "z_i" + std::to_string(i) + "_e" + std::to_string(e); }
inline std::string a(std::size_t i, std::size_t e) { return "a_i" + std::to_string(i) + "_e" + std::to_string(e); }
inline std::string x(std::size_t i, std::size_t j) { return "x_i" + std::to_string(i) + "_j" + std::to_string(j); }
inline std::string y(std::size_t i, std::size_t j, std::size_t e) {
  return "y_i" + std::to_string(i) + "_j" + std::to_string(j) + "_e" + std::to_string(e);
}
inline std::string t(std::size_t e) { return "t_e" + std::to_string(e); }
inline std::string baf(std::size_t e) { return "baf_e" + std::to_string(e); }
inline std::string blr(std::size_t e) { return "blr_e" + std::to_string(e); }

}  // namespace ooe

namespace detail {

class RowBuilder {
 public:
  RowBuilder(OoeModel& m, std::string name) : m_(m), name_(std::move(name)) {}

  RowBuilder& add(const std::string& var, std::int64_t coef) {
    coefs_[m_.var(var)] += coef;
    return *this;
  }

  void finish(Sense sense, std::int64_t rhs) {
    LinearRow row{std::move(name_), {}, sense, rhs};
    for (const auto& [v, c] : coefs_)
      if (c != 0) row.terms.emplace_back(v, c);
    m_.rows.push_back(std::move(row));
  }

 private:
  OoeModel& m_;
  std::string name_;
  std::map<std::size_t, std::int64_t> coefs_;
};

inline std::string idx(std::string_view tag, std::size_t v) { return "_" + std::string(tag) + std::to_string(v); }

}  // namespace detail

/// Builds the on/off event-based model: one event per task of the extended
/// set (instance tasks plus unavailability pseudo-tasks). Relaxation flags
/// drop the requirement, capacity and balance rows. `spareEvents` adds events
/// beyond that count; the standard model has none.
inline OoeModel emit_ooe(const Instance& inst, RelaxFlags relax = {}, std::size_t spareEvents = 0) {
  OoeModel m;
  m.relax = relax;
  m.techs = inst.num_techs();
  for (std::size_t i = 0; i < inst.num_tasks(); ++i) {
    const auto& t = inst.tasks()[i];
    m.tasks.push_back(OoeTask{t.id, t.duration, t.crew, i, std::nullopt, 0});
  }
  for (std::size_t j = 0; j < inst.num_techs(); ++j) {
    const auto& windows = inst.merged_unavailability(j);
    for (std::size_t k = 0; k < windows.size(); ++k)
      m.tasks.push_back(OoeTask{"unavailable:" + inst.technicians()[j].id + ":" + std::to_string(k),
                                windows[k].end - windows[k].start, 1, std::nullopt, j, windows[k].start});
  }
  const std::size_t T = m.tasks.size();
  const std::size_t N = T + spareEvents;
  const std::size_t R = m.techs;
  m.events = N;
  // Event times reach past the sum of durations when unavailability delays work.
  m.bigM = horizon(inst) + inst.max_unavailability_end();
  const auto M = m.bigM;
  const auto Ni = static_cast<std::int64_t>(N);

  auto declare = [&](std::string name, bool binary, bool free = false) {
    m.index.emplace(name, m.variables.size());
    m.variables.push_back(MipVariable{std::move(name), binary, free});
  };
  for (std::size_t i = 0; i < T; ++i)
    for (std::size_t e = 0; e < N; ++e) declare(ooe::z(i, e), true);
  for (std::size_t i = 0; i < T; ++i)
    for (std::size_t e = 0; e < N; ++e) declare(ooe::a(i, e), true);
  for (std::size_t i = 0; i < T; ++i)
    for (std::size_t j = 0; j < R; ++j) declare(ooe::x(i, j), true);
  for (std::size_t i = 0; i < T; ++i)
    for (std::size_t j = 0; j < R; ++j)
      for (std::size_t e = 0; e < N; ++e) declare(ooe::y(i, j, e), true);
  for (std::size_t e = 0; e < N; ++e) declare(ooe::t(e), false);
  declare("t_max", false);
  for (std::size_t e = 0; e < N; ++e) declare(ooe::baf(e), false, true);
  for (std::size_t e = 0; e < N; ++e) declare(ooe::blr(e), false, true);

  using detail::idx;
  using detail::RowBuilder;
  auto row = [&](std::string name) { return RowBuilder(m, std::move(name)); };
  const auto G = Sense::GreaterEq;
  const auto L = Sense::LessEq;
  const auto E = Sense::Eq;

  if (N > 0) row("eq11").add(ooe::t(0), 1).finish(E, 0);
  for (std::size_t e = 1; e < N; ++e) row("eq12" + idx("e", e)).add(ooe::t(e), 1).add(ooe::t(e - 1), -1).finish(G, 0);

  for (std::size_t i = 0; i < T; ++i) {
    const auto d = m.tasks[i].duration;
    for (std::size_t e = 0; e < N; ++e) {
      auto r14 = row("eq14" + idx("i", i) + idx("e", e));
      r14.add(ooe::a(i, e), 1).add(ooe::z(i, e), -1);
      if (e > 0) r14.add(ooe::z(i, e - 1), 1);
      r14.finish(G, 0);
      auto r15 = row("eq15" + idx("i", i) + idx("e", e));
      r15.add(ooe::a(i, e), 1);
      if (e > 0) r15.add(ooe::z(i, e - 1), 1);
      r15.finish(L, 1);
    }
    {
      auto r16 = row("eq16" + idx("i", i));
      for (std::size_t e = 0; e < N; ++e) r16.add(ooe::z(i, e), 1);
      r16.finish(G, 1);
    }
    for (std::size_t e = 1; e < N; ++e) {
      const auto ei = static_cast<std::int64_t>(e);
      auto r17 = row("eq17" + idx("i", i) + idx("e", e));
      for (std::size_t f = 0; f < e; ++f) r17.add(ooe::z(i, f), 1);
      r17.add(ooe::z(i, e), ei).add(ooe::z(i, e - 1), -ei).finish(L, ei);
      auto r18 = row("eq18" + idx("i", i) + idx("e", e));
      for (std::size_t f = e; f < N; ++f) r18.add(ooe::z(i, f), 1);
      r18.add(ooe::z(i, e), -(Ni - ei)).add(ooe::z(i, e - 1), Ni - ei).finish(L, Ni - ei);
    }
    for (std::size_t e = 0; e < N; ++e)
      for (std::size_t f = e + 1; f < N; ++f) {
        auto r19 = row("eq19" + idx("i", i) + idx("e", e) + idx("f", f));
        r19.add(ooe::t(f), 1).add(ooe::t(e), -1).add(ooe::z(i, e), -d).add(ooe::z(i, f), d).add(ooe::z(i, f - 1), -d);
        if (e > 0) r19.add(ooe::z(i, e - 1), d);
        r19.finish(G, -d);
      }
    if (m.tasks[i].task)
      for (std::size_t e = 0; e < N; ++e)
        row("eq20" + idx("i", i) + idx("e", e)).add("t_max", 1).add(ooe::t(e), -1).add(ooe::a(i, e), -M).finish(G, d - M);
  }

  for (std::size_t i = 0; i < T; ++i)
    for (std::size_t j = 0; j < R; ++j)
      for (std::size_t e = 0; e < N; ++e) {
        const auto tag = idx("i", i) + idx("j", j) + idx("e", e);
        row("eq21" + tag).add(ooe::y(i, j, e), 1).add(ooe::x(i, j), -1).finish(L, 0);
        row("eq22" + tag).add(ooe::y(i, j, e), 1).add(ooe::z(i, e), -1).finish(L, 0);
        row("eq23" + tag).add(ooe::y(i, j, e), 1).add(ooe::x(i, j), -1).add(ooe::z(i, e), -1).finish(G, -1);
      }
  for (std::size_t i = 0; i < T; ++i)
    for (std::size_t e = 0; e < N; ++e) {
      auto r = row("eq24" + idx("i", i) + idx("e", e));
      for (std::size_t j = 0; j < R; ++j) r.add(ooe::y(i, j, e), 1);
      r.add(ooe::z(i, e), -m.tasks[i].crew).finish(E, 0);
    }
  for (std::size_t j = 0; j < R; ++j)
    for (std::size_t e = 0; e < N; ++e) {
      auto r = row("eq25" + idx("j", j) + idx("e", e));
      for (std::size_t i = 0; i < T; ++i) r.add(ooe::y(i, j, e), 1);
      r.finish(L, 1);
    }
  for (std::size_t i = 0; i < T; ++i)
    for (std::size_t j = 0; j < R; ++j) {
      const auto tag = idx("i", i) + idx("j", j);
      auto lo = row("eq26" + tag + "_lo");
      auto hi = row("eq26" + tag + "_hi");
      for (std::size_t e = 0; e < N; ++e) {
        lo.add(ooe::y(i, j, e), 1);
        hi.add(ooe::y(i, j, e), 1);
      }
      lo.add(ooe::x(i, j), -1).finish(G, 0);
      hi.add(ooe::x(i, j), -Ni).finish(L, 0);
      auto lo27 = row("eq27" + tag + "_lo");
      auto hi27 = row("eq27" + tag + "_hi");
      for (std::size_t e = 0; e < N; ++e) {
        lo27.add(ooe::z(i, e), 1).add(ooe::y(i, j, e), -1);
        hi27.add(ooe::z(i, e), 1).add(ooe::y(i, j, e), -1);
      }
      lo27.add(ooe::x(i, j), 1).finish(G, 1);
      hi27.add(ooe::x(i, j), Ni).finish(L, Ni);
    }
  for (std::size_t i = 0; i < T; ++i) {
    auto r = row("eq28" + idx("i", i));
    for (std::size_t j = 0; j < R; ++j) r.add(ooe::x(i, j), 1);
    r.finish(E, m.tasks[i].crew);
  }

  for (std::size_t u = 0; u < T; ++u) {
    if (!m.tasks[u].owner) continue;
    const auto j = *m.tasks[u].owner;
    const auto s = m.tasks[u].fixedStart;
    row("eq29" + idx("i", u) + idx("j", j)).add(ooe::x(u, j), 1).finish(E, 1);
    for (std::size_t e = 0; e < N; ++e) {
      row("eq30" + idx("i", u) + idx("e", e)).add(ooe::t(e), 1).add(ooe::a(u, e), -s).finish(G, 0);
      row("eq31" + idx("i", u) + idx("e", e)).add(ooe::t(e), 1).add(ooe::a(u, e), M - s).finish(L, M);
    }
  }

  for (std::size_t i = 0; i < inst.num_tasks(); ++i)
    for (auto p : inst.predecessors(i))
      for (std::size_t e = 0; e < N; ++e) {
        const auto ei = static_cast<std::int64_t>(e);
        auto r = row("eq32" + idx("i", i) + idx("p", p) + idx("e", e));
        r.add(ooe::z(p, e), 1 + ei);
        for (std::size_t f = 0; f <= e; ++f) r.add(ooe::z(i, f), 1);
        r.finish(L, 1 + ei);
      }

  if (!relax.dropRequirements)
    for (std::size_t i = 0; i < inst.num_tasks(); ++i) {
      const auto& reqs = inst.task_requirements(i);
      for (std::size_t q = 0; q < reqs.size(); ++q) {
        auto r = row("eq33" + idx("i", i) + idx("q", q));
        for (std::size_t j = 0; j < R; ++j)
          if (inst.tech_has_skill(j, reqs[q].first)) r.add(ooe::x(i, j), 1);
        r.finish(G, reqs[q].second);
      }
    }

  if (!relax.dropCapacity)
    for (std::size_t l = 0; l < inst.locations().size(); ++l) {
      const auto& cap = inst.locations()[l].capacity;
      if (!cap) continue;
      bool used = false;
      for (std::size_t i = 0; i < inst.num_tasks(); ++i) used = used || inst.task_location(i) == l;
      if (!used) continue;
      for (std::size_t e = 0; e < N; ++e) {
        auto r = row("eq34" + idx("l", l) + idx("e", e));
        for (std::size_t i = 0; i < inst.num_tasks(); ++i)
          if (inst.task_location(i) == l) r.add(ooe::z(i, e), inst.tasks()[i].crew);
        r.finish(L, *cap);
      }
    }

  if (!relax.dropBalance) {
    for (Axis axis : {Axis::AF, Axis::LR}) {
      const bool af = axis == Axis::AF;
      auto bvar = [&](std::size_t e) { return af ? ooe::baf(e) : ooe::blr(e); };
      for (std::size_t e = 0; e < N; ++e) {
        auto r = row(std::string(af ? "eq35" : "eq36") + idx("e", e));
        r.add(bvar(e), 1);
        if (e > 0) r.add(bvar(e - 1), -1);
        for (std::size_t i = 0; i < inst.num_tasks(); ++i)
          if (auto mass = inst.signed_mass(i, axis); mass != 0) r.add(ooe::a(i, e), -mass);
        r.finish(E, 0);
      }
      const auto limit = inst.balance_limit(axis);
      for (std::size_t e = 0; e < N; ++e) {
        const std::string tag = std::string(af ? "_af" : "_lr") + idx("e", e);
        row("eq37" + tag + "_lo").add(bvar(e), 1).finish(G, -limit);
        row("eq37" + tag + "_hi").add(bvar(e), 1).finish(L, limit);
      }
    }
  }
  return m;
}

/// Variable values describing `schedule` in the model of `emit_ooe`. Events
/// sit at the distinct start times (0 first, the last time repeated to fill
/// the event count). Throws InfeasibleInput when the schedule fails
/// validation or needs more distinct times than there are events. The
/// latter happens when nothing can start at 0 and all starts differ: the
/// first event is pinned to time 0 and then one event is missing.
inline VarAssignment encode_solution(const Instance& inst, const Schedule& schedule, RelaxFlags relax = {},
                                     std::size_t spareEvents = 0) {
  auto rep = validate(inst, schedule, relax);
  if (!rep.feasible()) throw InfeasibleInput("schedule is not feasible: " + report_summary(rep, schedule, inst));
  const OoeModel shape = emit_ooe(inst, RelaxFlags{true, true, true}, spareEvents);
  const std::size_t T = shape.tasks.size(), N = shape.events, R = shape.techs;

  std::vector<TimeTick> start(T);
  std::vector<std::vector<bool>> crew(T, std::vector<bool>(R, false));
  for (std::size_t i = 0; i < T; ++i) {
    const auto& ot = shape.tasks[i];
    if (ot.task) {
      const auto* e = schedule.find(inst.tasks()[*ot.task].id);
      start[i] = e->start;
      for (const auto& tech : e->techs) crew[i][*inst.tech_index(tech)] = true;
    } else {
      start[i] = ot.fixedStart;
      crew[i][*ot.owner] = true;
    }
  }
  std::vector<TimeTick> times(start.begin(), start.end());
  times.push_back(0);
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  if (times.size() > N)
    throw InfeasibleInput("schedule needs " + std::to_string(times.size()) + " distinct event times, model has " +
                          std::to_string(N));
  while (N > 0 && times.size() < N) times.push_back(times.back());

  VarAssignment va;
  for (std::size_t e = 0; e < N; ++e) va.set(ooe::t(e), times[e]);
  TimeTick span = 0;
  for (std::size_t i = 0; i < T; ++i) {
    const auto d = shape.tasks[i].duration;
    if (shape.tasks[i].task) span = std::max(span, start[i] + d);
    bool prev = false;
    for (std::size_t e = 0; e < N; ++e) {
      const bool on = start[i] <= times[e] && times[e] < start[i] + d;
      va.set(ooe::z(i, e), on ? 1 : 0);
      va.set(ooe::a(i, e), on && !prev ? 1 : 0);
      for (std::size_t j = 0; j < R; ++j) va.set(ooe::y(i, j, e), on && crew[i][j] ? 1 : 0);
      prev = on;
    }
    for (std::size_t j = 0; j < R; ++j) va.set(ooe::x(i, j), crew[i][j] ? 1 : 0);
  }
  va.set("t_max", span);
  MassKg af = 0, lr = 0;
  for (std::size_t e = 0; e < N; ++e) {
    for (std::size_t i = 0; i < inst.num_tasks(); ++i)
      if (va.values[ooe::a(i, e)] == 1) {
        af += inst.signed_mass(i, Axis::AF);
        lr += inst.signed_mass(i, Axis::LR);
      }
    va.set(ooe::baf(e), af);
    va.set(ooe::blr(e), lr);
  }
  return va;
}

namespace detail {

inline const Rational& mip_tolerance() {
  static const Rational tol(1, 1000000);
  return tol;
}

inline bool near(const Rational& v, const Rational& target) {
  Rational diff = v - target;
  if (diff < 0) diff = -diff;
  return diff <= mip_tolerance();
}

}  // namespace detail

/// Names of the rows the assignment violates, evaluated exactly with a
/// tolerance of 1e-6. Binaries off {0,1} and negative non-free continuous
/// values show up as `binary_<var>` and `bound_<var>`.
inline std::vector<std::string> check_assignment(const OoeModel& model, const VarAssignment& assignment) {
  std::vector<Rational> value(model.variables.size());
  for (std::size_t v = 0; v < model.variables.size(); ++v) value[v] = assignment.at(model.variables[v].name);

  std::vector<std::string> bad;
  const auto& tol = detail::mip_tolerance();
  for (std::size_t v = 0; v < model.variables.size(); ++v) {
    const auto& var = model.variables[v];
    if (var.binary && !detail::near(value[v], 0) && !detail::near(value[v], 1)) bad.push_back("binary_" + var.name);
    if (!var.free && value[v] < -tol) bad.push_back("bound_" + var.name);
  }
  for (const auto& row : model.rows) {
    Rational lhs = 0;
    for (const auto& [v, c] : row.terms) lhs += value[v] * c;
    const Rational rhs = row.rhs;
    bool ok = row.sense == Sense::LessEq ? lhs <= rhs + tol : row.sense == Sense::GreaterEq ? lhs >= rhs - tol : detail::near(lhs, rhs);
    if (!ok) bad.push_back(row.name);
  }
  return bad;
}

/// Reads starts and crews back out of an assignment. Throws
/// InconsistentAssignment if a binary is fractional, a start is not an
/// integer tick, or the resulting schedule fails validation.
inline Schedule decode_solution(const Instance& inst, const OoeModel& model, const VarAssignment& assignment) {
  auto binary = [&](const std::string& name) {
    const auto& v = assignment.at(name);
    if (detail::near(v, 0)) return false;
    if (detail::near(v, 1)) return true;
    throw InconsistentAssignment("variable " + name + " is fractional");
  };
  Schedule s;
  for (std::size_t i = 0; i < model.tasks.size(); ++i) {
    const auto& ot = model.tasks[i];
    if (!ot.task) continue;
    std::optional<std::size_t> first;
    for (std::size_t e = 0; e < model.events && !first; ++e)
      if (binary(ooe::z(i, e))) first = e;
    if (!first) throw InconsistentAssignment("task " + ot.label + " is never processed");
    const auto& tv = assignment.at(ooe::t(*first));
    const Rational rounded = Rational(boost::multiprecision::numerator(tv + Rational(1, 2)) /
                                      boost::multiprecision::denominator(tv + Rational(1, 2)));
    if (!detail::near(tv, rounded) || rounded < 0) throw InconsistentAssignment("task " + ot.label + " starts off-tick");
    std::vector<std::string> techs;
    for (std::size_t j = 0; j < model.techs; ++j)
      if (binary(ooe::x(i, j))) techs.push_back(inst.technicians()[j].id);
    s.set(ot.label, static_cast<TimeTick>(boost::multiprecision::numerator(rounded)), std::move(techs));
  }
  auto rep = validate(inst, s, model.relax);
  if (!rep.feasible()) throw InconsistentAssignment("decoded schedule is infeasible: " + report_summary(rep, s, inst));
  return s;
}

/// Exact decimal to rational: "-1.25", "3", "1e-07", "2.5E+01", and the
/// "p/q" form that dump_assignment writes.
inline Rational parse_rational(std::string_view text) {
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    const Rational den = parse_rational(text.substr(slash + 1));
    if (den == 0) throw ParseError("zero denominator: '" + std::string(text) + "'");
    return parse_rational(text.substr(0, slash)) / den;
  }
  std::size_t k = 0;
  bool neg = false;
  if (k < text.size() && (text[k] == '+' || text[k] == '-')) neg = text[k++] == '-';
  boost::multiprecision::cpp_int digits = 0;
  long long scale = 0;
  bool any = false, dot = false;
  for (; k < text.size(); ++k) {
    const char c = text[k];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits = digits * 10 + (c - '0');
      any = true;
      if (dot) --scale;
    } else if (c == '.' && !dot) {
      dot = true;
    } else {
      break;
    }
  }
  if (!any) throw ParseError("not a number: '" + std::string(text) + "'");
  if (k < text.size()) {
    if (text[k] != 'e' && text[k] != 'E') throw ParseError("not a number: '" + std::string(text) + "'");
    try {
      std::size_t used = 0;
      const std::string rest(text.substr(k + 1));
      scale += std::stoll(rest, &used);
      if (used != rest.size()) throw ParseError("not a number: '" + std::string(text) + "'");
    } catch (const std::logic_error&) {
      throw ParseError("not a number: '" + std::string(text) + "'");
    }
  }
  if (scale > 400 || scale < -400) throw ParseError("exponent out of range: '" + std::string(text) + "'");
  boost::multiprecision::cpp_int p = 1;
  for (long long s = 0; s < (scale < 0 ? -scale : scale); ++s) p *= 10;
  Rational v = scale < 0 ? Rational(digits, p) : Rational(digits * p);
  return neg ? Rational(-v) : v;
}

/// Solution import: one `name value` pair per line; blank lines and lines
/// starting with '#' are skipped.
inline VarAssignment load_assignment(std::string_view text) {
  VarAssignment va;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string name, value;
    if (!(ls >> name) || name[0] == '#') continue;
    if (!(ls >> value)) throw ParseError("missing value for '" + name + "'");
    va.set(name, parse_rational(value));
  }
  return va;
}

inline std::string dump_assignment(const VarAssignment& va) {
  std::string out;
  for (const auto& [name, v] : va.values) out += name + " " + v.str() + "\n";
  return out;
}

/// CPLEX LP text: objective, named rows, bounds for free variables, binaries.
inline std::string write_lp(const OoeModel& m, const std::string& title = "ooe") {
  std::ostringstream out;
  out << "\\ Problem: " << title << "\n";
  for (std::size_t i = 0; i < m.tasks.size(); ++i) out << "\\ i" << i << " = " << m.tasks[i].label << "\n";
  out << "Minimize\n obj: " << m.objectiveVar << "\nSubject To\n";
  for (const auto& row : m.rows) {
    std::string line = " " + row.name + ":";
    auto emit = [&](const std::string& piece) {
      if (line.size() + piece.size() > 200) {
        out << line << "\n";
        line = "  ";
      }
      line += piece;
    };
    if (row.terms.empty()) emit(" 0 " + m.objectiveVar);
    for (const auto& [v, c] : row.terms) {
      std::string piece = c < 0 ? " - " : " + ";
      const auto mag = c < 0 ? -c : c;
      if (mag != 1) piece += std::to_string(mag) + " ";
      emit(piece + m.variables[v].name);
    }
    const char* op = row.sense == Sense::LessEq ? " <= " : row.sense == Sense::GreaterEq ? " >= " : " = ";
    emit(op + std::to_string(row.rhs));
    out << line << "\n";
  }
  out << "Bounds\n";
  for (const auto& v : m.variables)
    if (v.free) out << " " << v.name << " free\n";
  out << "Binaries\n";
  std::string line;
  for (const auto& v : m.variables) {
    if (!v.binary) continue;
    if (line.size() + v.name.size() > 200) {
      out << line << "\n";
      line.clear();
    }
    line += " " + v.name;
  }
  if (!line.empty()) out << line << "\n";
  out << "End\n";
  return out.str();
}

}  // namespace adsp
