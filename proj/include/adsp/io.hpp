#pragma once

#include <fstream>
#include <iomanip>
#include <iterator>
#include <sstream>
#include <string>
#include <string_view>

#include <json.hpp>

#include "adsp/anytime.hpp"
#include "adsp/model.hpp"
#include "adsp/profile.hpp"

namespace adsp {

using Json = nlohmann::ordered_json;

namespace detail {

inline std::optional<Zone> parse_zone(const Json& j) {
  if (j.is_null()) return std::nullopt;
  const auto s = j.get<std::string>();
  if (s == "Aft") return Zone::Aft;
  if (s == "Fwd") return Zone::Fwd;
  if (s == "Left") return Zone::Left;
  if (s == "Right") return Zone::Right;
  throw ParseError("unknown zone '" + s + "'");
}

inline const Json& field(const Json& obj, const char* key, std::string_view where) {
  if (!obj.is_object()) throw ParseError(std::string(where) + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(std::string(where) + ": missing field '" + key + "'");
  return *it;
}

template <typename T>
T get_or(const Json& obj, const char* key, T fallback) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return fallback;
  return it->get<T>();
}

}  // namespace detail

/// Parses an instance document. Throws ParseError on malformed JSON or a
/// missing/mistyped field and ValidationError on broken cross-references.
inline Instance load_instance(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  try {
    using detail::field;
    std::vector<Location> locations;
    for (const auto& l : field(doc, "locations", "instance")) {
      Location loc;
      loc.id = field(l, "id", "location").get<std::string>();
      if (auto it = l.find("capacity"); it != l.end() && !it->is_null()) loc.capacity = it->get<int>();
      if (auto it = l.find("zone"); it != l.end()) loc.zone = detail::parse_zone(*it);
      locations.push_back(std::move(loc));
    }
    std::vector<Technician> techs;
    for (const auto& t : field(doc, "technicians", "instance")) {
      Technician tech;
      tech.id = field(t, "id", "technician").get<std::string>();
      tech.skills = detail::get_or<std::vector<std::string>>(t, "skills", {});
      if (auto it = t.find("unavailable"); it != t.end())
        for (const auto& w : *it) {
          if (!w.is_array() || w.size() != 2) throw ParseError("unavailability window must be [start, end]");
          tech.unavailable.push_back(Window{w[0].get<TimeTick>(), w[1].get<TimeTick>()});
        }
      techs.push_back(std::move(tech));
    }
    std::vector<Task> tasks;
    for (const auto& t : field(doc, "tasks", "instance")) {
      Task task;
      task.id = field(t, "id", "task").get<std::string>();
      task.duration = field(t, "duration", "task").get<TimeTick>();
      task.crew = field(t, "crew", "task").get<int>();
      if (auto it = t.find("location"); it != t.end() && !it->is_null()) task.location = it->get<std::string>();
      task.mass = detail::get_or<MassKg>(t, "mass", 0);
      task.precedences = detail::get_or<std::vector<std::string>>(t, "precedences", {});
      if (auto it = t.find("requirements"); it != t.end())
        for (const auto& r : *it)
          task.requirements.push_back(
              Requirement{field(r, "skill", "requirement").get<std::string>(), field(r, "count", "requirement").get<int>()});
      tasks.push_back(std::move(task));
    }
    return Instance(detail::get_or<std::string>(doc, "name", ""), field(doc, "balanceAF", "instance").get<MassKg>(),
                    field(doc, "balanceLR", "instance").get<MassKg>(), std::move(locations), std::move(techs),
                    std::move(tasks));
  } catch (const Json::exception& e) {
    throw ParseError(std::string("bad instance document: ") + e.what());
  }
}

inline Json to_json(const Instance& inst) {
  Json doc;
  doc["name"] = inst.name();
  doc["balanceAF"] = inst.balance_af();
  doc["balanceLR"] = inst.balance_lr();
  doc["locations"] = Json::array();
  for (const auto& l : inst.locations()) {
    Json j;
    j["id"] = l.id;
    j["capacity"] = l.capacity ? Json(*l.capacity) : Json(nullptr);
    j["zone"] = l.zone ? Json(to_string(*l.zone)) : Json(nullptr);
    doc["locations"].push_back(std::move(j));
  }
  doc["technicians"] = Json::array();
  for (const auto& t : inst.technicians()) {
    Json j;
    j["id"] = t.id;
    j["skills"] = t.skills;
    j["unavailable"] = Json::array();
    for (const auto& w : t.unavailable) j["unavailable"].push_back({w.start, w.end});
    doc["technicians"].push_back(std::move(j));
  }
  doc["tasks"] = Json::array();
  for (const auto& t : inst.tasks()) {
    Json j;
    j["id"] = t.id;
    j["duration"] = t.duration;
    j["location"] = t.location ? Json(*t.location) : Json(nullptr);
    j["crew"] = t.crew;
    j["mass"] = t.mass;
    j["precedences"] = t.precedences;
    j["requirements"] = Json::array();
    for (const auto& r : t.requirements) j["requirements"].push_back({{"skill", r.skill}, {"count", r.count}});
    doc["tasks"].push_back(std::move(j));
  }
  return doc;
}

inline std::string dump_instance(const Instance& inst) { return to_json(inst).dump(2) + "\n"; }

inline Schedule load_schedule(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  try {
    Schedule s;
    for (const auto& e : detail::field(doc, "entries", "schedule"))
      s.set(detail::field(e, "task", "entry").get<std::string>(), detail::field(e, "start", "entry").get<TimeTick>(),
            detail::get_or<std::vector<std::string>>(e, "techs", {}));
    return s;
  } catch (const Json::exception& e) {
    throw ParseError(std::string("bad schedule document: ") + e.what());
  }
}

inline Json to_json(const Schedule& s) {
  Json doc;
  doc["entries"] = Json::array();
  for (const auto& [task, e] : s.entries()) doc["entries"].push_back({{"task", task}, {"start", e.start}, {"techs", e.techs}});
  return doc;
}

inline std::string dump_schedule(const Schedule& s) { return to_json(s).dump(2) + "\n"; }

/// `elapsed_seconds,makespan` with a header line.
inline std::string dump_log_csv(const AnytimeLog& log) {
  std::ostringstream out;
  out << "elapsed_seconds,makespan\n" << std::fixed << std::setprecision(9);
  for (const auto& p : log.points) out << p.seconds << ',' << p.objective << '\n';
  return out.str();
}

inline AnytimeLog load_log_csv(std::string_view text) {
  AnytimeLog log;
  std::istringstream in{std::string(text)};
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line.find_first_not_of("0123456789.-+eE, ") != std::string::npos) continue;  // header
    }
    auto comma = line.find(',');
    if (comma == std::string::npos) throw ParseError("log line without comma: " + line);
    try {
      log.points.push_back(AnytimePoint{std::stod(line.substr(0, comma)), std::stoll(line.substr(comma + 1))});
    } catch (const std::exception&) {
      throw ParseError("bad log line: " + line);
    }
  }
  return log;
}

/// Two-column `time,value` CSV of a profile's change points.
template <typename V>
std::string dump_profile_csv(const StepProfile<V>& p) {
  std::ostringstream out;
  out << "time,value\n";
  for (const auto& [t, v] : p.breakpoints()) out << t << ',' << v << '\n';
  return out.str();
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot write '" + path + "'");
  out << content;
}

}  // namespace adsp
