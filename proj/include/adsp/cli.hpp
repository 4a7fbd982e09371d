#pragma once

#include <algorithm>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "adsp/exact.hpp"
#include "adsp/io.hpp"
#include "adsp/metrics.hpp"
#include "adsp/mip.hpp"
#include "adsp/model.hpp"
#include "adsp/solve.hpp"
#include "adsp/validate.hpp"

namespace adsp {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int infeasible = 1;
inline constexpr int usage = 2;
inline constexpr int io = 3;
inline constexpr int limit = 4;
}  // namespace exit_code

/// Comma-separated subset of requirements, capacity, balance (or r, c, b; "all", "none").
inline RelaxFlags parse_relax(const std::string& text) {
  RelaxFlags f;
  std::stringstream in(text);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    tok.erase(std::remove_if(tok.begin(), tok.end(), [](unsigned char c) { return std::isspace(c); }), tok.end());
    if (tok.empty() || tok == "none") continue;
    if (tok == "requirements" || tok == "r")
      f.dropRequirements = true;
    else if (tok == "capacity" || tok == "c")
      f.dropCapacity = true;
    else if (tok == "balance" || tok == "b")
      f.dropBalance = true;
    else if (tok == "all")
      f = RelaxFlags{true, true, true};
    else
      throw CLI::ValidationError("--relax", "unknown relaxation '" + tok + "'");
  }
  return f;
}

inline std::string relax_name(RelaxFlags f) {
  if (f == RelaxFlags{}) return "all-constraints";
  std::string s;
  auto add = [&](bool on, const char* n) {
    if (!on) return;
    if (!s.empty()) s += "+";
    s += n;
  };
  add(f.dropRequirements, "no-requirements");
  add(f.dropCapacity, "no-capacity");
  add(f.dropBalance, "no-balance");
  return s;
}

/// The five variants of the experimental protocol: everything on, then each
/// family dropped alone, then all three dropped.
inline std::vector<RelaxFlags> bench_variants() {
  return {RelaxFlags{}, RelaxFlags{true, false, false}, RelaxFlags{false, true, false}, RelaxFlags{false, false, true},
          RelaxFlags{true, true, true}};
}

struct BenchConfig {
  std::vector<std::string> instances;
  double timeLimit = 3600.0;
  std::vector<std::uint64_t> seeds{0};
  std::vector<RelaxFlags> variants = bench_variants();
  std::string outputDir = "bench-out";
  std::map<std::string, std::int64_t> bestKnown;
  std::optional<std::uint64_t> maxIterations;
  int workers = 1;
};

inline BenchConfig load_bench_config(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("malformed bench config: ") + e.what());
  }
  try {
    BenchConfig c;
    c.instances = doc.at("instances").get<std::vector<std::string>>();
    if (auto it = doc.find("timeLimit"); it != doc.end()) c.timeLimit = it->get<double>();
    if (auto it = doc.find("seeds"); it != doc.end()) c.seeds = it->get<std::vector<std::uint64_t>>();
    if (auto it = doc.find("variants"); it != doc.end()) {
      c.variants.clear();
      for (const auto& v : *it) c.variants.push_back(parse_relax(v.get<std::string>()));
    }
    if (auto it = doc.find("outputDir"); it != doc.end()) c.outputDir = it->get<std::string>();
    if (auto it = doc.find("bestKnown"); it != doc.end()) c.bestKnown = it->get<std::map<std::string, std::int64_t>>();
    if (auto it = doc.find("maxIterations"); it != doc.end() && !it->is_null())
      c.maxIterations = it->get<std::uint64_t>();
    if (auto it = doc.find("workers"); it != doc.end()) c.workers = it->get<int>();
    return c;
  } catch (const Json::exception& e) {
    throw ParseError(std::string("bad bench config: ") + e.what());
  } catch (const CLI::ValidationError& e) {
    throw ParseError(std::string("bad bench config: ") + e.what());
  }
}

namespace detail {

inline Instance load_instance_file(const std::string& path) { return load_instance(read_file(path)); }

inline std::string stem(const std::string& path) { return std::filesystem::path(path).stem().string(); }

inline Json exact_to_json(const ExactResult& r) {
  Json j;
  j["optimum"] = r.optimum ? Json(*r.optimum) : Json(nullptr);
  j["proven"] = r.proven;
  j["exhausted"] = r.exhausted;
  j["nodes"] = r.nodes;
  j["schedule"] = r.best ? to_json(*r.best) : Json(nullptr);
  return j;
}

inline std::string gantt_csv(const Instance& inst, const Schedule& s) {
  std::vector<std::tuple<std::string, TimeTick, std::string, TimeTick>> rows;
  for (const auto& [task, e] : s.entries()) {
    auto i = inst.task_index(task);
    if (!i) throw UnknownReference("schedule references unknown task '" + task + "'");
    for (const auto& tech : e.techs) rows.emplace_back(tech, e.start, task, e.start + inst.tasks()[*i].duration);
  }
  std::sort(rows.begin(), rows.end());
  std::string out = "tech,task,start,end\n";
  for (const auto& [tech, start, task, end] : rows)
    out += tech + "," + task + "," + std::to_string(start) + "," + std::to_string(end) + "\n";
  return out;
}

struct BenchRow {
  std::string instance;
  std::string variant;
  std::uint64_t seed = 0;
  std::optional<std::int64_t> objective;
  double primalIntegral = 0.0;
  std::optional<double> firstSolutionTime;
  std::optional<double> proofTime;  // when the incumbent met the trivial lower bound
};

}  // namespace detail

/// Runs one command line (without the program name). Output goes to `out`,
/// diagnostics to `err`.
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Aircraft disassembly scheduling toolkit"};
  app.require_subcommand(1);
  std::string relax_text;
  auto add_relax = [&](CLI::App* sub) {
    sub->add_option("--relax", relax_text, "Dropped constraint families: requirements,capacity,balance");
  };

  std::string inst_path, sol_path, log_path, out_path, config_path, values_path, dir = ".";
  double time_limit = 60.0, horizon_T = 3600.0;
  std::uint64_t seed = 0, node_limit = std::numeric_limits<std::uint64_t>::max(), max_iter = 0;
  std::int64_t best = 0, upper = -1;
  std::size_t count = 0;
  int workers = 1;

  auto* v = app.add_subcommand("validate", "Check a schedule against an instance");
  v->add_option("instance", inst_path)->required();
  v->add_option("solution", sol_path)->required();
  add_relax(v);

  auto* so = app.add_subcommand("solve", "Large neighbourhood search");
  so->add_option("instance", inst_path)->required();
  so->add_option("--time-limit", time_limit, "Seconds")->check(CLI::PositiveNumber);
  so->add_option("--seed", seed);
  so->add_option("--workers", workers)->check(CLI::PositiveNumber);
  so->add_option("--max-iterations", max_iter, "Iteration cap (0 = none)");
  so->add_option("-o,--output", out_path, "Schedule JSON (default <instance>-sol.json)");
  so->add_option("--log", log_path, "Anytime CSV (default <instance>-log.csv)");
  add_relax(so);

  auto* ex = app.add_subcommand("exact", "Branch and bound for small instances");
  ex->add_option("instance", inst_path)->required();
  ex->add_option("--node-limit", node_limit);
  ex->add_option("--upper-bound", upper);
  ex->add_option("-o,--output", out_path, "Result JSON (default <instance>-exact.json)");
  add_relax(ex);

  auto* em = app.add_subcommand("emit-mip", "Write the event-based MIP as an LP file");
  em->add_option("instance", inst_path)->required();
  em->add_option("-o,--output", out_path, "LP file (default <instance>.lp)");
  add_relax(em);

  auto* cl = app.add_subcommand("check-lp", "Encode a schedule into MIP variables and check every row");
  cl->add_option("instance", inst_path)->required();
  cl->add_option("solution", sol_path)->required();
  cl->add_option("--values", values_path, "Also write the encoded assignment");
  add_relax(cl);

  auto* dm = app.add_subcommand("decode-mip", "Turn MIP variable values back into a schedule");
  dm->add_option("instance", inst_path)->required();
  dm->add_option("values", values_path, "Lines of 'name value'")->required();
  dm->add_option("-o,--output", out_path, "Schedule JSON (default <instance>-mip-sol.json)");
  add_relax(dm);

  auto* ss = app.add_subcommand("subsample", "Keep n tasks of an instance");
  ss->add_option("instance", inst_path)->required();
  ss->add_option("-n", count)->required();
  ss->add_option("--seed", seed);
  ss->add_option("-o,--output", out_path, "Instance JSON (default: stdout)");

  auto* me = app.add_subcommand("metrics", "Primal integral of an anytime log");
  me->add_option("log", log_path)->required();
  me->add_option("--best", best)->required();
  me->add_option("-T", horizon_T, "Seconds");
  me->add_option("--json", out_path, "Write the report here");

  auto* ga = app.add_subcommand("export-gantt", "Technician, occupancy and balance traces as CSV");
  ga->add_option("instance", inst_path)->required();
  ga->add_option("solution", sol_path)->required();
  ga->add_option("--dir", dir);

  auto* be = app.add_subcommand("bench", "Run the solver over instances, seeds and relaxations");
  be->add_option("config", config_path)->required();
  std::optional<double> be_time;
  std::optional<std::string> be_dir;
  std::vector<std::uint64_t> be_seeds;
  std::optional<std::uint64_t> be_iter;
  be->add_option("--time-limit", be_time);
  be->add_option("--output-dir", be_dir);
  be->add_option("--seeds", be_seeds);
  be->add_option("--max-iterations", be_iter);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_code::ok;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    if (app.get_subcommands().empty()) err << app.help();
    return exit_code::usage;
  }

  try {
    RelaxFlags relax = parse_relax(relax_text);

    if (v->parsed()) {
      auto inst = detail::load_instance_file(inst_path);
      auto sched = load_schedule(read_file(sol_path));
      auto rep = validate(inst, sched, relax);
      out << report_jsonl(rep) << report_summary(rep, sched, inst) << "\n";
      return rep.feasible() ? exit_code::ok : exit_code::infeasible;
    }

    if (so->parsed()) {
      auto inst = detail::load_instance_file(inst_path);
      SolveParams p;
      p.timeLimitSeconds = time_limit;
      p.seed = seed;
      p.relax = relax;
      p.workers = workers;
      if (max_iter > 0) p.maxIterations = max_iter;
      auto res = lns_solve(inst, p);
      const auto sol = out_path.empty() ? detail::stem(inst_path) + "-sol.json" : out_path;
      const auto logf = log_path.empty() ? detail::stem(inst_path) + "-log.csv" : log_path;
      write_file(sol, dump_schedule(res.best));
      write_file(logf, dump_log_csv(res.log));
      out << "makespan " << makespan(res.best, inst) << " (" << res.iterations << " iterations)\n"
          << "wrote " << sol << " and " << logf << "\n";
      return exit_code::ok;
    }

    if (ex->parsed()) {
      auto inst = detail::load_instance_file(inst_path);
      std::optional<TimeTick> ub;
      if (upper >= 0) ub = upper;
      auto res = exact_solve(inst, ub, relax, node_limit);
      const auto file = out_path.empty() ? detail::stem(inst_path) + "-exact.json" : out_path;
      write_file(file, detail::exact_to_json(res).dump(2) + "\n");
      if (res.optimum)
        out << (res.proven ? "optimum " : "best ") << *res.optimum << (res.proven ? " (proven)" : " (not proven)");
      else
        out << "no schedule found";
      out << ", " << res.nodes << " nodes\n";
      if (!res.exhausted) return exit_code::limit;
      return res.best ? exit_code::ok : exit_code::infeasible;
    }

    if (em->parsed()) {
      auto inst = detail::load_instance_file(inst_path);
      if (inst.num_tasks() > 400)
        err << "warning: " << inst.num_tasks()
            << " tasks; the model has a number of variables quadratic in the task count and may not fit in memory\n";
      auto m = emit_ooe(inst, relax);
      const auto file = out_path.empty() ? detail::stem(inst_path) + ".lp" : out_path;
      write_file(file, write_lp(m, inst.name()));
      out << m.variables.size() << " variables, " << m.rows.size() << " rows; wrote " << file << "\n";
      return exit_code::ok;
    }

    if (cl->parsed()) {
      auto inst = detail::load_instance_file(inst_path);
      auto sched = load_schedule(read_file(sol_path));
      VarAssignment va;
      try {
        va = encode_solution(inst, sched, relax);
      } catch (const InfeasibleInput& e) {
        err << e.what() << "\n";
        return exit_code::infeasible;
      }
      auto bad = check_assignment(emit_ooe(inst, relax), va);
      if (!values_path.empty()) write_file(values_path, dump_assignment(va));
      for (const auto& r : bad) out << r << "\n";
      out << bad.size() << " violated rows\n";
      return bad.empty() ? exit_code::ok : exit_code::infeasible;
    }

    if (dm->parsed()) {
      auto inst = detail::load_instance_file(inst_path);
      auto m = emit_ooe(inst, relax);
      auto va = load_assignment(read_file(values_path));
      auto bad = check_assignment(m, va);
      for (const auto& r : bad) err << "violated: " << r << "\n";
      Schedule s;
      try {
        s = decode_solution(inst, m, va);
      } catch (const InconsistentAssignment& e) {
        err << e.what() << "\n";
        return exit_code::infeasible;
      }
      const auto file = out_path.empty() ? detail::stem(inst_path) + "-mip-sol.json" : out_path;
      write_file(file, dump_schedule(s));
      out << "makespan " << makespan(s, inst) << "; wrote " << file << "\n";
      return bad.empty() ? exit_code::ok : exit_code::infeasible;
    }

    if (ss->parsed()) {
      auto inst = detail::load_instance_file(inst_path);
      auto sub = subsample(inst, count, seed);
      if (out_path.empty())
        out << dump_instance(sub);
      else
        write_file(out_path, dump_instance(sub));
      return exit_code::ok;
    }

    if (me->parsed()) {
      auto log = load_log_csv(read_file(log_path));
      auto report = metrics_report(log, best, horizon_T);
      out << "P=" << format3(primal_integral(log, best, horizon_T)) << "\n";
      if (out_path.empty())
        out << report.dump() << "\n";
      else
        write_file(out_path, report.dump(2) + "\n");
      return exit_code::ok;
    }

    if (ga->parsed()) {
      auto inst = detail::load_instance_file(inst_path);
      auto sched = load_schedule(read_file(sol_path));
      std::filesystem::create_directories(dir);
      const std::filesystem::path base(dir);
      write_file((base / "gantt.csv").string(), detail::gantt_csv(inst, sched));
      for (const auto& l : inst.locations())
        write_file((base / ("occupancy_" + l.id + ".csv")).string(), dump_profile_csv(occupancy_profile(inst, sched, l.id)));
      write_file((base / "balance_af.csv").string(), dump_profile_csv(balance_profile(inst, sched, Axis::AF)));
      write_file((base / "balance_lr.csv").string(), dump_profile_csv(balance_profile(inst, sched, Axis::LR)));
      out << "wrote gantt.csv, " << inst.locations().size() << " occupancy traces and 2 balance traces to " << dir << "\n";
      return exit_code::ok;
    }

    if (be->parsed()) {
      auto cfg = load_bench_config(read_file(config_path));
      if (be_time) cfg.timeLimit = *be_time;
      if (be_dir) cfg.outputDir = *be_dir;
      if (!be_seeds.empty()) cfg.seeds = be_seeds;
      if (be_iter) cfg.maxIterations = *be_iter;
      if (cfg.instances.empty()) throw CLI::ValidationError("bench", "config lists no instances");
      if (cfg.timeLimit <= 0) throw CLI::ValidationError("bench", "time limit must be positive");
      std::filesystem::create_directories(cfg.outputDir);

      std::vector<detail::BenchRow> rows;
      for (const auto& path : cfg.instances) {
        auto inst = detail::load_instance_file(path);
        const auto name = inst.name().empty() ? detail::stem(path) : inst.name();
        const TimeTick lower = makespan_lower_bound(inst);
        for (auto variant : cfg.variants)
          for (auto s : cfg.seeds) {
            SolveParams p;
            p.timeLimitSeconds = cfg.timeLimit;
            p.seed = s;
            p.relax = variant;
            p.workers = cfg.workers;
            p.maxIterations = cfg.maxIterations;
            detail::BenchRow row{name, relax_name(variant), s, std::nullopt, 0.0, std::nullopt, std::nullopt};
            AnytimeLog log;
            try {
              auto res = lns_solve(inst, p);
              log = res.log;
              row.objective = makespan(res.best, inst);
              row.firstSolutionTime = log.points.front().seconds;
              if (*row.objective <= lower) row.proofTime = log.points.back().seconds;
            } catch (const NoSolutionFound&) {
            }
            std::int64_t ref = row.objective.value_or(0);
            if (auto it = cfg.bestKnown.find(name); it != cfg.bestKnown.end() && variant == RelaxFlags{}) ref = it->second;
            row.primalIntegral = primal_integral(log, ref, cfg.timeLimit);
            write_file((std::filesystem::path(cfg.outputDir) /
                        (name + "_" + row.variant + "_seed" + std::to_string(s) + ".csv"))
                           .string(),
                       dump_log_csv(log));
            rows.push_back(row);
          }
      }

      std::ostringstream csv, md;
      csv << "instance,variant,seed,obj,P,first_solution_time,t_star\n";
      auto opt = [](const auto& o) { return o ? (std::ostringstream() << *o).str() : std::string("-"); };
      for (const auto& r : rows)
        csv << r.instance << "," << r.variant << "," << r.seed << "," << opt(r.objective) << ","
            << format3(r.primalIntegral) << "," << opt(r.firstSolutionTime) << "," << opt(r.proofTime) << "\n";
      for (auto variant : cfg.variants) {
        md << "### " << relax_name(variant) << "\n\n| Name | obj* | P(tmt) | obj | t* |\n|---|---|---|---|---|\n";
        for (const auto& r : rows) {
          if (r.variant != relax_name(variant)) continue;
          auto it = cfg.bestKnown.find(r.instance);
          const std::string star = it != cfg.bestKnown.end() && variant == RelaxFlags{} ? std::to_string(it->second) : "-";
          md << "| " << r.instance << (cfg.seeds.size() > 1 ? " (seed " + std::to_string(r.seed) + ")" : "") << " | "
             << star << " | " << format3(r.primalIntegral) << " | " << opt(r.objective) << " | "
             << (r.proofTime ? format3(*r.proofTime) : "-") << " |\n";
        }
        md << "\n";
      }
      write_file((std::filesystem::path(cfg.outputDir) / "results.csv").string(), csv.str());
      write_file((std::filesystem::path(cfg.outputDir) / "results.md").string(), md.str());
      out << md.str();
      return exit_code::ok;
    }
  } catch (const CLI::ValidationError& e) {
    err << e.what() << "\n";
    return exit_code::usage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return exit_code::io;
  } catch (const ValidationError& e) {
    err << "invalid instance: " << e.what() << "\n";
    return exit_code::io;
  } catch (const UnknownReference& e) {
    err << "unknown reference: " << e.what() << "\n";
    return exit_code::io;
  } catch (const CountOutOfRange& e) {
    err << e.what() << "\n";
    return exit_code::usage;
  } catch (const std::ios_base::failure& e) {
    err << "I/O error: " << e.what() << "\n";
    return exit_code::io;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "I/O error: " << e.what() << "\n";
    return exit_code::io;
  } catch (const NoSolutionFound& e) {
    err << e.what() << "\n";
    return exit_code::limit;
  } catch (const ScaleExceeded& e) {
    err << e.what() << "\n";
    return exit_code::limit;
  } catch (const ConstructionStalled& e) {
    err << e.what() << "\n";
    return exit_code::limit;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return exit_code::limit;
  }
  return exit_code::usage;
}

}  // namespace adsp
