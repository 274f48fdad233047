#pragma once

// Command-line front end. `run` is separate from main() so tests can drive it
// with string streams.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "lamatch.hpp"

namespace lamatch::cli {

enum ExitCode : int { ok = 0, invalid = 2, io_error = 3 };

namespace detail {

struct Failure {
  int code;
  std::string message;
};

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{io_error, "cannot read " + path};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw Failure{io_error, "cannot write " + path};
}

inline Instance load(const std::string& path) {
  ParsedInstance parsed = parse_instance(read_text(path));
  if (!parsed.ok()) {
    std::string msg;
    for (const Diagnostic& d : parsed.diagnostics) msg += (msg.empty() ? "" : "\n") + path + ": " + d.to_string();
    throw Failure{invalid, msg};
  }
  return std::move(parsed.instance);
}

inline nlohmann::json pairs_json(const Instance& inst, const Matching& m) {
  nlohmann::json arr = nlohmann::json::array();
  for (const Pair& pr : m.pairs()) {
    arr.push_back({{"applicant", inst.applicant(pr.applicant).name},
                   {"post", inst.post(pr.post).name},
                   {"rank", inst.rank_of(pr.applicant, pr.post).value_or(0)}});
  }
  return arr;
}

inline void print_pairs(std::ostream& out, const Instance& inst, const Matching& m) {
  for (const Pair& pr : m.pairs()) {
    out << inst.applicant(pr.applicant).name << ' ' << inst.post(pr.post).name << "  # rank "
        << inst.rank_of(pr.applicant, pr.post).value_or(0) << '\n';
  }
}

inline nlohmann::json trace_json(const Instance& inst, const CrmmTrace& trace) {
  NetworkLayout layout(inst);
  nlohmann::json arr = nlohmann::json::array();
  for (const IterationRecord& rec : trace.iterations) {
    nlohmann::json deleted = nlohmann::json::array();
    for (const Arc& a : rec.deleted_arcs) deleted.push_back({layout.label(a.tail), layout.label(a.head)});
    nlohmann::json pruned = nlohmann::json::array();
    for (int e : rec.pruned_edges) {
      const Edge& edge = inst.edges()[static_cast<std::size_t>(e)];
      pruned.push_back({inst.applicant(edge.applicant).name, inst.post(edge.post).name});
    }
    arr.push_back({{"rank", rec.rank},
                   {"flow", rec.flow_value},
                   {"deleted", deleted},
                   {"pruned", pruned},
                   {"rl_counts", rec.rl_counts}});
  }
  return arr;
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rank-maximal and popular matchings under laminar classifications"};
  app.name("lamatch");
  app.require_subcommand(1);

  std::string instance_path;
  std::string matching_path;
  std::string formula_path;
  std::string output_path;
  std::string signature_text;
  bool json = false;
  bool trace = false;
  bool popular = false;
  int cap = OracleOptions{}.cap;

  auto* crmm = app.add_subcommand("crmm", "rank-maximal feasible matching");
  crmm->add_option("instance", instance_path)->required();
  crmm->add_flag("--json", json);
  crmm->add_flag("--trace", trace, "print every iteration");

  auto* cpm = app.add_subcommand("cpm", "popular feasible matching (applicant quotas 1)");
  cpm->add_option("instance", instance_path)->required();
  cpm->add_flag("--json", json);

  auto* verify = app.add_subcommand("verify", "check a matching against an instance");
  verify->add_option("instance", instance_path)->required();
  verify->add_option("matching", matching_path)->required();
  verify->add_flag("--popular", popular, "also check popularity by brute force");
  verify->add_option("--cap", cap, "edge limit for the brute-force check");

  auto* oracle = app.add_subcommand("oracle", "brute-force answers for small instances");
  oracle->require_subcommand(1);
  auto* o_rmm = oracle->add_subcommand("rmm", "best signature");
  auto* o_pop = oracle->add_subcommand("popular", "existence of a popular matching");
  auto* o_max = oracle->add_subcommand("maxcard", "maximum feasible cardinality");
  auto* o_dec = oracle->add_subcommand("decide", "is some signature at least the target reachable");
  o_dec->add_option("signature", signature_text)->required();
  for (auto* sub : {o_rmm, o_pop, o_max, o_dec}) {
    sub->add_option("instance", instance_path)->required();
    sub->add_option("--cap", cap, "maximum number of edges");
  }

  auto* reduce_cmd = app.add_subcommand("reduce", "matching instance for a monotone 1-in-3 formula");
  reduce_cmd->add_option("formula", formula_path)->required();
  reduce_cmd->add_option("-o,--output", output_path)->required();

  auto* sat = app.add_subcommand("sat", "decide a monotone 1-in-3 formula by exhaustion");
  sat->add_option("formula", formula_path)->required();

  GeneratorParams gen_params;
  std::uint64_t seed = 0;
  auto* gen = app.add_subcommand("gen", "random laminar instance");
  gen->add_option("--seed", seed)->required();
  gen->add_option("--applicants", gen_params.applicants);
  gen->add_option("--posts", gen_params.posts);
  gen->add_option("--max-rank", gen_params.max_rank);
  gen->add_option("--tie-prob", gen_params.tie_probability);
  gen->add_option("--depth", gen_params.max_class_depth);
  gen->add_option("--max-edges", gen_params.max_edges);
  gen->add_option("--applicant-quota", gen_params.max_applicant_quota);
  gen->add_option("--post-quota", gen_params.max_post_quota);
  gen->add_flag("--many-to-one", gen_params.many_to_one);
  gen->add_option("-o,--output", output_path);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return invalid;
  }

  try {
    if (crmm->parsed()) {
      Instance inst = detail::load(instance_path);
      CrmmResult r = solve_crmm(inst);
      if (json) {
        nlohmann::json doc{{"pairs", detail::pairs_json(inst, r.matching)}, {"signature", r.signature.counts}};
        if (trace) doc["trace"] = detail::trace_json(inst, r.trace);
        out << doc.dump(2) << '\n';
      } else {
        if (trace) out << format_trace(inst, r.trace);
        detail::print_pairs(out, inst, r.matching);
        out << "signature = " << r.signature.to_string() << '\n';
      }
    } else if (cpm->parsed()) {
      Instance inst = detail::load(instance_path);
      PopularResult r = solve_cpm(inst);
      nlohmann::json unmatched = nlohmann::json::array();
      for (int a : r.unmatched) unmatched.push_back(inst.applicant(a).name);
      if (json) {
        nlohmann::json doc{{"status", r.exists ? "popular" : "none"}};
        if (r.exists) {
          doc["pairs"] = detail::pairs_json(inst, r.matching);
          doc["unmatched"] = unmatched;
          doc["rank1_count"] = r.rank_one_count;
          doc["signature"] = r.signature.counts;
        }
        out << doc.dump(2) << '\n';
      } else if (!r.exists) {
        out << "status: none\n";
      } else {
        out << "status: popular\n";
        detail::print_pairs(out, inst, r.matching);
        for (int a : r.unmatched) out << "unmatched: " << inst.applicant(a).name << '\n';
        out << "rank-1 count = " << r.rank_one_count << '\n';
        out << "signature = " << r.signature.to_string() << '\n';
      }
    } else if (verify->parsed()) {
      Instance inst = detail::load(instance_path);
      Matching m = parse_matching(inst, detail::read_text(matching_path));
      if (auto v = first_violation(inst, m)) {
        out << "infeasible: " << describe(inst, *v) << '\n';
        return ok;
      }
      out << "feasible\n";
      out << "signature = " << signature_of(inst, m).to_string() << '\n';
      if (popular) {
        auto beater = oracle_beating(inst, m, OracleOptions{cap});
        out << "popular: " << (beater ? "no" : "yes") << '\n';
        if (beater) {
          out << "more popular matching:\n";
          detail::print_pairs(out, inst, *beater);
        }
      }
    } else if (oracle->parsed()) {
      Instance inst = detail::load(instance_path);
      OracleOptions opts{cap};
      if (o_rmm->parsed()) {
        auto [sig, witness] = oracle_rmm_signature(inst, opts);
        detail::print_pairs(out, inst, witness);
        out << "signature = " << sig.to_string() << '\n';
      } else if (o_pop->parsed()) {
        PopularSearchResult r = oracle_popular(inst, opts);
        out << "popular matching: " << (r.exists ? "yes" : "none") << '\n';
        if (r.witness) detail::print_pairs(out, inst, *r.witness);
      } else if (o_max->parsed()) {
        out << "max cardinality = " << oracle_max_cardinality(inst, opts) << '\n';
      } else {
        auto target = parse_signature(signature_text);
        if (!target) throw detail::Failure{invalid, "malformed signature: " + signature_text};
        out << (oracle_decision(inst, *target, opts) ? "yes" : "no") << '\n';
      }
    } else if (reduce_cmd->parsed()) {
      MonotoneFormula f = parse_formula(detail::read_text(formula_path));
      Reduction r = reduce(f);
      detail::write_text(output_path, write_instance(r.instance, r.target));
      out << "applicants = " << r.instance.applicant_count() << ", posts = " << r.instance.post_count()
          << ", target = " << r.target.to_string() << '\n';
    } else if (sat->parsed()) {
      MonotoneFormula f = parse_formula(detail::read_text(formula_path));
      SatResult r = brute_force_1in3(f);
      if (!r.satisfiable) {
        out << "unsat\n";
      } else {
        out << "sat:";
        for (int v = 1; v <= f.variables; ++v) out << " x" << v << '=' << (r.assignment[static_cast<std::size_t>(v)] ? 1 : 0);
        out << '\n';
      }
    } else if (gen->parsed()) {
      std::string text = write_instance(random_instance(seed, gen_params));
      if (output_path.empty()) out << text;
      else detail::write_text(output_path, text);
    }
  } catch (const detail::Failure& f) {
    err << f.message << '\n';
    return f.code;
  } catch (const Error& e) {
    err << e.what() << '\n';
    return invalid;
  }
  return ok;
}

}  // namespace lamatch::cli
