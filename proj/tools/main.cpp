#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "erkit/analysis.hpp"
#include "erkit/chase.hpp"
#include "erkit/hom.hpp"
#include "erkit/model.hpp"
#include "erkit/multiset.hpp"
#include "erkit/rewrite.hpp"
#include "erkit/surgery.hpp"
#include "erkit/textio.hpp"
#include "json.hpp"

namespace {

using namespace erkit;
using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitSoundness = 3;

struct Config {
  std::string rules_path, facts_path, query_path;
  int depth = 4;
  int k_target = 4;
  int generations = 8;
  std::size_t max_atoms = 100000;
  std::size_t max_cqs = 5000;
  std::string emit = "text";
  unsigned seed = 0;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

RuleSet load_rules(const Config& c) {
  if (c.rules_path.empty()) throw Error("this command needs --rules");
  return parse_rules(slurp(c.rules_path), c.rules_path);
}

Instance load_facts(const Config& c) {
  if (c.facts_path.empty()) return Instance{};
  return parse_facts(slurp(c.facts_path), c.facts_path);
}

CQ load_query(const Config& c) {
  if (c.query_path.empty()) throw Error("this command needs --query");
  return parse_query(slurp(c.query_path), c.query_path);
}

RewriteBudget budget_of(const Config& c) {
  return RewriteBudget{c.generations, c.max_cqs};
}

void print_instance(const Instance& db, const Config& c) {
  if (c.emit == "dot")
    std::cout << emit_dot(db);
  else
    std::cout << to_text(db);
}

ordered_json rules_json(const RuleSet& rules) {
  ordered_json out = ordered_json::array();
  for (const auto& r : rules.rules()) out.push_back({{"id", r.id()}, {"rule", to_text(r)}});
  return out;
}

int cmd_parse(const Config& c) {
  if (!c.rules_path.empty()) std::cout << to_text(load_rules(c));
  if (!c.facts_path.empty()) std::cout << to_text(load_facts(c));
  if (!c.query_path.empty()) std::cout << to_text(load_query(c)) << "\n";
  if (c.rules_path.empty() && c.facts_path.empty() && c.query_path.empty())
    throw Error("parse needs at least one of --rules, --facts, --query");
  return kExitOk;
}

int cmd_chase(const Config& c) {
  ChaseTrace trace = chase(load_facts(c), load_rules(c), c.depth, c.max_atoms);
  if (c.emit == "json")
    std::cout << emit_json(trace);
  else
    print_instance(trace.result(), c);
  return trace.status() == ChaseStatus::BudgetExceeded ? kExitInconclusive : kExitOk;
}

int cmd_rewrite(const Config& c) {
  RewritingRun run = ucq_rewrite(load_query(c), load_rules(c), budget_of(c));
  const bool converged = run.status == RewriteStatus::Converged;
  if (c.emit == "json") {
    ordered_json gens = ordered_json::array();
    for (const auto& g : run.generations) gens.push_back(g.disjuncts().size());
    ordered_json disjuncts = ordered_json::array();
    for (const auto& d : run.result().disjuncts()) disjuncts.push_back(to_text(d));
    std::cout << ordered_json{{"status", converged ? "Converged" : "BudgetExceeded"},
                              {"generations", gens},
                              {"disjuncts", disjuncts}}
                     .dump(2)
              << "\n";
  } else {
    std::cout << to_text(run.result());
    std::cout << "% status: " << (converged ? "Converged" : "BudgetExceeded") << "\n";
    std::cout << "% generations:";
    for (const auto& g : run.generations) std::cout << " " << g.disjuncts().size();
    std::cout << "\n";
  }
  return converged ? kExitOk : kExitInconclusive;
}

ordered_json report_json(const SurgeryReport& report) {
  ordered_json obligations = ordered_json::array();
  for (const auto& o : report.obligations)
    obligations.push_back({{"name", o.name}, {"holds", o.holds}, {"detail", o.detail}});
  ordered_json fresh = ordered_json::array();
  for (const auto& p : report.fresh_predicates) fresh.push_back(p);
  return ordered_json{{"fresh_predicates", fresh}, {"obligations", obligations}};
}

int cmd_surgery(const std::string& kind, const Config& c) {
  if (kind == "encode-db") {
    std::cout << to_text(encode_db(load_facts(c))) << "\n";
    return kExitOk;
  }
  if (kind == "reify") {
    if (!c.facts_path.empty() && c.rules_path.empty()) {
      std::cout << to_text(reify(load_facts(c)));
      return kExitOk;
    }
    std::cout << to_text(reify(load_rules(c)));
    return kExitOk;
  }
  if (kind == "streamline") {
    std::cout << to_text(streamline(load_rules(c)));
    return kExitOk;
  }
  if (kind == "body-rewrite") {
    try {
      std::cout << to_text(body_rewrite(load_rules(c), budget_of(c)));
      return kExitOk;
    } catch (const RewritingBudgetExceeded& e) {
      std::cerr << e.what() << "\n";
      return kExitInconclusive;
    }
  }
  if (kind == "regalize") {
    RegalizeOptions opts;
    opts.budget = budget_of(c);
    opts.max_atoms = c.max_atoms;
    opts.obligation_depth = std::min(c.depth, 3);
    try {
      auto [regal, report] = regalize(load_facts(c), load_rules(c), opts);
      if (c.emit == "json")
        std::cout << ordered_json{{"rules", rules_json(regal)}, {"report", report_json(report)}}
                         .dump(2)
                  << "\n";
      else {
        std::cout << to_text(regal);
        for (const auto& o : report.obligations)
          std::cout << "% " << o.name << ": " << (o.holds ? "holds" : "FAILS") << " (" << o.detail
                    << ")\n";
      }
      return report.all_hold() ? kExitOk : kExitSoundness;
    } catch (const RewritingBudgetExceeded& e) {
      std::cerr << e.what() << "\n";
      return kExitInconclusive;
    }
  }
  throw Error("unknown surgery: " + kind);
}

int cmd_check(const std::string& kind, const Config& c) {
  if (kind == "fe") {
    std::cout << (check_forward_existential(load_rules(c)) ? "true" : "false") << "\n";
    return kExitOk;
  }
  if (kind == "pu") {
    std::cout << (check_predicate_unique(load_rules(c)) ? "true" : "false") << "\n";
    return kExitOk;
  }
  if (kind == "quick") {
    QuickCheck result =
        check_quick_empirical(load_rules(c), {load_facts(c)}, std::max(c.depth, 1), c.max_atoms);
    if (result.quick)
      std::cout << "true\n";
    else
      std::cout << "false % counterexample: " << to_text(*result.counterexample) << "\n";
    return kExitOk;
  }
  if (kind == "bdd") {
    auto k = least_deciding_depth(load_query(c), load_rules(c), {load_facts(c)}, c.depth,
                                  c.max_atoms);
    if (k) {
      std::cout << *k << "\n";
      return kExitOk;
    }
    std::cout << "none\n";
    return kExitInconclusive;
  }
  throw Error("unknown check: " + kind);
}

int cmd_analyze(const std::string& kind, const Config& c) {
  if (kind == "tournament") {
    Instance db = load_facts(c);
    auto found = find_tournament(db, c.k_target);
    if (found) {
      for (std::size_t i = 0; i < found->size(); ++i)
        std::cout << (i ? " " : "") << (*found)[i].name;
      std::cout << "\n";
    } else {
      std::vector<Term> best = max_tournament(db, c.k_target);
      std::cout << "none % largest: " << best.size() << "\n";
    }
    return kExitOk;
  }
  if (kind == "loop") {
    auto loop = has_loop(load_facts(c));
    std::cout << (loop ? loop->name : "none") << "\n";
    return kExitOk;
  }
  if (kind == "valley") {
    std::cout << (is_valley_query(load_query(c)) ? "true" : "false") << "\n";
    return kExitOk;
  }
  if (kind == "witnesses") {
    Instance prefix = load_facts(c);
    RewritingRun run = ucq_rewrite(load_query(c), load_rules(c), budget_of(c));
    if (run.status != RewriteStatus::Converged) {
      std::cerr << "the query rewriting did not converge\n";
      return kExitInconclusive;
    }
    UCQ q_inj = injectivize(run.result());
    for (const auto& s : prefix.adom())
      for (const auto& t : prefix.adom()) {
        auto ws = find_witnesses(s, t, q_inj, prefix);
        if (ws.empty()) continue;
        std::cout << s.name << " " << t.name << " " << ws.size() << " "
                  << to_text(ws.front().disjunct) << "\n";
      }
    return kExitOk;
  }
  throw Error("unknown analysis: " + kind);
}

int cmd_verify_pawn(const Config& c) {
  PawnOptions opts;
  opts.depth = c.depth;
  opts.k_target = c.k_target;
  opts.budget = budget_of(c);
  opts.max_atoms = c.max_atoms;
  PawnReport report = verify_pawn(load_facts(c), load_rules(c), opts);
  if (c.emit == "json") {
    ordered_json stages = ordered_json::array();
    for (const auto& s : report.stages)
      stages.push_back({{"name", s.name}, {"ok", s.ok}, {"detail", s.detail}});
    std::cout << ordered_json{{"verdict", to_text(report.verdict)},
                              {"reason", report.reason},
                              {"stages", stages}}
                     .dump(2)
              << "\n";
  } else {
    for (const auto& s : report.stages)
      std::cout << "% " << s.name << ": " << s.detail << "\n";
    std::cout << to_text(report.verdict) << " % " << report.reason << "\n";
  }
  return report.verdict == PawnVerdict::Inconclusive ? kExitInconclusive : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Existential-rule toolkit: chase, rewriting, rule-set surgery and analysis"};
  app.require_subcommand(1);

  Config c;
  app.add_option("--rules", c.rules_path, "rule file");
  app.add_option("--facts", c.facts_path, "fact file");
  app.add_option("--query", c.query_path, "query file");
  app.add_option("--depth", c.depth, "chase depth bound");
  app.add_option("--k", c.k_target, "tournament size target");
  app.add_option("--generations", c.generations, "rewriting generation budget");
  app.add_option("--max-atoms", c.max_atoms, "chase atom budget");
  app.add_option("--max-cqs", c.max_cqs, "rewriting disjunct budget");
  app.add_option("--emit", c.emit, "output format: text, json or dot")
      ->check(CLI::IsMember({"text", "json", "dot"}));
  app.add_option("--seed", c.seed, "seed for randomized suites");

  auto* parse_cmd = app.add_subcommand("parse", "parse and reprint inputs");
  auto* chase_cmd = app.add_subcommand("chase", "run the oblivious chase");
  auto* rewrite_cmd = app.add_subcommand("rewrite", "rewrite a query against a rule set");
  auto* surgery_cmd = app.add_subcommand("surgery", "transform a rule set");
  std::string surgery_kind;
  surgery_cmd
      ->add_option("kind", surgery_kind, "encode-db, reify, streamline, body-rewrite, regalize")
      ->required()
      ->check(CLI::IsMember({"encode-db", "reify", "streamline", "body-rewrite", "regalize"}));
  auto* check_cmd = app.add_subcommand("check", "property checkers");
  std::string check_kind;
  check_cmd->add_option("kind", check_kind, "fe, pu, quick, bdd")
      ->required()
      ->check(CLI::IsMember({"fe", "pu", "quick", "bdd"}));
  auto* analyze_cmd = app.add_subcommand("analyze", "instance analysis");
  std::string analyze_kind;
  analyze_cmd->add_option("kind", analyze_kind, "tournament, loop, valley, witnesses")
      ->required()
      ->check(CLI::IsMember({"tournament", "loop", "valley", "witnesses"}));
  auto* pawn_cmd = app.add_subcommand("verify-pawn", "run the end-to-end pipeline verifier");

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (parse_cmd->parsed()) return cmd_parse(c);
    if (chase_cmd->parsed()) return cmd_chase(c);
    if (rewrite_cmd->parsed()) return cmd_rewrite(c);
    if (surgery_cmd->parsed()) return cmd_surgery(surgery_kind, c);
    if (check_cmd->parsed()) return cmd_check(check_kind, c);
    if (analyze_cmd->parsed()) return cmd_analyze(analyze_kind, c);
    if (pawn_cmd->parsed()) return cmd_verify_pawn(c);
  } catch (const SoundnessError& e) {
    std::cerr << "soundness failure: " << e.what() << "\n";
    return kExitSoundness;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
