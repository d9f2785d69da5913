#include <benchmark/benchmark.h>

#include <random>
#include <string>

#include "erkit/analysis.hpp"
#include "erkit/chase.hpp"
#include "erkit/hom.hpp"
#include "erkit/rewrite.hpp"
#include "erkit/surgery.hpp"
#include "erkit/textio.hpp"

using namespace erkit;

namespace {

const char* kExtTrans =
    "E(x,y) -> ? z : E(y,z) .\n"
    "E(x,y), E(y,z) -> E(x,z) .\n";

const char* kPair =
    "E(x,y) -> ? z : E(y,z) .\n"
    "E(x,xp), E(y,yp) -> E(x,yp) .\n";

Instance chain(int n) {
  AtomSet atoms;
  for (int i = 0; i < n; ++i)
    atoms.insert(Atom{Predicate{"E", 2},
                      {constant("c" + std::to_string(i)), constant("c" + std::to_string(i + 1))}});
  return Instance{atoms};
}

void BM_chase_depth(benchmark::State& state) {
  RuleSet rules = parse_rules(kExtTrans);
  Instance db = parse_facts("E(a,b).");
  for (auto _ : state) {
    ChaseTrace trace = chase(db, rules, static_cast<int>(state.range(0)), 1 << 20);
    benchmark::DoNotOptimize(trace.result().size());
  }
}
BENCHMARK(BM_chase_depth)->DenseRange(2, 8, 2);

void BM_datalog_saturate(benchmark::State& state) {
  RuleSet rules = parse_rules("E(x,y), E(y,z) -> E(x,z) .");
  Instance db = chain(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    ChaseTrace trace = saturate(db, rules, 1 << 20);
    benchmark::DoNotOptimize(trace.result().size());
  }
}
BENCHMARK(BM_datalog_saturate)->RangeMultiplier(2)->Range(8, 64);

void BM_ucq_rewrite_pair_loop(benchmark::State& state) {
  RuleSet rules = parse_rules(kPair);
  CQ loop = parse_query("?() <- E(x,x) .");
  for (auto _ : state) {
    RewritingRun run = ucq_rewrite(loop, rules);
    benchmark::DoNotOptimize(run.result().disjuncts().size());
  }
}
BENCHMARK(BM_ucq_rewrite_pair_loop);

void BM_ucq_rewrite_diverging(benchmark::State& state) {
  RuleSet rules = parse_rules(kExtTrans);
  CQ loop = parse_query("?() <- E(x,x) .");
  RewriteBudget budget;
  budget.max_generations = static_cast<int>(state.range(0));
  for (auto _ : state) {
    RewritingRun run = ucq_rewrite(loop, rules, budget);
    benchmark::DoNotOptimize(run.generations.size());
  }
}
BENCHMARK(BM_ucq_rewrite_diverging)->DenseRange(2, 6, 2);

void BM_find_hom_path_into_chain(benchmark::State& state) {
  // a k-atom variable path mapped into a chain instance
  AtomSet path;
  for (int i = 0; i < 6; ++i)
    path.insert(Atom{Predicate{"E", 2},
                     {variable("v" + std::to_string(i)), variable("v" + std::to_string(i + 1))}});
  Instance db = chain(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto h = find_hom(path, db.atoms());
    benchmark::DoNotOptimize(h.has_value());
  }
}
BENCHMARK(BM_find_hom_path_into_chain)->RangeMultiplier(4)->Range(8, 128);

void BM_injectivize(benchmark::State& state) {
  RuleSet rules = parse_rules(kPair);
  CQ edge = parse_query("?(x,y) <- E(x,y) .");
  RewritingRun run = ucq_rewrite(edge, rules);
  for (auto _ : state) {
    UCQ inj = injectivize(run.result());
    benchmark::DoNotOptimize(inj.disjuncts().size());
  }
}
BENCHMARK(BM_injectivize);

void BM_regalize_pair(benchmark::State& state) {
  RuleSet rules = parse_rules(kPair);
  Instance db = parse_facts("E(a,b).");
  RegalizeOptions opts;
  opts.check_obligations = false;
  for (auto _ : state) {
    auto [regal, report] = regalize(db, rules, opts);
    benchmark::DoNotOptimize(regal.size());
  }
}
BENCHMARK(BM_regalize_pair);

void BM_verify_pawn_pair(benchmark::State& state) {
  RuleSet rules = parse_rules(kPair);
  Instance db = parse_facts("E(a,b).");
  for (auto _ : state) {
    PawnReport report = verify_pawn(db, rules);
    benchmark::DoNotOptimize(report.verdict);
  }
}
BENCHMARK(BM_verify_pawn_pair);

void BM_find_tournament(benchmark::State& state) {
  // dense random digraph, exact k=4 tournament search
  std::mt19937 rng(7);
  const int n = static_cast<int>(state.range(0));
  AtomSet atoms;
  std::bernoulli_distribution keep(0.4);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && keep(rng))
        atoms.insert(Atom{Predicate{"E", 2},
                          {constant("k" + std::to_string(i)), constant("k" + std::to_string(j))}});
  Instance db{atoms};
  for (auto _ : state) {
    auto t = find_tournament(db, 4);
    benchmark::DoNotOptimize(t.has_value());
  }
}
BENCHMARK(BM_find_tournament)->DenseRange(8, 24, 8);

}  // namespace

BENCHMARK_MAIN();
