// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
// failure.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cantree/bench.hpp"
#include "cantree/cantree.hpp"
#include "cantree/cli.hpp"
#include "cantree/fptree_baseline.hpp"
#include "cantree/miner.hpp"
#include "cantree/recommend.hpp"
#include "support/random_db.hpp"

namespace {

using namespace cantree;
using Clock = std::chrono::steady_clock;

const std::string kDataDir = CANTREE_DATA_DIR;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass;
  std::string detail;
};

Outcome golden_optimize(const std::string& input, const std::string& golden) {
  const auto start = Clock::now();
  std::ostringstream out;
  std::ostringstream err;
  const std::vector<std::string> args = {"optimize", "--input", kDataDir + "/" + input, "--minsup", "50%"};
  const int status = run_cli(args, out, err);
  const double elapsed = seconds_since(start);
  const bool match = status == kExitOk && out.str() == slurp(kDataDir + "/" + golden);
  char buf[128];
  std::snprintf(buf, sizeof buf, "%s, %.3f s", match ? "byte-identical" : "mismatch", elapsed);
  return {match && elapsed < 1.0, buf};
}

Outcome frequent_lists() {
  const MinSupport ms = MinSupport::parse("50%");
  const auto v2 = frequent_items(build_tree(read_database_file(kDataDir + "/v2.csv")), ms);
  const auto v3 = frequent_items(build_tree(read_database_file(kDataDir + "/v3.csv")), ms);
  const auto as_set = [](const std::vector<ItemSupport>& v) { return std::set<ItemSupport>(v.begin(), v.end()); };
  const std::set<ItemSupport> want2 = {{"mouseover", 4}, {"getBounds()", 3}, {"mouseout", 2}, {"clickable", 2}};
  const std::set<ItemSupport> want3 = {{"mouseover", 4}, {"getMap()", 3}, {"getBounds()", 2},
                                       {"visible", 2},   {"rightclick", 2}, {"clickable", 2}};
  const bool ok = v2.size() == want2.size() && as_set(v2) == want2 && v3.size() == want3.size() && as_set(v3) == want3;
  return {ok, "v2 " + std::to_string(v2.size()) + " items, v3 " + std::to_string(v3.size()) + " items"};
}

Outcome oracle_equivalence() {
  const auto start = Clock::now();
  std::mt19937_64 rng(20240401);
  int cases = 0;
  int discrepancies = 0;
  for (; cases < 300; ++cases) {
    const auto db = testing::random_database(rng, 10, 12);
    const auto ms = MinSupport::absolute(1 + cases % 4);
    MiningResult tree = mine_frequent_itemsets(build_tree(db), ms);
    MiningResult brute = apriori_bruteforce(db, ms);
    MiningResult baseline = rebuild_baseline_mine(db, ms);
    sort_result(tree);
    sort_result(brute);
    sort_result(baseline);
    if (tree.itemsets != brute.itemsets || tree.itemsets != baseline.itemsets) ++discrepancies;
  }
  const double elapsed = seconds_since(start);
  char buf[128];
  std::snprintf(buf, sizeof buf, "%d databases, %d discrepancies, %.2f s", cases, discrepancies, elapsed);
  return {discrepancies == 0 && elapsed < 30.0, buf};
}

Outcome incremental_equals_batch() {
  std::mt19937_64 rng(77);
  int cases = 0;
  int discrepancies = 0;
  for (; cases < 200; ++cases) {
    const auto db = testing::random_database(rng, 12, 20, 1);
    const std::size_t cut = rng() % (db.size() + 1);
    CanTree incremental = build_tree(testing::subset(db, 0, cut));
    incremental.insert_batch(testing::subset(db, cut, db.size()));
    const CanTree batch = build_tree(db);
    const auto ms = MinSupport::absolute(1 + rng() % 3);
    if (incremental.digest() != batch.digest() ||
        mine_frequent_itemsets(incremental, ms) != mine_frequent_itemsets(batch, ms))
      ++discrepancies;
  }
  return {discrepancies == 0,
          std::to_string(cases) + " splits, " + std::to_string(discrepancies) + " discrepancies"};
}

Outcome inverse_and_permutation() {
  std::mt19937_64 rng(91);
  int scripts = 0;
  int discrepancies = 0;
  for (; scripts < 200; ++scripts) {
    const auto db = testing::random_database(rng, 12, 16, 1);
    const std::size_t cut = rng() % db.size();
    const auto kept = testing::subset(db, 0, cut);
    const auto extra = testing::subset(db, cut, db.size());

    // Insert extra transactions, then delete them in a shuffled order.
    CanTree tree = build_tree(kept);
    const std::string before = tree.digest();
    tree.insert_batch(extra);
    std::vector<Transaction> removal(extra.begin(), extra.end());
    std::shuffle(removal.begin(), removal.end(), rng);
    for (const auto& t : removal) tree.erase(t);
    if (tree.digest() != before || tree.transaction_count() != kept.size()) ++discrepancies;

    std::vector<Transaction> permuted(db.begin(), db.end());
    std::shuffle(permuted.begin(), permuted.end(), rng);
    CanTree shuffled;
    for (auto t : permuted) {
      std::shuffle(t.items.begin(), t.items.end(), rng);
      shuffled.insert(t);
    }
    if (shuffled.digest() != build_tree(db).digest()) ++discrepancies;
  }
  return {discrepancies == 0,
          std::to_string(scripts) + " scripts, " + std::to_string(discrepancies) + " discrepancies"};
}

Outcome bench_scaling() {
  const auto start = Clock::now();
  const BenchConfig config = parse_bench_config(slurp(kDataDir + "/bench.conf"));
  config.validate();
  if (config.base_sizes.size() < 2) return {false, "bench.conf needs two base sizes"};
  const BenchReport report = run_bench(config);
  const double elapsed = seconds_since(start);

  const std::uint64_t small = config.base_sizes.front();
  const std::uint64_t large = config.base_sizes.back();
  const auto med = [&](Strategy s, std::uint64_t base, Phase p) { return median_elapsed(report, s, base, p); };
  const double can_small = med(Strategy::kCanTreeIncremental, small, Phase::kIncrementApply);
  const double can_large = med(Strategy::kCanTreeIncremental, large, Phase::kIncrementApply);
  const double base_small = med(Strategy::kRebuildBaseline, small, Phase::kIncrementApply);
  const double base_large = med(Strategy::kRebuildBaseline, large, Phase::kIncrementApply);
  const double can_ratio = can_large / std::max(can_small, 1e-6);
  const double base_ratio = base_large / std::max(base_small, 1e-6);
  // Cost of absorbing the increment and mining the result.
  const double can_total = can_large + med(Strategy::kCanTreeIncremental, large, Phase::kMine);
  const double base_total = base_large + med(Strategy::kRebuildBaseline, large, Phase::kMine);

  char buf[256];
  std::snprintf(buf, sizeof buf,
                "cantree ratio %.2fx, baseline ratio %.2fx, total at %llu: %.1f ms vs %.1f ms, run %.1f s", can_ratio,
                base_ratio, static_cast<unsigned long long>(large), can_total, base_total, elapsed);
  const bool ok = can_ratio <= 3.0 && base_ratio >= 5.0 && can_total < base_total && elapsed < 120.0;
  return {ok, buf};
}

Outcome snapshot_round_trip() {
  int cases = 0;
  int discrepancies = 0;
  const auto check = [&](const TransactionDatabase& db, const MinSupport& ms) {
    ++cases;
    const CanTree direct = build_tree(db);
    const CanTree loaded = snapshot_read(snapshot_write(direct));
    if (loaded.digest() != direct.digest() || loaded.transaction_count() != direct.transaction_count() ||
        mine_frequent_itemsets(loaded, ms) != mine_frequent_itemsets(direct, ms))
      ++discrepancies;
  };
  for (const char* name : {"v2.csv", "v3.csv"}) {
    const auto db = read_database_file(kDataDir + "/" + name);
    check(db, MinSupport::parse("50%"));
    check(db, MinSupport::absolute(1));
  }
  std::mt19937_64 rng(5150);
  for (int i = 0; i < 60; ++i) check(testing::random_database(rng, 12, 20), MinSupport::absolute(1 + i % 3));
  return {discrepancies == 0, std::to_string(cases) + " trees, " + std::to_string(discrepancies) + " discrepancies"};
}

Outcome version_diff() {
  const auto report = diff_versions(read_database_file(kDataDir + "/v2.csv"),
                                    read_database_file(kDataDir + "/v3.csv"), MinSupport::parse("50%"));
  const auto names = [](const std::vector<ItemChange>& changes) {
    std::set<Item> out;
    for (const auto& c : changes) out.insert(c.item);
    return out;
  };
  const bool ok = names(report.dropped) == std::set<Item>{"mouseout"} && report.dropped.size() == 1 &&
                  names(report.added) == std::set<Item>{"getMap()", "rightclick", "visible"} &&
                  report.added.size() == 3 &&
                  names(report.retained) == std::set<Item>{"mouseover", "getBounds()", "clickable"} &&
                  report.retained.size() == 3;
  return {ok, std::to_string(report.retained.size()) + " retained, " + std::to_string(report.dropped.size()) +
                  " dropped, " + std::to_string(report.added.size()) + " added"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"optimize v2 matches v2_optimized.csv", [] { return golden_optimize("v2.csv", "v2_optimized.csv"); }},
      {"optimize v3 matches v3_optimized.csv", [] { return golden_optimize("v3.csv", "v3_optimized.csv"); }},
      {"frequent-item lists of v2 and v3", frequent_lists},
      {"three miners agree on random databases", oracle_equivalence},
      {"incremental insertion equals batch build", incremental_equals_batch},
      {"insert/delete inverse and permutation invariance", inverse_and_permutation},
      {"no-rescan scaling of incremental updates", bench_scaling},
      {"snapshot round-trip preserves mining", snapshot_round_trip},
      {"version diff v2 to v3", version_diff},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    failures += !outcome.pass;
    std::printf("[%s] %zu. %s (%s)\n", outcome.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                outcome.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
