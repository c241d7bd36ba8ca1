#pragma once

#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "cantree/txndb.hpp"

namespace cantree {

// Synthetic incremental-mining workload. Transaction lengths are uniform in
// [items_min, items_max]; items are drawn without replacement from a Zipf
// distribution (exponent 1.0) over the alphabet, with popularity ranks
// shuffled across item names so that canonical order and frequency order
// are unrelated.
struct BenchConfig {
  std::vector<std::uint64_t> base_sizes{10000, 100000};
  std::uint64_t increment_size = 1000;
  std::uint32_t alphabet_size = 200;
  std::uint32_t items_min = 4;
  std::uint32_t items_max = 12;
  MinSupport minsup = MinSupport::fraction(1, 100);
  std::uint32_t repetitions = 3;
  std::uint64_t seed = 42;

  // Throws InvalidConfigError.
  void validate() const;
};

// Reads "key=value" lines (keys as the member names above, base_sizes
// comma-separated, minsup as N or P%) over `defaults`. '#' starts a comment.
// Throws InvalidConfigError.
BenchConfig parse_bench_config(std::string_view text, BenchConfig defaults = {});

enum class Strategy { kCanTreeIncremental, kRebuildBaseline };
enum class Phase { kInitialBuild, kIncrementApply, kMine };

std::string_view to_string(Strategy s) noexcept;
std::string_view to_string(Phase p) noexcept;

struct BenchRow {
  Strategy strategy;
  std::uint64_t base_size;
  Phase phase;
  std::uint32_t repetition;
  double elapsed_ms;
  std::uint64_t workload_checksum;
};

struct BenchReport {
  std::vector<BenchRow> rows;
};

struct Workload {
  TransactionDatabase base;
  TransactionDatabase increment;
  // FNV-1a over the CSV rendering of base then increment.
  std::uint64_t checksum = 0;
};

Workload generate_workload(const BenchConfig& config, std::uint64_t base_size);

// Runs every phase of both strategies sequentially, `repetitions` times per
// base size. Throws std::logic_error if the two strategies ever disagree on
// the mining result.
BenchReport run_bench(const BenchConfig& config);

double median_elapsed(const BenchReport& report, Strategy s, std::uint64_t base_size, Phase p);

// "strategy,base_size,phase,repetition,elapsed_ms,workload_checksum"
void write_bench_csv(std::ostream& out, const BenchReport& report);

}  // namespace cantree
