#include "cantree/bench.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>

#include "cantree/cantree.hpp"
#include "cantree/fptree_baseline.hpp"
#include "cantree/miner.hpp"

namespace cantree {
namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Small portable generator so workloads are identical across standard
// library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() { return splitmix64(state_); }
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  std::uint64_t below(std::uint64_t n) { return next() % n; }

 private:
  std::uint64_t state_;
};

std::uint64_t fnv1a(std::string_view data, std::uint64_t hash = 0xcbf29ce484222325ULL) {
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::uint64_t parse_number(std::string_view key, std::string_view value) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (value.empty() || ec != std::errc() || ptr != value.data() + value.size())
    throw InvalidConfigError("bench config: '" + std::string(key) + "' expects a non-negative integer, got '" +
                             std::string(value) + "'");
  return v;
}

std::uint32_t parse_u32(std::string_view key, std::string_view value) {
  const std::uint64_t v = parse_number(key, value);
  if (v > UINT32_MAX) throw InvalidConfigError("bench config: '" + std::string(key) + "' is too large");
  return static_cast<std::uint32_t>(v);
}

template <class F>
double time_ms(F&& f) {
  const auto start = std::chrono::steady_clock::now();
  f();
  const auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(stop - start).count();
}

}  // namespace

void BenchConfig::validate() const {
  const auto fail = [](const std::string& what) { throw InvalidConfigError("bench config: " + what); };
  if (base_sizes.empty()) fail("base_sizes must not be empty");
  for (auto b : base_sizes)
    if (b < 1) fail("base sizes must be at least 1");
  if (increment_size < 1) fail("increment_size must be at least 1");
  if (alphabet_size < 1) fail("alphabet_size must be at least 1");
  if (items_min < 1) fail("items_min must be at least 1");
  if (items_min > items_max) fail("items_min must not exceed items_max");
  if (items_max > alphabet_size) fail("items_max must not exceed alphabet_size");
  if (repetitions < 3) fail("repetitions must be at least 3");
}

BenchConfig parse_bench_config(std::string_view text, BenchConfig config) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      throw InvalidConfigError("bench config line " + std::to_string(line_no) + ": expected key=value");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));

    if (key == "base_sizes") {
      config.base_sizes.clear();
      std::string_view rest = value;
      while (true) {
        const std::size_t comma = rest.find(',');
        config.base_sizes.push_back(parse_number(key, trim(rest.substr(0, comma))));
        if (comma == std::string_view::npos) break;
        rest.remove_prefix(comma + 1);
      }
    } else if (key == "increment_size") {
      config.increment_size = parse_number(key, value);
    } else if (key == "alphabet_size") {
      config.alphabet_size = parse_u32(key, value);
    } else if (key == "items_min") {
      config.items_min = parse_u32(key, value);
    } else if (key == "items_max") {
      config.items_max = parse_u32(key, value);
    } else if (key == "minsup") {
      try {
        config.minsup = MinSupport::parse(value);
      } catch (const InvalidMinSupportError& e) {
        throw InvalidConfigError(std::string("bench config: ") + e.what());
      }
    } else if (key == "repetitions") {
      config.repetitions = parse_u32(key, value);
    } else if (key == "seed") {
      config.seed = parse_number(key, value);
    } else {
      throw InvalidConfigError("bench config line " + std::to_string(line_no) + ": unknown key '" +
                               std::string(key) + "'");
    }
  }
  return config;
}

std::string_view to_string(Strategy s) noexcept {
  return s == Strategy::kCanTreeIncremental ? "cantree-incremental" : "rebuild-baseline";
}

std::string_view to_string(Phase p) noexcept {
  switch (p) {
    case Phase::kInitialBuild: return "initial-build";
    case Phase::kIncrementApply: return "increment-apply";
    case Phase::kMine: return "mine";
  }
  return "?";
}

Workload generate_workload(const BenchConfig& config, std::uint64_t base_size) {
  config.validate();
  std::uint64_t mix = config.seed;
  std::uint64_t seed = splitmix64(mix) ^ base_size;
  Rng rng(splitmix64(seed));

  const std::uint32_t n = config.alphabet_size;
  const int width = static_cast<int>(std::to_string(n - 1).size());
  std::vector<std::string> names(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "item%0*u", width, i);
    names[i] = buf;
  }
  // Fisher-Yates: names[r] is the item with popularity rank r.
  for (std::uint32_t i = n; i > 1; --i) std::swap(names[i - 1], names[rng.below(i)]);

  std::vector<double> cdf(n);
  double total = 0;
  for (std::uint32_t r = 0; r < n; ++r) cdf[r] = (total += 1.0 / (r + 1));
  for (auto& c : cdf) c /= total;

  std::vector<char> used(n, 0);
  std::vector<std::uint32_t> picked;
  std::uint64_t serial = 0;
  const auto make = [&](TransactionDatabase& db, std::uint64_t count) {
    for (std::uint64_t i = 0; i < count; ++i) {
      const auto len = config.items_min + static_cast<std::uint32_t>(rng.below(config.items_max - config.items_min + 1));
      picked.clear();
      while (picked.size() < len) {
        const double u = rng.unit();
        auto r = static_cast<std::uint32_t>(std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        if (r >= n) r = n - 1;
        if (!used[r]) {
          used[r] = 1;
          picked.push_back(r);
        }
      }
      Transaction t;
      t.id = "T" + std::to_string(++serial);
      t.label = "synthetic";
      for (auto r : picked) {
        t.items.push_back(names[r]);
        used[r] = 0;
      }
      db.add(std::move(t));
    }
  };

  Workload w;
  make(w.base, base_size);
  make(w.increment, config.increment_size);
  w.checksum = fnv1a(format_database(w.increment), fnv1a(format_database(w.base)));
  return w;
}

BenchReport run_bench(const BenchConfig& config) {
  config.validate();
  BenchReport report;
  for (const std::uint64_t base_size : config.base_sizes) {
    const Workload w = generate_workload(config, base_size);
    const auto row = [&](Strategy s, Phase p, std::uint32_t rep, double ms) {
      report.rows.push_back({s, base_size, p, rep, ms, w.checksum});
    };

    for (std::uint32_t rep = 0; rep < config.repetitions; ++rep) {
      {
        CanTree tree;
        MiningResult mined;
        row(Strategy::kCanTreeIncremental, Phase::kInitialBuild, rep, time_ms([&] { tree.insert_batch(w.base); }));
        row(Strategy::kCanTreeIncremental, Phase::kIncrementApply, rep,
            time_ms([&] { tree.insert_batch(w.increment); }));
        row(Strategy::kCanTreeIncremental, Phase::kMine, rep,
            time_ms([&] { mined = mine_frequent_itemsets(tree, config.minsup); }));

        std::optional<FpTree> initial;
        std::optional<FpTree> rebuilt;
        MiningResult baseline;
        const TransactionDatabase* base_only[] = {&w.base};
        const TransactionDatabase* both[] = {&w.base, &w.increment};
        row(Strategy::kRebuildBaseline, Phase::kInitialBuild, rep,
            time_ms([&] { initial.emplace(FpTree::build(base_only, config.minsup)); }));
        row(Strategy::kRebuildBaseline, Phase::kIncrementApply, rep,
            time_ms([&] { rebuilt.emplace(FpTree::build(both, config.minsup)); }));
        row(Strategy::kRebuildBaseline, Phase::kMine, rep, time_ms([&] { baseline = rebuilt->mine(); }));

        if (rep == 0 && !(mined == baseline))
          throw std::logic_error("bench: cantree and baseline mining results differ");
      }
    }
  }
  return report;
}

double median_elapsed(const BenchReport& report, Strategy s, std::uint64_t base_size, Phase p) {
  std::vector<double> values;
  for (const auto& r : report.rows)
    if (r.strategy == s && r.base_size == base_size && r.phase == p) values.push_back(r.elapsed_ms);
  if (values.empty()) return 0;
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 ? values[mid] : (values[mid - 1] + values[mid]) / 2;
}

void write_bench_csv(std::ostream& out, const BenchReport& report) {
  out << "strategy,base_size,phase,repetition,elapsed_ms,workload_checksum\n";
  for (const auto& r : report.rows) {
    char elapsed[32];
    std::snprintf(elapsed, sizeof elapsed, "%.3f", r.elapsed_ms);
    char checksum[24];
    std::snprintf(checksum, sizeof checksum, "%016llx", static_cast<unsigned long long>(r.workload_checksum));
    out << to_string(r.strategy) << ',' << r.base_size << ',' << to_string(r.phase) << ',' << r.repetition << ','
        << elapsed << ',' << checksum << '\n';
  }
}

}  // namespace cantree
