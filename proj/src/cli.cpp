#include "cantree/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include "cantree/bench.hpp"
#include "cantree/cantree.hpp"
#include "cantree/miner.hpp"
#include "cantree/recommend.hpp"
#include "cantree/txndb.hpp"

namespace cantree {
namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Writes through a temporary file so an interrupted write never leaves a
// truncated result behind.
void write_file(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + path + "'");
    out << content;
    if (!out.flush()) throw Error("cannot write '" + path + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error("cannot write '" + path + "': " + ec.message());
}

void emit(std::ostream& out, const std::string& out_path, const std::function<void(std::ostream&)>& render) {
  if (out_path.empty()) {
    render(out);
    return;
  }
  std::ostringstream buffer;
  render(buffer);
  write_file(out_path, buffer.str());
}

}  // namespace

int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Incremental frequent-pattern mining over a canonical-order tree", "cantree"};
  app.require_subcommand(1);

  std::string input;
  std::string out_path;
  std::string minsup_text;

  auto* build = app.add_subcommand("build", "Build a tree from a transaction CSV and write a snapshot");
  build->add_option("--input", input, "Transaction CSV")->required();
  build->add_option("--out", out_path, "Snapshot path (default: standard output)");

  std::string snapshot_path;
  std::string insert_path;
  std::string delete_path;
  auto* update = app.add_subcommand("update", "Apply deletions then insertions to a snapshot in place");
  update->add_option("--snapshot", snapshot_path, "Snapshot to update")->required();
  update->add_option("--insert", insert_path, "Transactions to insert");
  update->add_option("--delete", delete_path, "Transactions to delete");

  bool items_only = false;
  bool itemsets = false;
  auto* mine = app.add_subcommand("mine", "Mine frequent items or itemsets");
  auto* mine_input = mine->add_option("--input", input, "Transaction CSV");
  auto* mine_snapshot = mine->add_option("--snapshot", snapshot_path, "Tree snapshot instead of a CSV");
  mine_input->excludes(mine_snapshot);
  mine->add_option("--minsup", minsup_text, "Minimum support: N or P%")->required();
  auto* only_flag = mine->add_flag("--items-only", items_only, "Frequent single items only");
  mine->add_flag("--itemsets", itemsets, "All frequent itemsets (default)")->excludes(only_flag);
  mine->add_option("--out", out_path, "Output path");

  auto* optimize = app.add_subcommand("optimize", "Project every transaction onto its frequent items");
  optimize->add_option("--input", input, "Transaction CSV")->required();
  optimize->add_option("--minsup", minsup_text, "Minimum support: N or P%")->required();
  optimize->add_option("--out", out_path, "Output path");

  std::string old_path;
  std::string new_path;
  std::string format = "text";
  std::size_t top = 0;
  auto* diff = app.add_subcommand("diff", "Compare frequent items of two API versions");
  diff->add_option("--old", old_path, "Old version CSV")->required();
  diff->add_option("--new", new_path, "New version CSV")->required();
  diff->add_option("--minsup", minsup_text, "Minimum support: N or P%")->required();
  diff->add_option("--format", format, "Report format")->check(CLI::IsMember({"text", "csv"}));
  diff->add_option("--top", top, "Emit the top K recommended items instead of the report")
      ->check(CLI::PositiveNumber);
  diff->add_option("--out", out_path, "Output path");

  std::string config_path;
  std::optional<std::uint64_t> seed;
  auto* bench = app.add_subcommand("bench", "Time incremental updates against rebuild-and-mine");
  bench->add_option("--config", config_path, "key=value configuration file");
  bench->add_option("--seed", seed, "Override the workload seed");
  bench->add_option("--out", out_path, "Output path");

  std::vector<const char*> argv{"cantree"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
    if (update->parsed() && insert_path.empty() && delete_path.empty())
      throw UsageError("update needs --insert and/or --delete");
    if (mine->parsed() && input.empty() && snapshot_path.empty())
      throw UsageError("mine needs --input or --snapshot");
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (build->parsed()) {
      const CanTree tree = build_tree(read_database_file(input));
      emit(out, out_path, [&](std::ostream& o) { o << snapshot_write(tree); });
    } else if (update->parsed()) {
      CanTree tree = snapshot_read(read_file(snapshot_path));
      if (!delete_path.empty()) {
        for (const auto& t : read_database_file(delete_path)) {
          try {
            tree.erase(t);
          } catch (const NotPresentError&) {
            throw NotPresentError("cannot delete '" + t.id + "': transaction is not stored in the tree");
          }
        }
      }
      if (!insert_path.empty()) tree.insert_batch(read_database_file(insert_path));
      write_file(snapshot_path, snapshot_write(tree));
    } else if (mine->parsed()) {
      const MinSupport ms = MinSupport::parse(minsup_text);
      const CanTree tree =
          snapshot_path.empty() ? build_tree(read_database_file(input)) : snapshot_read(read_file(snapshot_path));
      if (items_only) {
        const auto items = frequent_items(tree, ms);
        emit(out, out_path, [&](std::ostream& o) { write_items_csv(o, items); });
      } else {
        const auto result = mine_frequent_itemsets(tree, ms);
        emit(out, out_path, [&](std::ostream& o) { write_mining_csv(o, result); });
      }
    } else if (optimize->parsed()) {
      const MinSupport ms = MinSupport::parse(minsup_text);
      const auto optimized = optimize_database(read_database_file(input), ms);
      emit(out, out_path, [&](std::ostream& o) { write_database(o, optimized); });
    } else if (diff->parsed()) {
      const MinSupport ms = MinSupport::parse(minsup_text);
      const auto report = diff_versions(read_database_file(old_path), read_database_file(new_path), ms);
      emit(out, out_path, [&](std::ostream& o) {
        if (top > 0) write_recommendations_csv(o, recommend_items(report, top));
        else if (format == "csv") write_report_csv(o, report);
        else write_report_text(o, report);
      });
    } else if (bench->parsed()) {
      BenchConfig config = config_path.empty() ? BenchConfig{} : parse_bench_config(read_file(config_path));
      if (seed) config.seed = *seed;
      config.validate();
      const BenchReport report = run_bench(config);
      emit(out, out_path, [&](std::ostream& o) { write_bench_csv(o, report); });
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}

}  // namespace cantree
