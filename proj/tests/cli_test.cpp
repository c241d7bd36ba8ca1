#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "cantree/cantree.hpp"
#include "cantree/cli.hpp"
#include "cantree/miner.hpp"
#include "support/random_db.hpp"

namespace cantree {
namespace {

namespace fs = std::filesystem;

const std::string kDataDir = CANTREE_DATA_DIR;

struct Result {
  int status;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int status = run_cli(args, out, err);
  return {status, out.str(), err.str()};
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / ("cantree_cli_" + std::string(info->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string write(const std::string& name, const std::string& content) const {
    std::ofstream(dir_ / name, std::ios::binary) << content;
    return path(name);
  }

  fs::path dir_;
};

const std::string kV2 = kDataDir + "/v2.csv";
const std::string kV3 = kDataDir + "/v3.csv";

TEST_F(CliTest, NoArgumentsIsUsageError) {
  const auto r = run({});
  EXPECT_EQ(r.status, kExitUsage);
  EXPECT_NE(r.err.find("error:"), std::string::npos);
  EXPECT_NE(r.err.find("build"), std::string::npos);
  EXPECT_TRUE(r.out.empty());
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run({"frobnicate"}).status, kExitUsage);
  EXPECT_EQ(run({"mine", "--input", kV2}).status, kExitUsage);
  EXPECT_EQ(run({"mine", "--minsup", "2"}).status, kExitUsage);
  EXPECT_EQ(run({"mine", "--input", kV2, "--snapshot", "x", "--minsup", "2"}).status, kExitUsage);
  EXPECT_EQ(run({"mine", "--input", kV2, "--minsup", "2", "--items-only", "--itemsets"}).status, kExitUsage);
  EXPECT_EQ(run({"update", "--snapshot", "x"}).status, kExitUsage);
  EXPECT_EQ(run({"diff", "--old", kV2, "--new", kV3, "--minsup", "2", "--format", "xml"}).status, kExitUsage);
  EXPECT_EQ(run({"build", "--input", kV2, "--bogus"}).status, kExitUsage);
}

TEST_F(CliTest, HelpGoesToStandardOutput) {
  const auto r = run({"--help"});
  EXPECT_EQ(r.status, kExitOk);
  EXPECT_NE(r.out.find("mine"), std::string::npos);
}

TEST_F(CliTest, MineItemsetsMatchesLibrary) {
  const auto r = run({"mine", "--input", kV2, "--minsup", "50%", "--itemsets"});
  ASSERT_EQ(r.status, kExitOk) << r.err;
  std::ostringstream expected;
  write_mining_csv(expected, mine_frequent_itemsets(build_tree(read_database_file(kV2)), MinSupport::absolute(2)));
  EXPECT_EQ(r.out, expected.str());
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 16);
  EXPECT_TRUE(r.out.starts_with("items,support\nmouseover,4\ngetBounds(),3\ngetBounds();mouseover,3\n"));
  EXPECT_NE(r.out.find("\nclickable;getBounds();mouseout;mouseover,2\n"), std::string::npos);
}

TEST_F(CliTest, MineItemsOnly) {
  const auto r = run({"mine", "--input", kV2, "--minsup", "2", "--items-only"});
  ASSERT_EQ(r.status, kExitOk) << r.err;
  EXPECT_EQ(r.out, "items,support\nmouseover,4\ngetBounds(),3\nclickable,2\nmouseout,2\n");
}

TEST_F(CliTest, InvalidMinSupportIsDataError) {
  for (const char* bad : {"0", "0%", "150%", "-3", "abc"}) {
    const auto r = run({"mine", "--input", kV2, "--minsup", bad});
    EXPECT_EQ(r.status, kExitData) << bad;
    EXPECT_NE(r.err.find("error:"), std::string::npos);
  }
}

TEST_F(CliTest, OutputIsByteDeterministic) {
  const std::vector<std::string> args = {"mine", "--input", kV3, "--minsup", "1"};
  EXPECT_EQ(run(args).out, run(args).out);
  const std::string a = path("a.csv");
  const std::string b = path("b.csv");
  ASSERT_EQ(run({"mine", "--input", kV3, "--minsup", "1", "--out", a}).status, kExitOk);
  ASSERT_EQ(run({"mine", "--input", kV3, "--minsup", "1", "--out", b}).status, kExitOk);
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_EQ(slurp(a), run(args).out);
}

TEST_F(CliTest, BuildWritesSnapshot) {
  const std::string snap = path("v2.snap");
  const auto r = run({"build", "--input", kV2, "--out", snap});
  ASSERT_EQ(r.status, kExitOk) << r.err;
  EXPECT_TRUE(r.out.empty());
  const std::string text = slurp(snap);
  EXPECT_TRUE(text.starts_with("cantree-snapshot v1\ntxns 4\n"));
  EXPECT_EQ(snapshot_read(text).digest(), build_tree(read_database_file(kV2)).digest());
  EXPECT_FALSE(fs::exists(snap + ".tmp"));
}

TEST_F(CliTest, BuildEmptyDatabase) {
  const auto r = run({"build", "--input", write("empty.csv", "")});
  ASSERT_EQ(r.status, kExitOk) << r.err;
  EXPECT_EQ(r.out, "cantree-snapshot v1\ntxns 0\n");
}

TEST_F(CliTest, MalformedInputReportsLine) {
  const auto r = run({"build", "--input", write("bad.csv", "t1,L,a;b\nt2,L\n")});
  EXPECT_EQ(r.status, kExitData);
  EXPECT_NE(r.err.find("line 2"), std::string::npos);
  EXPECT_EQ(run({"build", "--input", path("missing.csv")}).status, kExitData);
  EXPECT_EQ(run({"build", "--input", write("dup.csv", "t1,L,a\nt1,L,b\n")}).status, kExitData);
  EXPECT_EQ(run({"build", "--input", write("blank.csv", "t1,L,;\n")}).status, kExitData);
}

TEST_F(CliTest, UpdateMatchesFullBuild) {
  const auto db = read_database_file(kV2);
  TransactionDatabase head;
  TransactionDatabase tail;
  head.add(db[0]);
  head.add(db[1]);
  tail.add(db[2]);
  tail.add(db[3]);
  const std::string snap = path("s.snap");
  ASSERT_EQ(run({"build", "--input", write("head.csv", format_database(head)), "--out", snap}).status, kExitOk);
  const std::string tail_csv = write("tail.csv", format_database(tail));
  ASSERT_EQ(run({"update", "--snapshot", snap, "--insert", tail_csv}).status, kExitOk);

  const std::string full = path("full.snap");
  ASSERT_EQ(run({"build", "--input", kV2, "--out", full}).status, kExitOk);
  EXPECT_EQ(slurp(snap), slurp(full));
  EXPECT_EQ(run({"mine", "--snapshot", snap, "--minsup", "2"}).out, run({"mine", "--input", kV2, "--minsup", "2"}).out);

  // Deleting what was inserted restores the original tree.
  ASSERT_EQ(run({"update", "--snapshot", snap, "--delete", tail_csv}).status, kExitOk);
  EXPECT_EQ(snapshot_read(slurp(snap)).digest(), build_tree(head).digest());
}

TEST_F(CliTest, DeletingAbsentTransactionLeavesSnapshot) {
  const std::string snap = path("s.snap");
  ASSERT_EQ(run({"build", "--input", kV2, "--out", snap}).status, kExitOk);
  const std::string before = slurp(snap);
  // The first row is present, the second is not; nothing may be written.
  const std::string del = write("del.csv", "Item1,google.maps.Map,getMap();getBounds();mouseover;minX;minY;move\nx,L,zzz\n");
  const auto r = run({"update", "--snapshot", snap, "--delete", del, "--insert", kV3});
  EXPECT_EQ(r.status, kExitData);
  EXPECT_NE(r.err.find("'x'"), std::string::npos);
  EXPECT_EQ(slurp(snap), before);
}

TEST_F(CliTest, CorruptSnapshotIsDataError) {
  const std::string snap = write("bad.snap", "cantree-snapshot v1\ntxns 2\n1 a 1\n");
  EXPECT_EQ(run({"mine", "--snapshot", snap, "--minsup", "1"}).status, kExitData);
  EXPECT_EQ(run({"update", "--snapshot", snap, "--insert", kV2}).status, kExitData);
  EXPECT_EQ(slurp(snap), "cantree-snapshot v1\ntxns 2\n1 a 1\n");
}

TEST_F(CliTest, OptimizeMatchesGoldenFiles) {
  auto r = run({"optimize", "--input", kV2, "--minsup", "50%"});
  ASSERT_EQ(r.status, kExitOk) << r.err;
  EXPECT_EQ(r.out, slurp(kDataDir + "/v2_optimized.csv"));
  const std::string out = path("v3.csv");
  r = run({"optimize", "--input", kV3, "--minsup", "50%", "--out", out});
  ASSERT_EQ(r.status, kExitOk) << r.err;
  EXPECT_EQ(slurp(out), slurp(kDataDir + "/v3_optimized.csv"));
}

TEST_F(CliTest, DiffFormats) {
  auto r = run({"diff", "--old", kV2, "--new", kV3, "--minsup", "50%", "--format", "csv"});
  ASSERT_EQ(r.status, kExitOk) << r.err;
  EXPECT_EQ(r.out,
            "item,status,old_support,new_support\n"
            "mouseover,retained,4,4\n"
            "clickable,retained,2,2\n"
            "getBounds(),retained,3,2\n"
            "mouseout,dropped,2,\n"
            "getMap(),added,,3\n"
            "rightclick,added,,2\n"
            "visible,added,,2\n");

  r = run({"diff", "--old", kV2, "--new", kV3, "--minsup", "50%"});
  ASSERT_EQ(r.status, kExitOk) << r.err;
  EXPECT_TRUE(r.out.starts_with("minimum support: old 2, new 2\n"));
  EXPECT_NE(r.out.find("dropped (1):\n  mouseout  2\n"), std::string::npos);

  r = run({"diff", "--old", kV2, "--new", kV3, "--minsup", "50%", "--top", "3"});
  ASSERT_EQ(r.status, kExitOk) << r.err;
  EXPECT_EQ(r.out,
            "item,annotation,support\n"
            "mouseover,retained,4\n"
            "getMap(),new-in-version,3\n"
            "clickable,retained,2\n");
  EXPECT_EQ(run({"diff", "--old", kV2, "--new", kV3, "--minsup", "2", "--top", "0"}).status, kExitUsage);
}

TEST_F(CliTest, BenchSmallConfig) {
  const std::string conf = write("bench.conf",
                                 "base_sizes=50,80\nincrement_size=10\nalphabet_size=20\n"
                                 "items_min=2\nitems_max=5\nminsup=10%\nrepetitions=3\nseed=7\n");
  const auto a = run({"bench", "--config", conf});
  ASSERT_EQ(a.status, kExitOk) << a.err;
  EXPECT_TRUE(a.out.starts_with("strategy,base_size,phase,repetition,elapsed_ms,workload_checksum\n"));
  EXPECT_EQ(std::count(a.out.begin(), a.out.end(), '\n'), 37);

  // Same seed, same workloads: only timings may differ.
  const auto checksums = [](const std::string& csv) {
    std::vector<std::string> out;
    std::istringstream in(csv);
    for (std::string line; std::getline(in, line);) out.push_back(line.substr(line.rfind(',') + 1));
    return out;
  };
  const auto b = run({"bench", "--config", conf});
  EXPECT_EQ(checksums(a.out), checksums(b.out));
  const auto c = run({"bench", "--config", conf, "--seed", "8"});
  EXPECT_NE(checksums(a.out), checksums(c.out));
}

TEST_F(CliTest, BenchRejectsInvalidConfig) {
  EXPECT_EQ(run({"bench", "--config", write("zero.conf", "repetitions=0\n")}).status, kExitData);
  EXPECT_EQ(run({"bench", "--config", write("bad.conf", "colour=blue\n")}).status, kExitData);
  EXPECT_EQ(run({"bench", "--config", path("missing.conf")}).status, kExitData);
}

TEST_F(CliTest, RandomUpdateScripts) {
  std::mt19937_64 rng(2024);
  for (int round = 0; round < 20; ++round) {
    const auto db = testing::random_database(rng, 8, 12, 2);
    const std::size_t cut = 1 + rng() % (db.size() - 1);
    const std::string snap = path("r.snap");
    ASSERT_EQ(run({"build", "--input", write("a.csv", format_database(testing::subset(db, 0, cut))), "--out", snap})
                  .status,
              kExitOk);
    const std::string rest = write("b.csv", format_database(testing::subset(db, cut, db.size())));
    ASSERT_EQ(run({"update", "--snapshot", snap, "--insert", rest}).status, kExitOk);
    EXPECT_EQ(slurp(snap), snapshot_write(build_tree(db)));
    ASSERT_EQ(run({"update", "--snapshot", snap, "--delete", rest}).status, kExitOk);
    EXPECT_EQ(slurp(snap), snapshot_write(build_tree(testing::subset(db, 0, cut))));
  }
}

}  // namespace
}  // namespace cantree
