#include <doctest.h>

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bimod/app.hpp"
#include "bimod/error.hpp"
#include "testkit.hpp"

using namespace bimod;
namespace fs = std::filesystem;

namespace {

const fs::path kTiny = fs::path(BIMOD_FIXTURE_DIR) / "tiny.txt";

int run(std::vector<std::string> args) {
  args.insert(args.begin(), "bimod");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

std::vector<std::string> tiny_flags(const fs::path& out) {
  return {"--min-df", "1", "--stoplist", "none", "--stem", "off", "--out", out.string()};
}

std::vector<std::string> cat(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

nlohmann::json load_json(const fs::path& p) { return nlohmann::json::parse(testkit::read_file(p)); }

std::vector<std::vector<std::string>> load_tsv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(testkit::read_file(p));
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, '\t')) cells.push_back(cell);
    if (!line.empty() && line.back() == '\t') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("cluster on the two-biclique fixture") {
    testkit::TempDir dir("cli");
    REQUIRE(run(cat({"cluster", "--corpus", kTiny.string(), "--lambda", "1"}, tiny_flags(dir.path()))) == 0);
    const auto report = load_json(dir.path() / "report.json");
    CHECK(report["n_clusters"] == 2);
    CHECK(report["modularity"]["total"].get<double>() == 0.5);
    CHECK(report["modularity"]["edge_term"].get<double>() == 1.0);
    CHECK(report["nmi"].get<double>() == doctest::Approx(1.0));
    CHECK(report["purity"].get<double>() == 1.0);
    CHECK(report["partition"]["clusters"][0]["top_words"].size() == 2);
    const auto graph = load_json(dir.path() / "graph.json");
    CHECK(graph["L"] == 8);
    CHECK(graph["n_vertices"] == 8);
    CHECK(load_tsv(dir.path() / "graph.tsv").size() == 8);
    CHECK(load_tsv(dir.path() / "partition.tsv").size() == 8);
    const auto manifest = load_json(dir.path() / "manifest.json");
    CHECK(manifest["config_hash"].get<std::string>().size() == 16);
    CHECK(manifest["version"] == BIMOD_VERSION);
  }

  TEST_CASE("projection with --clusters") {
    testkit::TempDir dir("cli");
    REQUIRE(run(cat({"cluster", "--corpus", kTiny.string(), "--lambda", "2.5", "--clusters", "2"}, tiny_flags(dir.path()))) == 0);
    const auto report = load_json(dir.path() / "report.json");
    CHECK(report["n_clusters"] == 8);
    CHECK(report["projection"]["n_clusters"].get<int>() <= 2);
    CHECK(fs::exists(dir.path() / "projection.tsv"));
  }

  TEST_CASE("sweep rows and best marker") {
    testkit::TempDir dir("cli");
    REQUIRE(run(cat({"sweep", "--corpus", kTiny.string(), "--sweep", "1:3:0.5"}, tiny_flags(dir.path()))) == 0);
    const auto rows = load_tsv(dir.path() / "sweep.tsv");
    REQUIRE(rows.size() == 6);
    CHECK(rows[0][0] == "lambda");
    CHECK(rows[1][0] == "1");
    CHECK(rows[5][0] == "3");
    CHECK(rows[1].back() == "*");
    CHECK(testkit::read_file(dir.path() / "best_lambda.txt") == "1\n");
    // Q(lambda) = edge - lambda * null(1) for the fixed component partition.
    for (const char* sub : {"lambda_1", "lambda_1.5"}) {
      const auto r = load_json(dir.path() / sub / "report.json");
      const double lambda = r["lambda"].get<double>();
      const double edge = r["modularity"]["edge_term"].get<double>();
      const double null = r["modularity"]["null_term"].get<double>();
      CHECK(r["modularity"]["total"].get<double>() == edge - null);
      CHECK(null == lambda * 0.5);
    }
  }

  TEST_CASE("a one-point sweep matches cluster") {
    testkit::TempDir a("cli"), b("cli");
    REQUIRE(run(cat({"sweep", "--corpus", kTiny.string(), "--sweep", "1:1:0.5"}, tiny_flags(a.path()))) == 0);
    REQUIRE(run(cat({"cluster", "--corpus", kTiny.string(), "--lambda", "1"}, tiny_flags(b.path()))) == 0);
    CHECK(load_tsv(a.path() / "sweep.tsv").size() == 2);
    CHECK(testkit::read_file(a.path() / "lambda_1" / "partition.tsv") == testkit::read_file(b.path() / "partition.tsv"));
    CHECK(testkit::read_file(a.path() / "lambda_1" / "report.json") == testkit::read_file(b.path() / "report.json"));
  }

  TEST_CASE("classify: self-classification and the two-seed fixture") {
    testkit::TempDir dir("cli");
    REQUIRE(run(cat({"classify", "--train", kTiny.string(), "--test", kTiny.string()}, tiny_flags(dir.path()))) == 0);
    CHECK(load_json(dir.path() / "report.json")["micro_f1"].get<double>() == 100.0);

    testkit::TempDir two("cli");
    std::ofstream(two.path() / "train.txt") << "A w1 w2\nB w3 w4\n";
    std::ofstream(two.path() / "test.txt") << "A w1 w2\nB w3 w4\n";
    REQUIRE(run(cat({"classify", "--train", (two.path() / "train.txt").string(), "--test",
                     (two.path() / "test.txt").string()},
                    tiny_flags(two.path() / "out"))) == 0);
    const auto rows = load_tsv(two.path() / "out" / "predictions.tsv");
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == std::vector<std::string>{"test.txt:1", "A", "A"});
    CHECK(rows[1] == std::vector<std::string>{"test.txt:2", "B", "B"});
  }

  TEST_CASE("classify: seeds file, lambda file and unseen test classes") {
    testkit::TempDir dir("cli");
    std::ofstream(dir.path() / "train.txt") << "A w1 w2\nB w3 w4\n";
    std::ofstream(dir.path() / "test.txt") << "A w1\nC w3 w4\n";
    std::ofstream(dir.path() / "seeds.tsv") << "word:w2\tA\n";
    std::ofstream(dir.path() / "lambda.txt") << "1.5\n";
    REQUIRE(run(cat({"classify", "--train", (dir.path() / "train.txt").string(), "--test",
                     (dir.path() / "test.txt").string(), "--seeds", (dir.path() / "seeds.tsv").string(),
                     "--lambda-file", (dir.path() / "lambda.txt").string()},
                    tiny_flags(dir.path() / "out"))) == 0);
    const auto report = load_json(dir.path() / "out" / "report.json");
    CHECK(report["lambda"].get<double>() == 1.5);
    CHECK(report["per_class"].contains("C"));
    CHECK(report["per_class"]["C"]["f1"].get<double>() == 0.0);

    std::ofstream(dir.path() / "bad_seeds.tsv") << "nosuch:9\tA\n";
    CHECK(run(cat({"classify", "--train", (dir.path() / "train.txt").string(), "--test",
                   (dir.path() / "test.txt").string(), "--seeds", (dir.path() / "bad_seeds.tsv").string()},
                  tiny_flags(dir.path() / "out2"))) == kExitData);
  }

  TEST_CASE("exit codes") {
    testkit::TempDir dir("cli");
    CHECK(run(cat({"cluster", "--corpus", (dir.path() / "missing.txt").string()}, tiny_flags(dir.path()))) == kExitData);
    CHECK(run({"cluster", "--corpus", kTiny.string(), "--lambda", "0"}) == kExitUsage);
    CHECK(run({"cluster", "--corpus", kTiny.string(), "--bigrams", "maybe"}) == kExitUsage);
    CHECK(run({"cluster", "--corpus", kTiny.string(), "--schedule", "random"}) == kExitUsage);
    CHECK(run({"sweep", "--corpus", kTiny.string(), "--sweep", "3:1:0.5"}) == kExitUsage);
    CHECK(run({"sweep", "--corpus", kTiny.string(), "--sweep", "1:3:0"}) == kExitUsage);
    CHECK(run({"frobnicate"}) == kExitUsage);
    CHECK(run({"classify", "--train", kTiny.string()}) == kExitUsage);
  }

  TEST_CASE("identical runs write identical bytes") {
    testkit::TempDir dir("cli");
    testkit::write_corpus(testkit::synthetic_corpus({}, 120, 5), dir.path() / "c.txt");
    const std::vector<std::string> files = {"partition.tsv", "report.json",   "graph.tsv",
                                            "graph.json",    "manifest.json", "projection.tsv"};
    std::vector<std::string> first;
    for (int round = 0; round < 2; ++round) {
      fs::remove_all(dir.path() / "out");
      REQUIRE(run({"cluster", "--corpus", (dir.path() / "c.txt").string(), "--lambda", "1.5", "--seed", "3",
                   "--clusters", "3", "--min-df", "2", "--out", (dir.path() / "out").string()}) == 0);
      for (std::size_t i = 0; i < files.size(); ++i) {
        const std::string bytes = testkit::read_file(dir.path() / "out" / files[i]);
        CAPTURE(files[i]);
        CHECK(!bytes.empty());
        if (round == 0) {
          first.push_back(bytes);
        } else {
          CHECK(bytes == first[i]);
        }
      }
    }
  }

  TEST_CASE("sweep spec parsing") {
    const auto s = LambdaSweep::parse("1:3:0.5");
    CHECK(s.values() == std::vector<double>{1.0, 1.5, 2.0, 2.5, 3.0});
    CHECK(LambdaSweep::parse("0.5:0.5:1").values().size() == 1);
    CHECK_THROWS_AS(LambdaSweep::parse("1:2"), UsageError);
    CHECK_THROWS_AS(LambdaSweep::parse("a:b:c"), UsageError);
  }
}
