// Copyright 2026 The threadtree Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "threadtree/cli.hpp"
#include "threadtree/io.hpp"

using namespace threadtree;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result call(std::vector<std::string> args, CliEnvironment env = {}) {
  std::ostringstream out, err;
  const int code = run(args, out, err, env);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("threadtree_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

const std::vector<std::string> kGen = {
    "generate", "--model", "fm", "--alpha", "0.31", "--tau", "0.98",
    "--log-beta", "2.39", "--count", "60", "--seed", "7"};

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("usage errors") {
    CHECK(call({}).code == kExitUsage);
    CHECK(call({"frobnicate"}).code == kExitUsage);
    CHECK(call({"fit", "--bogus", "x.jsonl"}).code == kExitUsage);
    CHECK(call({"generate", "--alpha", "0.3", "--tau", "0.9", "--beta", "1", "--count", "3"}).code ==
          kExitUsage);
    CHECK(call({"generate", "--alpha", "0.3", "--tau", "1.5", "--beta", "1", "--count", "3",
                "--seed", "1"}).code == kExitUsage);
    const Result r = call({"residuals", "data.jsonl"});
    CHECK(r.code == kExitUsage);
    CHECK(r.err.find("no input dataset") != std::string::npos);
    CHECK(call({"fit", "--model", "bogus", "x.jsonl"}).code == kExitUsage);
    CHECK(call({"--help"}).code == kExitOk);
  }

  TEST_CASE("ingest failures") {
    const fs::path dir = scratch("ingest");
    CHECK(call({"fit", (dir / "missing.jsonl").string()}).code == kExitIngest);
    std::ofstream(dir / "bad.jsonl") << "{\"id\":\"t1\",\"parents\":[1,1,2]}\n{\"id\":\"t2\",\"parents\":[2]}\n";
    const Result strict = call({"fit", "--strict", (dir / "bad.jsonl").string()});
    CHECK(strict.code == kExitIngest);
    CHECK(strict.err.find("line 2") != std::string::npos);
  }

  TEST_CASE("generate is reproducible and independent of jobs") {
    auto a = kGen, b = kGen;
    a.insert(a.end(), {"--jobs", "1"});
    b.insert(b.end(), {"--jobs", "3"});
    const Result ra = call(a), rb = call(b);
    REQUIRE(ra.code == kExitOk);
    CHECK(ra.out == rb.out);
    std::istringstream in(ra.out);
    const auto d = ingest(in, DatasetFormat::kJsonLines, true).dataset;
    CHECK(d.count() == 60);
  }

  TEST_CASE("fit, compare and environment overrides") {
    const fs::path dir = scratch("fit");
    auto gen = kGen;
    gen.insert(gen.end(), {"--out", dir.string(), "--size", "40"});
    REQUIRE(call(gen).code == kExitOk);
    const std::string data = (dir / "synthetic.jsonl").string();

    const Result f = call({"fit", "--model", "fm", "--sample-size", "50", "--seed", "7", data});
    REQUIRE(f.code == kExitOk);
    const auto j = nlohmann::json::parse(f.out);
    CHECK(j["fits"].size() == 1);
    CHECK(j["fits"][0]["restarts"].size() >= 5);

    const Result all = call({"fit", "--model", "all", "--format", "csv", data});
    REQUIRE(all.code == kExitOk);
    CHECK(std::count(all.out.begin(), all.out.end(), '\n') == 5);

    const fs::path cmp = dir / "cmp";
    const Result c = call({"compare", "--replicates", "4", "--restarts", "2", "--seed", "7",
                           "--out", cmp.string(), data});
    REQUIRE(c.code == kExitOk);
    std::istringstream range(slurp(cmp / "range.csv"));
    std::string line;
    std::getline(range, line);
    CHECK(line == "variant,mean,low,high");
    std::vector<double> means;
    while (std::getline(range, line)) {
      means.push_back(std::stod(line.substr(line.find(',') + 1)));
    }
    REQUIRE(means.size() == 4);
    for (double m : means) CHECK(means[0] <= m + 1e-12);
    CHECK(fs::exists(cmp / "comparison.json"));

    CliEnvironment env;
    env.out_dir = (dir / "env").string();
    env.jobs = "2";
    REQUIRE(call({"fit", data}, env).code == kExitOk);
    CHECK(fs::exists(dir / "env" / "fit.json"));
    REQUIRE(call({"fit", "--out", (dir / "flag").string(), data}, env).code == kExitOk);
    CHECK(fs::exists(dir / "flag" / "fit.json"));
    env.jobs = "many";
    CHECK(call({"fit", data}, env).code == kExitUsage);
  }

  TEST_CASE("metrics, evolve and asymptotics tables") {
    const fs::path dir = scratch("metrics");
    auto gen = kGen;
    gen.insert(gen.end(), {"--out", dir.string(), "--format", "csv"});
    REQUIRE(call(gen).code == kExitOk);
    const std::string data = (dir / "synthetic.csv").string();
    const Result m = call({"metrics", "--simulate", "--alpha", "0.31", "--tau", "0.98",
                           "--log-beta", "2.39", "--out", (dir / "m").string(), data});
    REQUIRE(m.code == kExitOk);
    for (const char* f : {"degree.csv", "subtree.csv", "depth.csv", "synthetic_degree.csv",
                          "degree_overlay.csv", "metrics.json"}) {
      CHECK(fs::exists(dir / "m" / f));
    }
    const Result e = call({"evolve", data});
    REQUIRE(e.code == kExitOk);
    CHECK(e.out.rfind("t,alive,mean_width,mean_depth,marker\n", 0) == 0);
    const Result a = call({"asymptotics", "--alpha", "0.31", "--tau", "0.98", "--log-beta",
                           "2.39", "--t-max", "200", "--replicates", "50"});
    REQUIRE(a.code == kExitOk);
    CHECK(a.out.rfind("t,lower,upper,empirical_mean,ci_low,ci_high\n10,1,1,1,1,1\n", 0) == 0);
  }
}
