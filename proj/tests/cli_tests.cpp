#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "medresp/csv.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::current_path() / "cli_work";

int run(const std::string& args) {
  const std::string cmd = std::string(MEDRESP_BIN) + " " + args + " > " + (kWork / "last.log").string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string path(const std::string& name) { return (kWork / name).string(); }

struct Workspace {
  Workspace() {
    fs::remove_all(kWork);
    fs::create_directories(kWork);
  }
};

}  // namespace

TEST_CASE("end-to-end chain") {
  Workspace ws;
  REQUIRE(run("simulate --participants 4 --instances 8 --seed 3 --out " + path("cohort")) == 0);
  CHECK(fs::exists(kWork / "cohort" / "manifest.json"));
  CHECK(fs::exists(kWork / "cohort" / "regimens.csv"));

  REQUIRE(run("ingest " + path("cohort/instances.jsonl") + " --out " + path("ingested.jsonl")) == 0);
  REQUIRE(run("pair --in " + path("ingested.jsonl") + " --out " + path("paired.jsonl")) == 0);
  REQUIRE(run("extract --in " + path("paired.jsonl") + " --out " + path("features.csv") + " --registry " +
              path("registry.json")) == 0);
  std::ifstream fin(path("features.csv"));
  const auto rows = medresp::read_csv(fin);
  REQUIRE(rows.size() == 33);
  CHECK(rows[0].size() == 300);
  CHECK(rows[0][0] == "participant_id");
  CHECK(nlohmann::json::parse(slurp(path("registry.json")))["features"].size() == 297);

  REQUIRE(run("train --features " + path("features.csv") + " --model " + path("model.json") +
              " --trees 20 --seed 1 --oob") == 0);
  const auto model = nlohmann::json::parse(slurp(path("model.json")));
  CHECK(model["kind"] == "medresp-forest");
  CHECK(model["schema_version"] == 1);

  const std::string eval = "evaluate --features " + path("features.csv") + " --reps 3 --trees 15 --folds 4 --seed 9";
  REQUIRE(run("--threads 1 " + eval + " --report " + path("r1.json")) == 0);
  REQUIRE(run("--threads 4 " + eval + " --report " + path("r4.json")) == 0);
  CHECK(slurp(path("r1.json")) == slurp(path("r4.json")));
  for (const char* suffix : {"repetitions", "importance", "participants", "differences"}) {
    const std::string a = path(std::string("r1.") + suffix + ".csv");
    CHECK(fs::exists(a));
    CHECK(slurp(a) == slurp(path(std::string("r4.") + suffix + ".csv")));
  }
  const auto report = nlohmann::json::parse(slurp(path("r1.json")));
  CHECK(report["schema_version"] == 1);
  CHECK(report["repetitions"].size() == 3);

  REQUIRE(run("led --regimens " + path("cohort/regimens.csv") + " --out " + path("led.csv") + " --report " +
              path("r1.json") + " --fit-quadratic --min-instances 1") == 0);
  std::ifstream lin(path("led.csv"));
  const auto led = medresp::read_csv(lin);
  CHECK(led.size() == 5);
  CHECK(led[0][0] == "participant_id");
  CHECK(fs::exists(kWork / "led.fit.json"));
  const auto manifest = nlohmann::json::parse(slurp(path("cohort/manifest.json")));
  CHECK(std::stod(led[1][1]) == doctest::Approx(manifest["participants"][0]["daily_led"].get<double>()));
}

TEST_CASE("simulate is byte-identical for a fixed seed") {
  Workspace ws;
  REQUIRE(run("simulate --participants 2 --instances 4 --seed 5 --out " + path("a")) == 0);
  REQUIRE(run("--threads 3 simulate --participants 2 --instances 4 --seed 5 --out " + path("b")) == 0);
  CHECK(slurp(path("a/instances.jsonl")) == slurp(path("b/instances.jsonl")));
  CHECK(slurp(path("a/manifest.json")) == slurp(path("b/manifest.json")));
  REQUIRE(run("simulate --participants 2 --instances 4 --seed 6 --out " + path("c")) == 0);
  CHECK(slurp(path("a/instances.jsonl")) != slurp(path("c/instances.jsonl")));
}

TEST_CASE("exit codes") {
  Workspace ws;
  CHECK(run("extract --in " + path("missing.jsonl") + " --out " + path("f.csv")) == 2);
  CHECK(run("frobnicate") == 2);
  CHECK(run("train --features") == 2);
  CHECK(run("simulate --instances 3 --out " + path("odd")) == 3);
  {
    std::ofstream bad(path("bad.jsonl"));
    bad << "{not json\n";
  }
  CHECK(run("ingest " + path("bad.jsonl") + " --out " + path("n.jsonl")) == 2);
  CHECK(slurp(path("last.log")).find("E_INPUT_FORMAT") != std::string::npos);
  {
    std::ofstream one(path("one.csv"));
    one << "participant_id,started_at,label,f\np,2026-03-02T08:00:00Z,baseline,1\np,2026-03-02T09:00:00Z,treatment,2\n";
  }
  CHECK(run("evaluate --features " + path("one.csv") + " --report " + path("r.json") + " --reps 1") == 3);
  CHECK(slurp(path("last.log")).find("E_CONTRACT") != std::string::npos);
  {
    std::ofstream cfg(path("cfg.json"));
    cfg << "{\"threads\": \"many\"}";
  }
  CHECK(run("--config " + path("cfg.json") + " simulate --out " + path("x")) == 2);
}

TEST_CASE("config file sections apply and flags override them") {
  Workspace ws;
  {
    std::ofstream cfg(path("cfg.json"));
    cfg << R"({"simulate": {"participants": 2, "instances": 2, "seed": 4}})";
  }
  REQUIRE(run("--config " + path("cfg.json") + " simulate --out " + path("a")) == 0);
  auto manifest = nlohmann::json::parse(slurp(path("a/manifest.json")));
  CHECK(manifest["participants"].size() == 2);
  REQUIRE(run("--config " + path("cfg.json") + " simulate --participants 3 --out " + path("b")) == 0);
  manifest = nlohmann::json::parse(slurp(path("b/manifest.json")));
  CHECK(manifest["participants"].size() == 3);
}
