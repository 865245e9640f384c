#include <filesystem>

#include "doctest.h"
#include "pi_forge/model_io.hpp"
#include "pi_forge/pi_models.hpp"
#include "support_process.hpp"

using namespace pi_forge;
using testing::run_cli;

namespace {

std::string path_in_scratch(const std::string& name) { return (testing::scratch_dir() / name).string(); }

}  // namespace

TEST_CASE("generate writes the first reference table byte for byte") {
  const auto out = path_in_scratch("t1.json");
  const auto r = run_cli("generate --eta 4 --q 1.0 --out " + out);
  REQUIRE(r.status == 0);
  CHECK(read_file(out) == serialize_table(fixture("table1")));
  CHECK(std::filesystem::exists(out + ".meta.json"));

  const auto again = run_cli("generate --eta 4 --q 1.0");
  CHECK(again.out == serialize_table(fixture("table1")));
}

TEST_CASE("generate rejects q = 0.5") {
  const auto r = run_cli("generate --eta 3 --q 0.5");
  CHECK(r.status != 0);
  CHECK(r.err.find("invalid-spec") != std::string::npos);
}

TEST_CASE("generated models verify as full PI") {
  const auto out = path_in_scratch("g5.json");
  REQUIRE(run_cli("generate --eta 5 --q 0.3 --out " + out).status == 0);
  const auto r = run_cli("verify " + out);
  REQUIRE(r.status == 0);
  CHECK(Json::parse(r.out)["classification"]["verdict"] == "FullPI");
  CHECK(Json::parse(run_cli("verify full-pi:eta=5,q=0.3").out)["classification"]["verdict"] == "FullPI");
}

TEST_CASE("verify reports partial PI and embedded submodels") {
  const auto r3 = Json::parse(run_cli("verify fixture:table3").out);
  CHECK(r3["classification"]["verdict"] == "PartialPI");
  CHECK(r3["classification"]["independent_pairs"] == Json::parse(R"([["X1","X2"],["X1","X3"]])"));

  const auto r4 = Json::parse(run_cli("verify fixture:table4 --embedded --max-subset 3").out);
  bool found = false;
  for (const auto& e : r4["embedded"]) {
    if (e["subset"] == Json::parse(R"(["X1","X2","X3"])") && e["classification"]["verdict"] == "PartialPI") {
      found = true;
    }
  }
  CHECK(found);

  const auto product = path_in_scratch("product.json");
  write_file(product, serialize_table(product_of_marginals(fixture("table2"))));
  CHECK(Json::parse(run_cli("verify " + product).out)["classification"]["verdict"] == "NonPI-Independent");
}

TEST_CASE("learn subcommands") {
  const auto k1 = Json::parse(run_cli("learn --algo kutato --model fixture:table1 --k 1").out);
  CHECK(k1["graph"]["arcs"].empty());

  const auto pc = Json::parse(run_cli("learn --algo pc --model fixture:table4").out);
  CHECK(pc["graph"]["links"] == Json::parse(R"([["X2","X3"],["X2","X4"],["X3","X4"]])"));

  const auto dot = path_in_scratch("k3.dot");
  const auto trace = path_in_scratch("k3.jsonl");
  const auto k3 = Json::parse(
      run_cli("learn --algo kutato --model fixture:table1 --k 3 --dot " + dot + " --trace " + trace).out);
  CHECK(k3["graph"]["arcs"] == Json::parse(R"([["X1","X4"],["X2","X4"],["X3","X4"]])"));
  CHECK(read_file(dot).find("digraph") != std::string::npos);
  CHECK_FALSE(read_file(trace).empty());

  const auto k2 = Json::parse(run_cli("learn --algo k2 --model fixture:table1 --m 16 --ordering X4,X3,X2,X1").out);
  CHECK(k2["graph"]["arcs"].empty());

  const auto lb = Json::parse(run_cli("learn --algo lam-bacchus --model fixture:table3").out);
  CHECK(lb["link_list"].size() == 3);
}

TEST_CASE("sample and learn from data files") {
  const auto csv = path_in_scratch("d.csv");
  REQUIRE(run_cli("sample --model fixture:table3 --m 400 --seed 9 --out " + csv).status == 0);
  const auto json = path_in_scratch("d.json");
  REQUIRE(run_cli("sample --model fixture:table3 --m 400 --seed 9 --out " + json).status == 0);
  CHECK(dataset_from_csv(read_file(csv)) == dataset_from_json(Json::parse(read_file(json))));

  const auto exact = run_cli("sample --model fixture:table1 --m 16 --exact --format json");
  CHECK(Json::parse(exact.out)["counts"][0] == 2);
  CHECK(run_cli("sample --model fixture:table1 --m 10 --exact").status != 0);

  const auto r = run_cli("learn --algo k2 --data " + csv);
  CHECK(r.status == 0);
  CHECK(Json::parse(r.out)["graph"]["nodes"].size() == 3);
}

TEST_CASE("repeated runs are byte-identical") {
  const std::string cmd = "learn --algo lam-bacchus --model full-pi:eta=4,q=0.3 --budget 4";
  CHECK(run_cli(cmd).out == run_cli(cmd).out);
  const std::string sample_cmd = "sample --model fixture:table2 --m 50 --seed 17";
  CHECK(run_cli(sample_cmd).out == run_cli(sample_cmd).out);
}

TEST_CASE("k2-analysis emits one CSV row per m") {
  const auto r = run_cli("k2-analysis --m-range 4..14");
  REQUIRE(r.status == 0);
  CHECK(r.out.starts_with("m,min_r,argmin_w,argmin_v,argmin_u,argmin_z,min_r_prime,cells_examined\n"));
  CHECK(r.out.find("\n4,1.2,2,2,1,1,") != std::string::npos);
  CHECK(r.out.find("\n12,1.3846") != std::string::npos);
  CHECK(r.out.find("\n14,1.4,7,2,1,6,1.0095") != std::string::npos);
}

TEST_CASE("bad input fails fast") {
  CHECK(run_cli("learn --algo kutato --model fixture:table1 --bogus").status != 0);
  CHECK(run_cli("learn --algo annealing --model fixture:table1").status != 0);
  CHECK(run_cli("verify fixture:table9").status != 0);
  CHECK(run_cli("verify /nonexistent/model.json").status != 0);
  CHECK(run_cli("learn --algo kutato --model fixture:table1 --ordering X1,X2").status != 0);
  CHECK(run_cli("").status != 0);
}

TEST_CASE("help lists flags with defaults") {
  const auto r = run_cli("learn --help");
  CHECK(r.status == 0);
  CHECK(r.out.find("--max-parents UINT [3]") != std::string::npos);
  CHECK(r.out.find("--m UINT [1000]") != std::string::npos);
}

TEST_CASE("repro exits zero") {
  const auto r = run_cli("repro");
  CHECK(r.status == 0);
  CHECK(Json::parse(r.out)["passed"] == true);
}
