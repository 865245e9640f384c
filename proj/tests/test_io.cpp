#include <filesystem>

#include "doctest.h"
#include "pi_forge/graph_io.hpp"
#include "pi_forge/model_io.hpp"
#include "pi_forge/pi_models.hpp"
#include "support.hpp"

using namespace pi_forge;

TEST_CASE("tables round-trip through JSON") {
  for (auto name : fixture_names()) {
    const auto t = fixture(name);
    CHECK(table_from_json(Json::parse(serialize_table(t))) == t);
  }
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const auto t = testing::random_table(rng, {3, 2, 2});
    CHECK(table_from_json(table_to_json(t)) == t);
  }
  const auto with_meta = table_to_json(fixture("table2"), Json{{"source", "unit"}});
  CHECK(with_meta["metadata"]["source"] == "unit");
  CHECK(table_from_json(with_meta) == fixture("table2"));
}

TEST_CASE("decimal strings are the shortest round-trip form") {
  CHECK(format_decimal(0.125) == "0.125");
  CHECK(format_decimal(0.0) == "0");
  CHECK(format_decimal(0.024) == "0.024");
  const auto doc = table_to_json(fixture("table2"));
  CHECK(doc["probs"][0] == "0.024");
}

TEST_CASE("numeric probabilities are accepted and malformed models rejected") {
  Json doc = {{"variables", {{{"name", "A"}, {"cardinality", 2}}}}, {"probs", {0.25, 0.75}}};
  CHECK(table_from_json(doc)[1] == 0.75);
  doc["probs"] = {"0.25", "x"};
  CHECK(testing::throws_code(ErrorCode::InvalidInput, [&] { (void)table_from_json(doc); }));
  CHECK(testing::throws_code(ErrorCode::InvalidInput, [] { (void)table_from_json(Json::object()); }));
}

TEST_CASE("datasets round-trip through JSON and CSV") {
  const auto d = exact_dataset(fixture("table3"), 40);
  CHECK(dataset_from_json(dataset_to_json(d)) == d);
  CHECK(dataset_from_csv(dataset_to_csv(d), d.vars()) == d);
  CHECK(dataset_from_csv(dataset_to_csv(d)) == d);

  const auto csv = dataset_to_csv(Dataset::from_cases(binary_variables(2), {{1, 0}, {0, 1}}));
  CHECK(csv == "X1,X2\n0,1\n1,0\n");
  CHECK(testing::throws_code(ErrorCode::InvalidInput, [] { (void)dataset_from_csv("A,B\n0\n"); }));
  CHECK(testing::throws_code(ErrorCode::InvalidInput, [] { (void)dataset_from_csv("A,B\n0,-1\n"); }));
  CHECK(testing::throws_code(ErrorCode::InvalidInput, [] { (void)dataset_from_csv(""); }));

  Json bad = dataset_to_json(d);
  bad["m"] = 41;
  CHECK(testing::throws_code(ErrorCode::InvalidInput, [&] { (void)dataset_from_json(bad); }));
}

TEST_CASE("graphs serialize by variable name") {
  const auto vars = binary_variables(3);
  Dag dag(3);
  dag.add_arc(0, 2);
  dag.add_arc(1, 2);
  const auto doc = dag_to_json(dag, vars);
  CHECK(doc["arcs"] == Json::parse(R"([["X1","X3"],["X2","X3"]])"));
  CHECK(dag_from_json(doc, vars) == dag);
  CHECK(dag_to_dot(dag, vars).find("\"X1\" -> \"X3\"") != std::string::npos);

  UGraph g(3);
  g.add_link(0, 1);
  CHECK(ugraph_to_json(g, vars)["links"] == Json::parse(R"([["X1","X2"]])"));
  CHECK(ugraph_to_dot(g, vars).find("\"X1\" -- \"X2\"") != std::string::npos);

  Json unknown = doc;
  unknown["arcs"].push_back({"X1", "Q"});
  CHECK(testing::throws_code(ErrorCode::InvalidInput, [&] { (void)dag_from_json(unknown, vars); }));
}

TEST_CASE("file helpers") {
  const auto path = std::filesystem::temp_directory_path() / "pi_forge_io_test.json";
  write_file(path, "abc\n");
  CHECK(read_file(path) == "abc\n");
  std::filesystem::remove(path);
  CHECK(testing::throws_code(ErrorCode::Io, [&] { (void)read_file(path); }));
}
