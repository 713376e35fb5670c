#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "torus_rh/report_io.hpp"

using namespace torus_rh;

TEST_CASE("shortest round-trip doubles") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const double v = u(rng) * std::pow(10.0, 40.0 * u(rng));
    CHECK(parse_double(format_double(v)) == v);
  }
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
  CHECK(std::isinf(parse_double(format_double(-INFINITY))));
  CHECK(std::isnan(parse_double(format_double(NAN))));
  CHECK_THROWS_AS(parse_double("1.0x"), Error);
}

TEST_CASE("report JSON schema and round trip") {
  ResidualReport r = make_report("jump.m", {1.2345678901234567e-9, 3e-10}, 1e-7);
  r.add("epsilon", std::vector<double>{1e-3, 1e-4});
  r.add("note", std::string("x"));
  const nlohmann::json j = nlohmann::json::parse(reports_json({r})).at(0);
  for (const char* key : {"identity_name", "max_residual", "mean_residual", "tolerance", "pass", "metadata"}) {
    CHECK(j.contains(key));
  }
  CHECK(j["max_residual"].get<double>() == r.max_residual);
  CHECK(j["mean_residual"].get<double>() == r.mean_residual);
  CHECK(j["metadata"]["epsilon"][1].get<double>() == 1e-4);
  CHECK(j["metadata"]["status"] == "evaluated");
}

TEST_CASE("report CSV has a header and one row per report") {
  const ResidualReport a = make_report("a", {0.1}, 1.0);
  const ResidualReport b = make_report("b", {0.30000000000000004}, 0.2);
  std::istringstream in(reports_csv({a, b}));
  std::string line;
  std::getline(in, line);
  CHECK(line == "identity_name,max_residual,mean_residual,tolerance,pass,metadata");
  std::getline(in, line);
  CHECK(line.rfind("a,0.1,0.1,1,true,", 0) == 0);
  std::getline(in, line);
  CHECK(line.rfind("b,0.30000000000000004,0.30000000000000004,0.2,false,", 0) == 0);
}

TEST_CASE("tables") {
  Table t;
  t.columns = {"x", "label"};
  t.rows = {{0.1, std::string("a,b")}, {std::nan(""), std::string("c")}};
  CHECK(table_csv(t) == "x,label\n0.1,\"a,b\"\nnan,c\n");
  const nlohmann::json j = nlohmann::json::parse(table_json(t));
  CHECK(j[0]["x"].get<double>() == 0.1);
  CHECK(j[1]["x"] == "nan");
}
