#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "torus_rh/cli.hpp"
#include "torus_rh/report_io.hpp"

using namespace torus_rh;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (char ch : line) {
      if (ch == '"') quoted = !quoted;
      else if (ch == ',' && !quoted) {
        cells.push_back(cell);
        cell.clear();
      } else {
        cell += ch;
      }
    }
    cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("point literals") {
  CHECK(std::get<cplx>(cli::parse_point("1.5,-2")) == cplx(1.5, -2.0));
  CHECK(std::get<InfinityPoint>(cli::parse_point("inf+")).sheet == Sheet::upper);
  CHECK(std::get<InfinityPoint>(cli::parse_point("inf-")).sheet == Sheet::lower);
  const auto b = std::get<BoundaryPoint>(cli::parse_point("0-,0.5"));
  CHECK(b.k == cplx(0.0, 0.5));
  CHECK(b.side == Side::minus);
  CHECK(std::get<BoundaryPoint>(cli::parse_point("0+")).side == Side::plus);
  for (const char* bad : {"1", "1,2,3", "a,b", "1,0+", "nan,1"}) CHECK_THROWS_AS(cli::parse_point(bad), Error);
}

TEST_CASE("periods") {
  const Run r = run({"periods", "--a", "1", "--c", "2"});
  REQUIRE(r.code == 0);
  const nlohmann::json j = nlohmann::json::parse(r.out);
  const TorusPeriods p = compute_periods(GapSpec(1.0, 2.0));
  // Bit-for-bit round trip of the in-memory values.
  CHECK(j["gamma_im"].get<double>() == p.gamma.imag());
  CHECK(j["tau_im"].get<double>() == p.tau.imag());
  CHECK(j["tau_im"].get<double>() > 0.0);

  const Run csv = run({"--format", "csv", "periods"});
  REQUIRE(csv.code == 0);
  const auto rows = csv_rows(csv.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0][3] == "gamma_im");
  CHECK(parse_double(rows[1][3]) == p.gamma.imag());

  CHECK(run({"periods", "--a", "2", "--c", "1"}).code == 1);
  CHECK(run({"periods", "--format", "xml"}).code == 1);
  CHECK(run({}).code == 1);
  CHECK(run({"bogus"}).code == 1);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("eval") {
  const Run m = run({"eval", "--target", "m", "--lambda", "0.3", "--points", "0,5"});
  REQUIRE(m.code == 0);
  const nlohmann::json j = nlohmann::json::parse(m.out);
  REQUIRE(j.size() == 1);
  const auto ctx = std::make_shared<const SurfaceContext>(GapSpec(1.0, 2.0));
  const Vec2 v = ModelSolutions(ctx, PhaseParam(0.3)).m(KPoint{cplx(0.0, 5.0)});
  CHECK(j[0]["m1_re"].get<double>() == v[0].real());
  CHECK(j[0]["m2_im"].get<double>() == v[1].imag());

  const Run m3 = run({"eval", "--target", "M3", "--lambda", "0"});
  CHECK(m3.code == 2);
  CHECK(m3.err.find("M3 undefined for Λ̃ ∈ ℤ") != std::string::npos);

  const Run ab = run({"eval", "--target", "abel", "--points", "inf+", "--format", "csv"});
  REQUIRE(ab.code == 0);
  CHECK(parse_double(csv_rows(ab.out)[1][2]) == 0.25);

  const Run sides = run({"eval", "--target", "M2", "--lambda", "0.3", "--points", "0+,1.5", "0-,1.5", "--format", "csv"});
  REQUIRE(sides.code == 0);
  CHECK(csv_rows(sides.out).size() == 3);

  CHECK(run({"eval", "--target", "m", "--points", "0,1"}).code == 2);
  CHECK(run({"eval", "--target", "m", "--points", "1e-10,1"}).code == 2);
  const Run near = run({"eval", "--target", "m", "--points", "1e-10,1", "--allow-near-singular", "--format", "csv"});
  REQUIRE(near.code == 0);
  CHECK(csv_rows(near.out)[1].back() == "singular");
  CHECK(run({"eval", "--target", "m", "--points", "x"}).code == 1);
  CHECK(run({"eval", "--target", "nope", "--points", "1,1"}).code == 1);
  CHECK(run({"eval", "--target", "m", "--points", "inf+"}).code == 2);
}

TEST_CASE("verify") {
  const std::string path = "cli_verify_test.json";
  const Run ok = run({"--out", path, "verify", "--lambda", "0.3", "--contour-points", "40", "--no-corruption"});
  CHECK(ok.code == 0);
  std::ifstream f(path);
  const nlohmann::json j = nlohmann::json::parse(f);
  CHECK(j.size() > 50);
  std::remove(path.c_str());

  CHECK(run({"verify", "--tol", "jump=1e-30", "--contour-points", "20", "--no-corruption"}).code == 1);
  CHECK(run({"verify", "--tol", "nope=1"}).code == 1);
  CHECK(run({"verify", "--tol", "jump"}).code == 1);
  CHECK(run({"--out", "/nonexistent/dir/x.json", "verify", "--contour-points", "20", "--no-corruption"}).code == 3);
}

TEST_CASE("scan") {
  const Run r = run({"--format", "csv", "scan", "--count", "101", "--contour-points", "12"});
  REQUIRE(r.code == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 102);
  const auto& head = rows[0];
  auto col = [&](const std::string& name) {
    return static_cast<std::size_t>(std::find(head.begin(), head.end(), name) - head.begin());
  };
  std::size_t best = 1;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (parse_double(rows[i][col("abs_Na_inf")]) < parse_double(rows[best][col("abs_Na_inf")])) best = i;
    CHECK(parse_double(rows[i][col("detM2_residual")]) <= 1e-9);
    CHECK(parse_double(rows[i][col("max_jump_residual")]) <= 1e-7);
  }
  CHECK(parse_double(rows[best][col("lambda_tilde")]) == 0.5);

  const Run two = run({"--format", "csv", "scan", "--count", "2", "--to", "0.5", "--contour-points", "12"});
  REQUIRE(two.code == 0);
  const auto t = csv_rows(two.out);
  REQUIRE(t.size() == 3);
  CHECK(t[1].back().find("integer_phase") != std::string::npos);
  CHECK(t[2].back().find("half_integer_phase") != std::string::npos);
  CHECK(run({"scan", "--count", "1"}).code == 1);
}
