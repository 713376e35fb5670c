#pragma once

// JSON and CSV output. Floats are written in shortest round-trip form, so
// re-parsing gives the in-memory doubles bit for bit.

#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "torus_rh/verifier.hpp"

namespace torus_rh {

std::string format_double(double v);

// Parses what format_double writes (including inf, -inf, nan).
double parse_double(const std::string& s);

nlohmann::json to_json(const ResidualReport& r);
std::string reports_json(const std::vector<ResidualReport>& reports);
// Header row, then one row per report; metadata as an embedded JSON object.
std::string reports_csv(const std::vector<ResidualReport>& reports);

// A plain table for periods, eval and scan output.
using Cell = std::variant<double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

// Array of objects keyed by column name.
std::string table_json(const Table& t);
std::string table_csv(const Table& t);

}  // namespace torus_rh
