#include "torus_rh/report_io.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace torus_rh {

namespace {

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

nlohmann::json number(double v) {
  // JSON has no inf/nan; those go out as strings.
  if (std::isfinite(v)) return v;
  return format_double(v);
}

nlohmann::json meta_json(const MetaValue& v) {
  if (const auto* d = std::get_if<double>(&v)) return number(*d);
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  nlohmann::json arr = nlohmann::json::array();
  for (double x : std::get<std::vector<double>>(v)) arr.push_back(number(x));
  return arr;
}

std::string cell_text(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  return csv_quote(std::get<std::string>(c));
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw Error(ErrorKind::invalid_argument, "not a number: " + s);
  }
  return v;
}

nlohmann::json to_json(const ResidualReport& r) {
  nlohmann::json meta = nlohmann::json::object();
  meta["status"] = to_string(r.status);
  meta["sample_count"] = r.sample_count;
  for (const auto& [k, v] : r.metadata) meta[k] = meta_json(v);
  return {{"identity_name", r.identity_name}, {"max_residual", number(r.max_residual)},
          {"mean_residual", number(r.mean_residual)}, {"tolerance", number(r.tolerance)},
          {"pass", r.pass}, {"metadata", meta}};
}

std::string reports_json(const std::vector<ResidualReport>& reports) {
  nlohmann::json arr = nlohmann::json::array();
  for (const ResidualReport& r : reports) arr.push_back(to_json(r));
  return arr.dump(2) + "\n";
}

std::string reports_csv(const std::vector<ResidualReport>& reports) {
  std::ostringstream os;
  os << "identity_name,max_residual,mean_residual,tolerance,pass,metadata\n";
  for (const ResidualReport& r : reports) {
    const nlohmann::json j = to_json(r);
    os << csv_quote(r.identity_name) << ',' << format_double(r.max_residual) << ','
       << format_double(r.mean_residual) << ',' << format_double(r.tolerance) << ',' << (r.pass ? "true" : "false")
       << ',' << csv_quote(j["metadata"].dump()) << '\n';
  }
  return os.str();
}

std::string table_json(const Table& t) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& row : t.rows) {
    nlohmann::json o = nlohmann::json::object();
    for (std::size_t i = 0; i < t.columns.size() && i < row.size(); ++i) {
      if (const auto* d = std::get_if<double>(&row[i])) o[t.columns[i]] = number(*d);
      else o[t.columns[i]] = std::get<std::string>(row[i]);
    }
    arr.push_back(o);
  }
  return arr.dump(2) + "\n";
}

std::string table_csv(const Table& t) {
  std::ostringstream os;
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << csv_quote(t.columns[i]);
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << cell_text(row[i]);
    os << '\n';
  }
  return os.str();
}

}  // namespace torus_rh
