#include "tlab/report.hpp"

#include <cmath>
#include <cstdio>

#include <json.hpp>

namespace tlab {

namespace {

using Json = nlohmann::ordered_json;

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

/// Finite values as JSON numbers, the rest as strings.
Json number(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

const char* direction_name(Direction d) { return d == Direction::AtLeast ? ">=" : "<="; }

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string reports_to_csv(const std::vector<BoundReport>& reports) {
  std::string out = "statement_id,space,n,K,p,lhs,rhs,slack_ratio,pass\n";
  for (const BoundReport& r : reports) {
    out += r.statement;
    out += ',' + csv_field(r.space);
    out += ',' + std::to_string(r.n);
    out += ',' + format_double(r.curvature);
    out += ',' + format_double(r.p);
    out += ',' + format_double(r.lhs);
    out += ',' + format_double(r.rhs);
    out += ',' + format_double(r.slack_ratio);
    out += r.pass ? ",true\n" : ",false\n";
  }
  return out;
}

std::string reports_to_json(const std::vector<BoundReport>& reports) {
  Json list = Json::array();
  for (const BoundReport& r : reports) {
    Json params = Json::object();
    for (const auto& [name, value] : r.parameters) params[name] = number(value);
    Json j;
    j["statement_id"] = r.statement;
    j["space"] = r.space;
    j["n"] = r.n;
    j["K"] = number(r.curvature);
    j["p"] = number(r.p);
    j["lhs"] = number(r.lhs);
    j["rhs"] = number(r.rhs);
    j["direction"] = direction_name(r.direction);
    j["slack_ratio"] = number(r.slack_ratio);
    j["tolerance"] = number(r.tolerance);
    j["tolerance_source"] = r.tolerance_source;
    j["pass"] = r.pass;
    j["tie"] = r.tie;
    j["vacuous"] = r.vacuous;
    j["heuristic"] = r.heuristic;
    j["constant_formula"] = r.constant_formula;
    j["parameters"] = std::move(params);
    j["notes"] = r.notes;
    list.push_back(std::move(j));
  }
  Json root;
  root["reports"] = std::move(list);
  return root.dump(2) + "\n";
}

std::string curve_to_csv(const std::string& x_name, const std::string& y_name, const std::vector<double>& x,
                         const std::vector<double>& y) {
  std::string out = x_name + "," + y_name + "\n";
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    out += format_double(x[i]) + "," + format_double(y[i]) + "\n";
  }
  return out;
}

}  // namespace tlab
