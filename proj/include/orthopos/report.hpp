#pragma once

#include <json.hpp>

#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include "orthopos/amplitude.hpp"
#include "orthopos/positivity.hpp"
#include "orthopos/schoenberg.hpp"

namespace orthopos {

using json = nlohmann::ordered_json;

/// RFC-4180 field quoting (only when needed).
inline std::string csv_field(const std::string& value) {
  if (value.find_first_of(",\"\r\n") == std::string::npos) return value;
  std::string quoted = "\"";
  for (const char c : value) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

template <class T>
void write_expand_csv(std::ostream& os, const CoefficientVector<T>& coeffs) {
  os << "n,a_n\r\n";
  for (std::size_t n = 0; n < coeffs.size(); ++n)
    os << n << ',' << csv_field(format_scalar(coeffs.coeffs[n])) << "\r\n";
}

template <class T>
json expand_json(const CoefficientVector<T>& coeffs,
                 const MinCoefficient<T>& min, const ExpansionDiagnostics& diag) {
  json rows = json::array();
  for (std::size_t n = 0; n < coeffs.size(); ++n)
    rows.push_back({{"n", n}, {"a_n", format_scalar(coeffs.coeffs[n])}});
  return json{{"coefficients", std::move(rows)},
              {"min_coefficient",
               {{"index", min.index},
                {"value", format_scalar(min.value)},
                {"is_negative", min.is_negative}}},
              {"verdict", min.is_negative ? "negative" : "positive"},
              {"diagnostics",
               {{"cancellation_log10", diag.cancellation_log10},
                {"digits_budget", diag.digits_budget},
                {"precision_warning", diag.precision_warning}}}};
}

inline const char* landscape_csv_header() {
  return "M,beta,gamma,alpha_crit,status";
}

template <class T>
void write_landscape_csv(std::ostream& os, const LandscapeResult<T>& result) {
  os << landscape_csv_header() << "\r\n";
  for (const auto& cell : result.grid)
    os << cell.M << ',' << format_scalar(cell.beta) << ','
       << format_scalar(cell.gamma) << ',' << format_scalar(cell.alpha_crit)
       << ',' << to_string(cell.status) << "\r\n";
  for (const auto& entry : result.profile)
    os << entry.argmax_M << ',' << format_scalar(entry.beta) << ','
       << format_scalar(entry.gamma) << ',' << format_scalar(entry.alpha_crit)
       << ",profile\r\n";
}

template <class T>
json landscape_json(const LandscapeResult<T>& result) {
  json grid = json::array();
  for (const auto& cell : result.grid)
    grid.push_back({{"M", cell.M},
                    {"beta", format_scalar(cell.beta)},
                    {"gamma", format_scalar(cell.gamma)},
                    {"alpha_crit", format_scalar(cell.alpha_crit)},
                    {"status", to_string(cell.status)}});
  json profile = json::array();
  for (const auto& entry : result.profile)
    profile.push_back({{"beta", format_scalar(entry.beta)},
                       {"gamma", format_scalar(entry.gamma)},
                       {"alpha_crit", format_scalar(entry.alpha_crit)},
                       {"argmax_M", entry.argmax_M}});
  return json{{"epsilon", format_scalar(result.epsilon)},
              {"M_max", result.M_max},
              {"digits", result.digits},
              {"grid", std::move(grid)},
              {"profile", std::move(profile)}};
}

/// Rows of per-n statistics; n_scaled = n^(1/d) is the plotting abscissa.
/// a0 < 0 means "not planted" and leaves the column empty.
inline void write_schoenberg_csv(std::ostream& os,
                                 const std::vector<SampleStats>& rows, int d,
                                 double a0) {
  os << "n,n_scaled,mean_alpha,std_alpha,samples,a0\r\n";
  for (const auto& row : rows) {
    os << row.n << ','
       << format_scalar(std::pow(static_cast<double>(row.n), 1.0 / d)) << ','
       << format_scalar(row.mean_alpha) << ',' << format_scalar(row.std_alpha)
       << ',' << row.samples << ',';
    if (a0 >= 0) os << format_scalar(a0);
    os << "\r\n";
  }
}

inline json schoenberg_json(const std::vector<SampleStats>& rows, int d,
                            double a0) {
  json out = json::array();
  for (const auto& row : rows)
    out.push_back({{"n", row.n},
                   {"n_scaled", std::pow(static_cast<double>(row.n), 1.0 / d)},
                   {"mean_alpha", row.mean_alpha},
                   {"std_alpha", row.std_alpha},
                   {"samples", row.samples}});
  json doc{{"rows", std::move(out)}};
  if (a0 >= 0)
    doc["a0"] = a0;
  else
    doc["a0"] = nullptr;
  return doc;
}

}  // namespace orthopos
