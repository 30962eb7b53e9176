#pragma once

// Output formatting: JSON with 17 significant digits, CSV tables with four
// decimals (round half to even), schema and config header lines.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "dwell/error.hpp"
#include "dwell/hierarchy.hpp"
#include "dwell/oracle.hpp"

namespace dwell {

using json = nlohmann::json;

inline constexpr std::string_view kSchemaVersion = "dwell/1";

/// Fixed notation with `decimals` digits. Exact ties go to the even digit.
[[nodiscard]] inline std::string format_fixed(double v, int decimals = 4) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, decimals);
  std::string s(buf, res.ptr);
  if (s.size() > 1 && s[0] == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

/// 17 significant digits; round-trips every double.
[[nodiscard]] inline std::string format_sig17(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace report_detail {

inline void write_string(std::ostream& os, const std::string& s) {
  os << json(s).dump();
}

inline void write(std::ostream& os, const json& j, int indent, int depth) {
  const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
  const std::string close_pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
  const char* nl = indent > 0 ? "\n" : "";
  const char* sep = indent > 0 ? ": " : ":";
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << '{' << nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ',' << nl;
        first = false;
        os << pad;
        write_string(os, it.key());
        os << sep;
        write(os, it.value(), indent, depth + 1);
      }
      os << nl << close_pad << '}';
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      // numeric arrays stay on one line
      const bool flat = std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_primitive(); });
      os << '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) os << (flat ? (indent > 0 ? ", " : ",") : ",");
        if (!flat) os << nl << pad;
        first = false;
        write(os, e, indent, depth + 1);
      }
      if (!flat) os << nl << close_pad;
      os << ']';
      return;
    }
    case json::value_t::number_float:
      os << format_sig17(j.get<double>());
      return;
    default:
      os << j.dump();
  }
}

}  // namespace report_detail

/// JSON text with every float at 17 significant digits. Keys keep
/// nlohmann's sorted order, so output is deterministic.
[[nodiscard]] inline std::string dump_json(const json& j, int indent = 2) {
  std::ostringstream os;
  report_detail::write(os, j, indent, 0);
  os << '\n';
  return os.str();
}

/// Header lines for every CSV file: schema and the producing config.
[[nodiscard]] inline std::string csv_preamble(std::string_view kind, const json& config) {
  std::string s = "# schema: ";
  s += kSchemaVersion;
  s += " ";
  s += kind;
  s += "\n# config: ";
  std::ostringstream os;
  report_detail::write(os, config, 0, 0);
  s += os.str();
  s += "\n";
  return s;
}

/// Wraps a report body with the schema and config fields.
[[nodiscard]] inline json with_envelope(std::string_view kind, const json& config, json body) {
  body["schema"] = std::string(kSchemaVersion) + " " + std::string(kind);
  body["config"] = config;
  return body;
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw Error("write to " + path.string() + " failed");
}

[[nodiscard]] inline json violations_json(const std::vector<Violation>& v) {
  json arr = json::array();
  for (const auto& x : v) {
    arr.push_back({{"check", x.check}, {"n", x.n}, {"slack", x.slack}, {"detail", x.detail}});
  }
  return arr;
}

[[nodiscard]] inline json solve_report_json(const SolveReport& r, bool include_functions = true) {
  json j;
  j["g"] = r.params.g();
  j["a"] = r.params.a();
  j["bc"] = to_string(r.bc);
  j["energies"] = r.energies;
  j["curly_e"] = r.curly_e;
  j["converged"] = r.converged;
  j["iterations"] = r.iterations;
  j["violations"] = violations_json(r.violations);
  json checks = json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"check", c.check}, {"evaluated", c.evaluated}, {"worst_slack", c.worst_slack}});
  }
  j["checks"] = checks;
  j["warnings"] = r.warnings;
  if (include_functions) {
    j["x"] = r.ledger.nodes;
    j["f_final"] = r.f_final();
    j["psi_final"] = r.psi_final();
  }
  return j;
}

/// One CSV row E_0..E_n at four decimals.
[[nodiscard]] inline std::string energy_row(const std::vector<double>& e) {
  std::string s;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (i) s += ',';
    s += format_fixed(e[i]);
  }
  return s;
}

/// Linear interpolation of (xs, ys) at x; xs ascending.
[[nodiscard]] inline double interpolate(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
  if (xs.size() != ys.size() || xs.size() < 2) throw GridMismatchError("interpolate: need matching samples");
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - xs.begin()) - 1;
  const double t = (x - xs[i]) / (xs[i + 1] - xs[i]);
  return ys[i] + t * (ys[i + 1] - ys[i]);
}

/// CSV body: x, psi0, psi2, psi_final, psi_oracle on the solver grid.
[[nodiscard]] inline std::string wavefunction_csv(const SolveReport& r, const OracleResult& o) {
  std::string s = "x,psi0,psi2,psi_final,psi_oracle\n";
  const auto psi2 = r.psi(std::min<std::size_t>(2, r.iterations));
  const auto psif = r.psi_final();
  const auto& x = r.ledger.nodes;
  for (std::size_t i = 0; i < x.size(); ++i) {
    s += format_sig17(x[i]) + ',' + format_sig17(r.psi0[i]) + ',' + format_sig17(psi2[i]) + ',' +
         format_sig17(psif[i]) + ',' + format_sig17(interpolate(o.x, o.psi, x[i])) + '\n';
  }
  return s;
}

}  // namespace dwell
