#pragma once

#include <chrono>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "multiform/version.hpp"

namespace multiform {

struct CheckResult {
  std::string name;      // stable slug, e.g. "cs/dcs-identity-n1"
  std::string claim;     // one sentence stating what passing means
  bool passed = false;
  std::string measured;  // the numbers the verdict rests on
  double ms = 0.0;
};

struct Report {
  std::string tool = "multiform";
  std::string command;  // "verify" or "numeric"
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<CheckResult> checks;

  bool all_passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
};

// Timing is optional so reports can be compared byte for byte.
inline nlohmann::ordered_json report_json(const Report& r, bool with_timing = true) {
  nlohmann::ordered_json j;
  j["schema"] = kReportSchema;
  j["tool"] = r.tool;
  j["version"] = kVersion;
  j["command"] = r.command;
  nlohmann::ordered_json cfg;
  for (const auto& [k, v] : r.config) cfg[k] = v;
  j["config"] = std::move(cfg);
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const auto& c : r.checks) {
    nlohmann::ordered_json e;
    e["name"] = c.name;
    e["claim"] = c.claim;
    e["status"] = c.passed ? "pass" : "fail";
    e["measured"] = c.measured;
    if (with_timing) e["ms"] = c.ms;
    checks.push_back(std::move(e));
  }
  j["checks"] = std::move(checks);
  int passed = 0;
  for (const auto& c : r.checks) passed += c.passed ? 1 : 0;
  j["summary"] = {{"total", r.checks.size()},
                  {"passed", passed},
                  {"failed", r.checks.size() - static_cast<std::size_t>(passed)},
                  {"status", r.all_passed() ? "pass" : "fail"}};
  return j;
}

inline std::string report_text(const Report& r, bool with_timing = true) {
  std::string out = r.tool + " " + r.command + " report\n";
  for (const auto& [k, v] : r.config) out += "  " + k + " = " + v + "\n";
  for (const auto& c : r.checks) {
    out += std::string(c.passed ? "PASS" : "FAIL") + "  " + c.name;
    if (with_timing) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "  (%.1f ms)", c.ms);
      out += buf;
    }
    out += "\n      " + c.claim + "\n      " + c.measured + "\n";
  }
  int passed = 0;
  for (const auto& c : r.checks) passed += c.passed ? 1 : 0;
  out += std::to_string(passed) + "/" + std::to_string(r.checks.size()) + " checks passed\n";
  return out;
}

inline std::string render_report(const Report& r, const std::string& format,
                                 bool with_timing = true) {
  if (format == "json") return report_json(r, with_timing).dump(2) + "\n";
  if (format == "text") return report_text(r, with_timing);
  throw std::invalid_argument("render_report: format must be json or text");
}

inline void write_report(const Report& r, const std::string& out_path,
                         const std::string& format) {
  const std::string body = render_report(r, format);
  if (out_path.empty()) {
    std::fputs(body.c_str(), stdout);
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw std::runtime_error("write_report: cannot open " + out_path);
  f << body;
}

class Stopwatch {
 public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace multiform
