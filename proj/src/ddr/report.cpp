#include "ddr/verification.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>

namespace ddr {

void CheckReport::measure(const std::string& n, double value, const std::string& cmp, double tol) {
  Metric m{n, value, tol, cmp, true};
  if (cmp == "<") m.passed = value < tol;
  else if (cmp == "<=") m.passed = value <= tol;
  else if (cmp == ">=") m.passed = value >= tol;
  else if (cmp == "==") m.passed = value == tol;
  else if (!cmp.empty()) throw ArgumentError("unknown comparison '" + cmp + "'");
  if (!std::isfinite(value) && !cmp.empty()) m.passed = false;
  if (!m.passed) passed = false;
  metrics.push_back(m);
}

void CheckReport::fail(const std::string& n) {
  passed = false;
  notes.push_back(n);
}

const Metric* CheckReport::find(const std::string& n) const {
  for (const auto& m : metrics)
    if (m.name == n) return &m;
  return nullptr;
}

namespace {

std::string num(double v) {
  char buf[48];
  if (v == std::floor(v) && std::fabs(v) < 1e9) std::snprintf(buf, sizeof buf, "%.0f", v);
  else std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

} // namespace

std::string report_text(const CheckReport& r) {
  std::string out = std::string(r.passed ? "PASS " : "FAIL ") + r.name;
  if (!r.subject.empty()) out += " [" + r.subject + "]";
  out += '\n';
  for (const auto& m : r.metrics) {
    out += "  " + m.name + " = " + num(m.value);
    if (!m.comparison.empty()) out += "  (" + m.comparison + " " + num(m.tolerance) + (m.passed ? ")" : ") FAILED");
    out += '\n';
  }
  for (const auto& n : r.notes) out += "  note: " + n + '\n';
  return out;
}

std::string reports_text(const std::vector<CheckReport>& rs) {
  std::string out;
  for (const auto& r : rs) out += report_text(r);
  return out;
}

std::string reports_json(const std::vector<CheckReport>& rs) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : rs) {
    nlohmann::ordered_json j;
    j["name"] = r.name;
    j["subject"] = r.subject;
    j["status"] = r.passed ? "pass" : "fail";
    nlohmann::ordered_json ms = nlohmann::ordered_json::array();
    for (const auto& m : r.metrics) {
      nlohmann::ordered_json jm;
      jm["name"] = m.name;
      if (std::isfinite(m.value)) jm["value"] = m.value;
      else jm["value"] = nullptr;
      if (!m.comparison.empty()) {
        jm["comparison"] = m.comparison;
        jm["tolerance"] = m.tolerance;
        jm["passed"] = m.passed;
      }
      ms.push_back(jm);
    }
    j["metrics"] = ms;
    j["notes"] = r.notes;
    arr.push_back(j);
  }
  return arr.dump(2) + "\n";
}

} // namespace ddr
