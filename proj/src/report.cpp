#include "stokesbgg/report.hpp"

#include <sstream>

#include <json.hpp>

namespace stokesbgg {

void VerificationReport::add_pass_fail(const std::string& name, double measured, double expected,
                                       double tol, const std::string& note) {
  CheckRecord rec;
  rec.name = name;
  rec.measured = measured;
  rec.expected = expected;
  rec.tol = tol;
  rec.status = std::abs(measured - expected) <= tol ? "pass" : "fail";
  rec.note = note;
  checks.push_back(rec);
}

void VerificationReport::add_upper_bound(const std::string& name, double measured, double bound,
                                         const std::string& note) {
  CheckRecord rec;
  rec.name = name;
  rec.measured = measured;
  rec.expected = 0.;
  rec.tol = bound;
  rec.status = measured <= bound ? "pass" : "fail";
  rec.note = note;
  checks.push_back(rec);
}

void VerificationReport::add_status(const std::string& name, double measured, double expected,
                                    const std::string& status, const std::string& note) {
  CheckRecord rec;
  rec.name = name;
  rec.measured = measured;
  rec.expected = expected;
  rec.tol = 0.;
  rec.status = status;
  rec.note = note;
  checks.push_back(rec);
}

bool VerificationReport::all_pass() const {
  for (const auto& rec : checks) {
    if (rec.status == "fail" || rec.status == "uncertified") return false;
  }
  return true;
}

std::string VerificationReport::to_json() const {
  nlohmann::ordered_json j;
  j["version"] = kToolVersion;
  j["mesh"] = mesh;
  j["k"] = k;
  j["seed"] = seed;
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& rec : checks) {
    nlohmann::ordered_json r;
    r["name"] = rec.name;
    r["measured"] = rec.measured;
    r["expected"] = rec.expected;
    r["tol"] = rec.tol;
    r["status"] = rec.status;
    if (!rec.note.empty()) r["note"] = rec.note;
    j["checks"].push_back(r);
  }
  if (elapsed_s >= 0.) j["elapsed_s"] = elapsed_s;
  return j.dump(2);
}

std::string VerificationReport::to_markdown() const {
  std::ostringstream out;
  out << "## " << mesh << " (k = " << k << ")\n\n";
  out << "| check | measured | expected | tol | status |\n";
  out << "|---|---|---|---|---|\n";
  for (const auto& rec : checks) {
    out << "| " << rec.name << " | " << rec.measured << " | " << rec.expected << " | " << rec.tol
        << " | " << rec.status << " |\n";
  }
  return out.str();
}

std::string VerificationReport::to_csv() const {
  std::ostringstream out;
  out << "name,measured,expected,tol,status\n";
  for (const auto& rec : checks) {
    out << rec.name << "," << rec.measured << "," << rec.expected << "," << rec.tol << ","
        << rec.status << "\n";
  }
  return out.str();
}

}  // namespace stokesbgg
