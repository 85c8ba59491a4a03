// Machine-readable verification records: every check carries an explicit
// expected-vs-measured pair, a tolerance, and a status. JSON is the primary
// format; markdown and CSV render the same record set.

#ifndef STOKESBGG_REPORT_HPP
#define STOKESBGG_REPORT_HPP

#include <string>
#include <vector>

namespace stokesbgg {

inline constexpr const char* kToolVersion = "1.0.0";

struct CheckRecord {
  std::string name;
  double measured = 0.;
  double expected = 0.;
  double tol = 0.;
  std::string status;  // pass | fail | uncertified
  std::string note;    // optional context (probe counts, gap ratios, ...)
};

struct VerificationReport {
  std::string mesh;  // descriptor
  int k = 0;
  long seed = 0;
  std::vector<CheckRecord> checks;
  double elapsed_s = -1.;  // emitted only when >= 0

  void add_pass_fail(const std::string& name, double measured, double expected, double tol,
                     const std::string& note = "");
  void add_upper_bound(const std::string& name, double measured, double bound,
                       const std::string& note = "");
  void add_status(const std::string& name, double measured, double expected,
                  const std::string& status, const std::string& note = "");
  bool all_pass() const;

  std::string to_json() const;
  std::string to_markdown() const;
  std::string to_csv() const;
};

}  // namespace stokesbgg

#endif
