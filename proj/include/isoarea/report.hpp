#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace isoarea {

// One verification record: measured value against an expectation. Reports
// are a flat stream of these, one per check.
struct CheckRecord {
  std::string check;
  double value = 0.0;
  std::optional<double> expected;
  std::optional<double> tolerance;
  std::optional<double> stderror;
  bool pass = false;
};

enum class ReportFormat { json_lines, csv };

// Streams records as json-lines (default) or csv. The header record carries
// the resolved configuration so runs are reproducible from the report alone.
class ReportWriter {
 public:
  ReportWriter(std::ostream& out, ReportFormat format);

  void header(const std::string& command, const std::string& resolved_config);
  void write(const CheckRecord& record);

  bool all_passed() const { return failures_ == 0; }
  int failures() const { return failures_; }

 private:
  std::ostream& out_;
  ReportFormat format_;
  int failures_ = 0;
};

// Record builder: pass iff |value - expected| <= tolerance.
CheckRecord check_close(const std::string& name, double value, double expected, double tolerance);
// Record builder: pass iff value <= bound.
CheckRecord check_below(const std::string& name, double value, double bound);
// Record builder: pass iff value is true-ish per the caller.
CheckRecord check_flag(const std::string& name, double value, bool pass);

}  // namespace isoarea
