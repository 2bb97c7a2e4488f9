#include "isoarea/report.hpp"

#include <cmath>
#include <iomanip>

#include <json.hpp>

namespace isoarea {

ReportWriter::ReportWriter(std::ostream& out, ReportFormat format) : out_(out), format_(format) {
  if (format_ == ReportFormat::csv) out_ << "check,value,expected,tolerance,stderr,pass\n";
}

void ReportWriter::header(const std::string& command, const std::string& resolved_config) {
  if (format_ == ReportFormat::json_lines) {
    nlohmann::json j;
    j["command"] = command;
    j["config"] = resolved_config;
    j["version"] = "isoarea 0.1.0";
    out_ << j.dump() << '\n';
  } else {
    out_ << "# " << command << " " << resolved_config << " (isoarea 0.1.0)\n";
  }
}

void ReportWriter::write(const CheckRecord& r) {
  if (!r.pass) ++failures_;
  if (format_ == ReportFormat::json_lines) {
    nlohmann::json j;
    j["check"] = r.check;
    j["value"] = r.value;
    j["expected"] = r.expected ? nlohmann::json(*r.expected) : nlohmann::json(nullptr);
    j["tolerance"] = r.tolerance ? nlohmann::json(*r.tolerance) : nlohmann::json(nullptr);
    j["stderr"] = r.stderror ? nlohmann::json(*r.stderror) : nlohmann::json(nullptr);
    j["pass"] = r.pass;
    out_ << j.dump() << '\n';
  } else {
    auto field = [](const std::optional<double>& v) {
      return v ? std::to_string(*v) : std::string();
    };
    out_ << r.check << ',' << std::setprecision(17) << r.value << ',' << field(r.expected) << ','
         << field(r.tolerance) << ',' << field(r.stderror) << ',' << (r.pass ? "true" : "false")
         << '\n';
  }
}

CheckRecord check_close(const std::string& name, double value, double expected, double tolerance) {
  CheckRecord r;
  r.check = name;
  r.value = value;
  r.expected = expected;
  r.tolerance = tolerance;
  r.pass = std::isfinite(value) && std::abs(value - expected) <= tolerance;
  return r;
}

CheckRecord check_below(const std::string& name, double value, double bound) {
  CheckRecord r;
  r.check = name;
  r.value = value;
  r.tolerance = bound;
  r.pass = std::isfinite(value) && value <= bound;
  return r;
}

CheckRecord check_flag(const std::string& name, double value, bool pass) {
  CheckRecord r;
  r.check = name;
  r.value = value;
  r.pass = pass;
  return r;
}

}  // namespace isoarea
