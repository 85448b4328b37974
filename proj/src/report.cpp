#include "fraclap/report.hpp"

#include <algorithm>
#include <sstream>

#include "fraclap/error.hpp"
#include "fraclap/io.hpp"

namespace fraclap {

PropertyReport make_report(std::string name, double worst_violation, std::optional<std::size_t> node,
                           double tolerance, std::string context) {
  std::replace(context.begin(), context.end(), '\t', ' ');
  std::replace(context.begin(), context.end(), '\n', ' ');
  PropertyReport r;
  r.name = std::move(name);
  r.worst_violation = worst_violation;
  r.tolerance = tolerance;
  r.passed = worst_violation <= tolerance;
  r.violation_node = node;
  r.context = std::move(context);
  return r;
}

std::string format_report(const PropertyReport& report) {
  std::ostringstream out;
  out << report.name << '\t' << (report.passed ? "pass" : "fail") << '\t' << format_exact(report.worst_violation)
      << '\t';
  if (report.violation_node) {
    out << *report.violation_node;
  } else {
    out << '-';
  }
  out << '\t' << format_exact(report.tolerance) << '\t' << report.context;
  return out.str();
}

PropertyReport parse_report(const std::string& line) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (int k = 0; k < 5; ++k) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) throw ValidationError("malformed report line: " + line);
    parts.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  parts.push_back(line.substr(start));
  PropertyReport r;
  r.name = parts[0];
  if (parts[1] != "pass" && parts[1] != "fail") throw ValidationError("malformed report verdict: " + parts[1]);
  r.passed = parts[1] == "pass";
  r.worst_violation = std::stod(parts[2]);
  if (parts[3] != "-") r.violation_node = std::stoull(parts[3]);
  r.tolerance = std::stod(parts[4]);
  r.context = parts[5];
  return r;
}

std::string format_reports(const std::vector<PropertyReport>& reports) {
  std::string out;
  for (const auto& r : reports) out += format_report(r) + '\n';
  return out;
}

}  // namespace fraclap
