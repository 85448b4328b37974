#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace fraclap {

/// Machine-checkable verdict of one property check. passed <=> worst_violation <= tolerance.
struct PropertyReport {
  std::string name;
  bool passed = false;
  double worst_violation = 0.0;
  std::optional<std::size_t> violation_node;
  double tolerance = 0.0;
  std::string context;
};

PropertyReport make_report(std::string name, double worst_violation, std::optional<std::size_t> node,
                           double tolerance, std::string context);

/// One line: name, pass|fail, worst_violation, node (or -), tolerance, context; tab separated.
std::string format_report(const PropertyReport& report);
PropertyReport parse_report(const std::string& line);

std::string format_reports(const std::vector<PropertyReport>& reports);

}  // namespace fraclap
