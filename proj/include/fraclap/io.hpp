#pragma once

#include <string>

namespace fraclap {

/// Writes to a sibling temporary file, then renames it over path.
void write_file_atomic(const std::string& path, const std::string& contents);

/// printf-style "%.17g" rendering; round-trips doubles exactly.
std::string format_exact(double v);

}  // namespace fraclap
