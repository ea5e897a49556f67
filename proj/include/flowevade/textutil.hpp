#pragma once

#include <string>
#include <vector>

namespace flowevade {

std::vector<std::string> split_csv_line(const std::string& line);
std::string trim(const std::string& s);
std::string to_lower(std::string s);
/// Lowercase, collapse runs of spaces/underscores/dashes to single spaces.
std::string normalize_token(const std::string& s);
bool parse_double(const std::string& s, double& out);

/// FNV-1a 64-bit hex digest; stable across runs and platforms, used to name
/// run directories and pin configs inside reports.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace flowevade
