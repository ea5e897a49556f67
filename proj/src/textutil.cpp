#include "flowevade/textutil.hpp"

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>

namespace flowevade {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string to_lower(std::string s) {
  for (char& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return s;
}

std::string normalize_token(const std::string& s) {
  std::string out;
  bool pending_sep = false;
  for (char raw : trim(s)) {
    const auto ch = static_cast<unsigned char>(raw);
    if (ch == ' ' || ch == '_' || ch == '-' || ch == '\t') {
      pending_sep = !out.empty();
      continue;
    }
    if (!std::isprint(ch)) continue;  // strips mojibake bytes seen in some exports
    if (pending_sep) {
      out.push_back(' ');
      pending_sep = false;
    }
    out.push_back(static_cast<char>(std::tolower(ch)));
  }
  return out;
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[h & 0xF];
    h >>= 4;
  }
  return out;
}

bool parse_double(const std::string& raw, double& out) {
  const std::string s = trim(raw);
  if (s.empty()) return false;
  const std::string low = to_lower(s);
  if (low == "inf" || low == "infinity" || low == "+inf" || low == "+infinity") {
    out = std::numeric_limits<double>::infinity();
    return true;
  }
  if (low == "-inf" || low == "-infinity") {
    out = -std::numeric_limits<double>::infinity();
    return true;
  }
  if (low == "nan") {
    out = std::numeric_limits<double>::quiet_NaN();
    return true;
  }
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) return false;
  out = v;
  return true;
}

}  // namespace flowevade
