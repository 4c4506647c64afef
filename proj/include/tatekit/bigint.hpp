#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "tatekit/error.hpp"

namespace tatekit {

using Int = boost::multiprecision::cpp_int;
using IntVector = std::vector<Int>;

inline Int parse_int(std::string_view text) {
  if (text.empty()) throw Error(ErrorCode::ParseError, "empty integer literal");
  std::size_t i = 0;
  bool negative = false;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    i = 1;
  }
  if (i == text.size()) throw Error(ErrorCode::ParseError, "bad integer literal '" + std::string(text) + "'");
  Int value = 0;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (c < '0' || c > '9') throw Error(ErrorCode::ParseError, "bad integer literal '" + std::string(text) + "'");
    value = value * 10 + (c - '0');
  }
  return negative ? Int(-value) : value;
}

inline std::string to_string(const Int& v) { return v.str(); }

inline Int abs(const Int& v) { return v < 0 ? Int(-v) : v; }

// Non-negative gcd; gcd(0, 0) == 0.
inline Int gcd(Int a, Int b) {
  a = abs(a);
  b = abs(b);
  while (b != 0) {
    Int t = a % b;
    a = std::move(b);
    b = std::move(t);
  }
  return a;
}

inline Int lcm(const Int& a, const Int& b) {
  if (a == 0 || b == 0) return 0;
  return abs(a / gcd(a, b) * b);
}

// Representative of a mod m in [0, |m|). m must be nonzero.
inline Int floor_mod(const Int& a, const Int& m) {
  Int r = a % m;
  if (r < 0) r += abs(m);
  return r;
}

inline Int pow(const Int& base, std::uint64_t exp) {
  Int result = 1;
  Int b = base;
  while (exp > 0) {
    if (exp & 1u) result *= b;
    exp >>= 1u;
    if (exp > 0) b *= b;
  }
  return result;
}

inline std::vector<std::string> to_strings(const IntVector& v) {
  std::vector<std::string> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(x.str());
  return out;
}

}  // namespace tatekit
