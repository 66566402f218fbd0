#include "dmlat/group_spec.hpp"

#include <cctype>
#include <vector>

namespace dmlat {

namespace {

struct Cursor {
  std::string_view s;
  size_t i = 0;

  void skip_ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool done() {
    skip_ws();
    return i >= s.size();
  }
  char peek() { return s[i]; }

  uint64_t number() {
    skip_ws();
    if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i]))) {
      throw spec_parse_error("group spec: expected a number at position " + std::to_string(i));
    }
    uint64_t v = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      uint64_t d = static_cast<uint64_t>(s[i] - '0');
      if (v > (UINT64_MAX - d) / 10) {
        throw spec_parse_error("group spec: number too large for 64 bits");
      }
      v = v * 10 + d;
      ++i;
    }
    return v;
  }
};

}  // namespace

GroupType parse_group_spec(std::string_view text) {
  Cursor c{text};
  std::vector<std::pair<uint64_t, uint32_t>> factors;
  bool first = true;
  while (!c.done()) {
    if (!first) {
      char op = c.peek();
      if (op != 'x' && op != 'X' && op != '*') {
        throw spec_parse_error(std::string("group spec: expected 'x' or '*', got '") + op + "'");
      }
      ++c.i;
      c.skip_ws();
    }
    first = false;
    if (c.done() || (c.peek() != 'Z' && c.peek() != 'z')) {
      throw spec_parse_error("group spec: expected an atom 'Z<m>'");
    }
    ++c.i;
    uint64_t m = c.number();
    if (m == 0) throw spec_parse_error("group spec: Z0 is not a group");
    uint64_t rep = 1;
    c.skip_ws();
    if (!c.done() && c.peek() == '^') {
      ++c.i;
      rep = c.number();
      if (rep > 64) throw spec_parse_error("group spec: exponent too large");
    }
    if (m == 1) continue;  // trivial factor
    auto pf = factor_u64(m);
    for (uint64_t k = 0; k < rep; ++k) {
      for (auto [p, e] : pf) factors.emplace_back(p, e);
    }
  }
  return canonicalize(factors);
}

std::string format_group_spec(const GroupType& t) { return to_string(t); }

}  // namespace dmlat
