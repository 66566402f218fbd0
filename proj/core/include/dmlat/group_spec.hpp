#ifndef DMLAT_GROUP_SPEC_HPP
#define DMLAT_GROUP_SPEC_HPP

#include <stdexcept>
#include <string>
#include <string_view>

#include "dmlat/abelian.hpp"

namespace dmlat {

class spec_parse_error : public std::runtime_error {
 public:
  explicit spec_parse_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Parses a group spec like "Z4xZ8", "Z2^2 x Z3^2" or "Z12".
/// Grammar: atoms `Z<m>` (case-insensitive, m >= 1, 64-bit), `x` or `*` as
/// the direct-product operator, an optional `^k` exponent on an atom, and
/// arbitrary whitespace. Composite moduli are split into prime-power cyclic
/// factors before canonicalization; Z1 contributes nothing.
GroupType parse_group_spec(std::string_view text);

/// Canonical spelling ("Z2 x Z4^3"); parsing it again gives the same type.
std::string format_group_spec(const GroupType& t);

}  // namespace dmlat

#endif
