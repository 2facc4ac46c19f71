#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/dynamic_bitset.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace impmc
{
  /// Sets of states (or of partition parts), indexed by position.
  using state_set = boost::dynamic_bitset<>;
  /// A coalition is a set of partition-part indices owned by Sat.
  using coalition = boost::dynamic_bitset<>;

  using bigint = boost::multiprecision::cpp_int;
  using rational = boost::multiprecision::cpp_rational;

  /// Malformed or invalid user input (documents, formulas, flags).
  class input_error : public std::runtime_error
  {
  public:
    using std::runtime_error::runtime_error;
  };

  /// A configured resource cap was hit (strategy space, LAR blowup, ...).
  class cap_exceeded : public std::runtime_error
  {
  public:
    using std::runtime_error::runtime_error;
  };

  enum class player : std::uint8_t { sat = 0, unsat = 1 };

  constexpr player
  opponent(player p) noexcept
  {
    return p == player::sat ? player::unsat : player::sat;
  }

  const char* to_string(player p) noexcept;

  state_set make_set(std::size_t n, std::initializer_list<std::size_t> members);
  state_set full_set(std::size_t n);
  std::vector<std::size_t> members(const state_set& s);

  /// "p/q", or "p" when the denominator is one.
  std::string to_string(const rational& q);
  /// Decimal rendering rounded half-up to \a places digits.
  std::string to_decimal(const rational& q, unsigned places = 6);
  /// Parses "p/q", "p" or "-p/q"; throws input_error.
  rational parse_rational(std::string_view text);

  bigint factorial(unsigned n);
}
