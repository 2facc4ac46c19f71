#include <impmc/common.hh>

#include <charconv>

namespace impmc
{
  const char*
  to_string(player p) noexcept
  {
    return p == player::sat ? "Sat" : "Unsat";
  }

  state_set
  make_set(std::size_t n, std::initializer_list<std::size_t> members)
  {
    state_set s(n);
    for (auto m: members)
      s.set(m);
    return s;
  }

  state_set
  full_set(std::size_t n)
  {
    state_set s(n);
    s.set();
    return s;
  }

  std::vector<std::size_t>
  members(const state_set& s)
  {
    std::vector<std::size_t> res;
    res.reserve(s.count());
    for (auto i = s.find_first(); i != state_set::npos; i = s.find_next(i))
      res.push_back(i);
    return res;
  }

  std::string
  to_string(const rational& q)
  {
    auto num = boost::multiprecision::numerator(q);
    auto den = boost::multiprecision::denominator(q);
    if (den == 1)
      return num.str();
    return num.str() + "/" + den.str();
  }

  std::string
  to_decimal(const rational& q, unsigned places)
  {
    bigint scale = 1;
    for (unsigned i = 0; i < places; ++i)
      scale *= 10;
    bool neg = q < 0;
    rational a = neg ? rational(-q) : q;
    bigint num = boost::multiprecision::numerator(a) * scale;
    bigint den = boost::multiprecision::denominator(a);
    bigint scaled = (2 * num + den) / (2 * den);
    bigint int_part = scaled / scale;
    bigint frac = scaled % scale;
    std::string frac_str = frac.str();
    if (frac_str.size() < places)
      frac_str.insert(0, places - frac_str.size(), '0');
    std::string res = (neg && scaled != 0) ? "-" : "";
    res += int_part.str();
    if (places > 0)
      res += "." + frac_str;
    return res;
  }

  namespace
  {
    bigint
    parse_integer(std::string_view digits, std::string_view whole)
    {
      if (digits.empty())
        throw input_error("malformed rational \"" + std::string(whole) + "\"");
      for (char c: digits)
        if (c < '0' || c > '9')
          throw input_error("malformed rational \""
                            + std::string(whole) + "\"");
      return bigint(std::string(digits));
    }
  }

  rational
  parse_rational(std::string_view text)
  {
    std::string_view t = text;
    while (!t.empty() && t.front() == ' ')
      t.remove_prefix(1);
    while (!t.empty() && t.back() == ' ')
      t.remove_suffix(1);
    bool neg = false;
    if (!t.empty() && (t.front() == '-' || t.front() == '+'))
      {
        neg = t.front() == '-';
        t.remove_prefix(1);
      }
    auto slash = t.find('/');
    bigint num = parse_integer(t.substr(0, slash), text);
    bigint den = 1;
    if (slash != std::string_view::npos)
      den = parse_integer(t.substr(slash + 1), text);
    if (den == 0)
      throw input_error("zero denominator in \"" + std::string(text) + "\"");
    rational q(num, den);
    return neg ? rational(-q) : q;
  }

  bigint
  factorial(unsigned n)
  {
    bigint r = 1;
    for (unsigned i = 2; i <= n; ++i)
      r *= i;
    return r;
  }
}
