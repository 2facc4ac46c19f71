#include <doctest.h>

#include <functional>
#include <random>

#include <impmc/ctl.hh>

using namespace impmc;
using C = ctl_formula;

namespace
{
  // Memoization-free recursive semantics.  Until formulas explore simple
  // paths: revisiting a state on the current path closes a cycle.
  bool
  naive(const kripke& k, const C& f, std::size_t s)
  {
    using op = C::op;
    switch (f.kind)
      {
      case op::tt: return true;
      case op::ff: return false;
      case op::atom: return k.holds(f.atom, s);
      case op::neg: return !naive(k, f.args[0], s);
      case op::conj: return naive(k, f.args[0], s) && naive(k, f.args[1], s);
      case op::disj: return naive(k, f.args[0], s) || naive(k, f.args[1], s);
      case op::ex:
        for (auto t: k.succ[s])
          if (naive(k, f.args[0], t))
            return true;
        return false;
      case op::eu:
      case op::au:
        {
          bool universal = f.kind == op::au;
          std::vector<bool> on_path(k.num_states());
          std::function<bool(std::size_t)> rec = [&](std::size_t u)
          {
            if (naive(k, f.args[1], u))
              return true;
            if (!naive(k, f.args[0], u))
              return false;
            on_path[u] = true;
            bool res = universal;
            for (auto t: k.succ[u])
              {
                bool r = !on_path[t] && rec(t);
                if (universal && !r) { res = false; break; }
                if (!universal && r) { res = true; break; }
              }
            on_path[u] = false;
            return res;
          };
          return rec(s);
        }
      }
    return false;
  }

  C
  random_ctl(std::mt19937_64& rng, int depth)
  {
    if (depth == 0 || rng() % 5 == 0)
      switch (rng() % 6)
        {
        case 0: return C::truth(rng() % 2);
        case 1: case 2: return C::prop("a");
        default: return C::prop("b");
        }
    auto sub = [&]() { return random_ctl(rng, depth - 1); };
    switch (rng() % 11)
      {
      case 0: return C::negate(sub());
      case 1: return C::conj(sub(), sub());
      case 2: return C::disj(sub(), sub());
      case 3: return C::ex(sub());
      case 4: return C::eu(sub(), sub());
      case 5: return C::au(sub(), sub());
      case 6: return C::ax(sub());
      case 7: return C::ef(sub());
      case 8: return C::af(sub());
      case 9: return C::eg(sub());
      default: return C::ag(sub());
      }
  }

  kripke
  fig8_induced()
  {
    kripke k;
    k.states = {"0", "1", "2", "3"};
    k.atomic_props = {"a", "b", "c"};
    k.labels = {{}, {"a"}, {"b"}, {"c"}};
    k.succ = {{1}, {3}, {2}, {3}};
    return k;
  }
}

TEST_CASE("ctl parsing")
{
  auto a = C::prop("a"), b = C::prop("b");
  CHECK(parse_ctl("A (EF a) U b") == C::au(C::ef(a), b));
  CHECK(parse_ctl("AG (a => EX(EF b))")
        == C::ag(C::disj(C::negate(a), C::ex(C::ef(b)))));
  CHECK(parse_ctl("A a U b") == C::au(a, b));
  CHECK(parse_ctl("A[a U b]") == C::au(a, b));
  CHECK(parse_ctl("A(a U b)") == C::au(a, b));
  CHECK(parse_ctl("E [a U b]") == C::eu(a, b));
  CHECK(parse_ctl("EXEF a") == C::ex(C::ef(a)));
  CHECK(parse_ctl("E X E F a") == C::ex(C::ef(a)));
  CHECK(parse_ctl("A G a") == C::ag(a));
  CHECK(parse_ctl("EG a") == C::negate(C::au(C::truth(true), C::negate(a))));
  CHECK(parse_ctl("AX a & EX EX c")
        == C::conj(C::ax(a), C::ex(C::ex(C::prop("c")))));
  CHECK(parse_ctl("E[a R b]") == C::negate(C::au(C::negate(a), C::negate(b))));
  CHECK(parse_ctl("A[a R b]") == C::negate(C::eu(C::negate(a), C::negate(b))));
  CHECK(parse_ctl("a -> b") == C::disj(C::negate(a), b));
  CHECK_THROWS_AS(parse_ctl("a U b"), input_error);
  CHECK_THROWS_AS(parse_ctl("EF"), input_error);
  CHECK_THROWS_AS(parse_ctl("A a"), input_error);
  CHECK_THROWS_AS(parse_ctl("E[a U b"), input_error);
  CHECK_THROWS_AS(parse_ctl("EX a b"), input_error);
  CHECK_THROWS_AS(parse_ctl("F a"), input_error);
  CHECK_THROWS_AS(parse_ctl("!(a U b)"), input_error);
}

TEST_CASE("ctl basic checks")
{
  kripke one;
  one.states = {"s"};
  one.atomic_props = {"a", "b"};
  one.labels = {{"b"}};
  one.succ = {{0}};
  CHECK(check_ctl(one, parse_ctl("A a U b")));
  CHECK(check_ctl(one, C::truth(true)));
  CHECK_FALSE(check_ctl(one, parse_ctl("EF a")));
  CHECK(check_ctl(one, parse_ctl("AG s")));   // state names are atoms
  CHECK_THROWS_AS(check_ctl(one, parse_ctl("EF zz")), input_error);

  auto k = fig8_induced();
  CHECK(check_ctl(k, parse_ctl("AX a & EX EX c")));
  CHECK_FALSE(check_ctl(k, parse_ctl("EX(b & EX c)")));
}

TEST_CASE("checker agrees with the naive evaluator")
{
  std::mt19937_64 rng(17);
  for (int iter = 0; iter < 300; ++iter)
    {
      kripke k;
      std::size_t n = 5;
      k.atomic_props = {"a", "b"};
      k.labels.resize(n);
      k.succ.resize(n);
      for (std::size_t s = 0; s < n; ++s)
        {
          k.states.push_back("q" + std::to_string(s));
          if (rng() % 2) k.labels[s].insert("a");
          if (rng() % 2) k.labels[s].insert("b");
          for (std::size_t t = 0; t < n; ++t)
            if (rng() % 3 == 0)
              k.succ[s].push_back(t);
          if (k.succ[s].empty())
            k.succ[s].push_back(rng() % n);
        }
      for (int j = 0; j < 10; ++j)
        {
          auto f = random_ctl(rng, 4);
          ctl_checker chk(f);
          auto sat = chk.sat(k.succ, chk.bind(k.states, k.atomic_props,
                                               k.labels));
          for (std::size_t s = 0; s < n; ++s)
            {
              CAPTURE(to_string(f));
              REQUIRE(sat.test(s) == naive(k, f, s));
            }
        }
    }
}

TEST_CASE("to_string output reparses")
{
  std::mt19937_64 rng(4);
  for (int i = 0; i < 200; ++i)
    {
      auto f = random_ctl(rng, 4);
      CHECK(parse_ctl(to_string(f)) == f);
    }
}
