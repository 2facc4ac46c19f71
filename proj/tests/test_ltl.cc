#include <doctest.h>

#include <random>

#include <impmc/ltl.hh>
#include <impmc/monitor.hh>

#include "ltl_oracle.hh"

using namespace impmc;
using L = ltl_formula;

TEST_CASE("ltl parsing")
{
  CHECK(parse_ltl("a U b") == L::until(L::prop("a"), L::prop("b")));
  CHECK(parse_ltl("GF check & FG !fail")
        == L::conj(L::always(L::eventually(L::prop("check"))),
                   L::eventually(L::always(L::negate(L::prop("fail"))))));
  CHECK(parse_ltl("G F a") == parse_ltl("GF a"));
  CHECK(parse_ltl("a -> X b") == L::disj(L::negate(L::prop("a")),
                                         L::next(L::prop("b"))));
  CHECK(parse_ltl("a U b U c") == L::until(L::prop("a"),
                                           L::until(L::prop("b"), L::prop("c"))));
  CHECK(parse_ltl("sv'") == L::prop("sv'"));
  CHECK(parse_ltl("0 U 4") == L::until(L::prop("0"), L::prop("4")));
  CHECK_THROWS_AS(parse_ltl("a U"), input_error);
  CHECK_THROWS_AS(parse_ltl("(a"), input_error);
  CHECK_THROWS_AS(parse_ltl("U b"), input_error);
  CHECK_THROWS_AS(parse_ltl("a b"), input_error);
  CHECK_THROWS_AS(parse_ltl("a $ b"), input_error);
}

TEST_CASE("fragment classification")
{
  CHECK(classify_ltl(parse_ltl("a U b")) == ltl_fragment::cosafe);
  CHECK(classify_ltl(parse_ltl("GF check & FG !fail")) == ltl_fragment::inf);
  CHECK(classify_ltl(parse_ltl("G(a -> F b)")) == ltl_fragment::unsupported);
  CHECK(classify_ltl(parse_ltl("G a")) == ltl_fragment::safe);
  CHECK(classify_ltl(parse_ltl("!(a U b)")) == ltl_fragment::safe);
  CHECK(classify_ltl(parse_ltl("!G a")) == ltl_fragment::cosafe);
  CHECK(classify_ltl(parse_ltl("a & !b")) == ltl_fragment::cosafe);
  CHECK(classify_ltl(parse_ltl("GF a | GF !a")) == ltl_fragment::inf);
  CHECK(classify_ltl(parse_ltl("FG false")) == ltl_fragment::inf);
  CHECK(classify_ltl(parse_ltl("!GF a")) == ltl_fragment::inf);
  CHECK(classify_ltl(parse_ltl("GF a & b")) == ltl_fragment::unsupported);
  CHECK(classify_ltl(parse_ltl("GF X a")) == ltl_fragment::unsupported);
}

TEST_CASE("inf fragment compilation")
{
  std::vector<std::string> states = {"ok", "check", "sv", "fail"};
  std::vector<std::set<std::string>> labels(4);
  auto el = compile_inf_fragment(parse_ltl("GF check & FG !fail"), states,
                                 labels);
  CHECK(el.formula == el_formula::conj(el_formula::inf(make_set(4, {1})),
                                       el_formula::negate(
                                         el_formula::inf(make_set(4, {3})))));

  labels = {{"a"}, {}, {"a"}, {}};
  auto taut = compile_inf_fragment(parse_ltl("GF a | GF !a"), states, labels);
  CHECK(taut.formula == el_formula::disj(el_formula::inf(make_set(4, {0, 2})),
                                         el_formula::inf(make_set(4, {1, 3}))));
  for (unsigned long l = 1; l < 16; ++l)
    CHECK(taut.formula.eval(state_set(4, l)));

  auto never = compile_inf_fragment(parse_ltl("FG false"), states, labels);
  CHECK(never.formula == el_formula::negate(el_formula::inf(full_set(4))));
  for (unsigned long l = 1; l < 16; ++l)
    CHECK_FALSE(never.formula.eval(state_set(4, l)));
}

TEST_CASE("inf fragment agrees with the trace semantics on lassos")
{
  const char* corpus[] = {
    "GF a", "FG !b", "GF a & FG !b", "GF (a & b) | FG a", "FG false",
    "GF a | GF !a", "!GF a", "GF a -> GF b", "(GF a & GF b) | FG (a <-> b)",
  };
  std::mt19937_64 rng(31);
  for (int iter = 0; iter < 40; ++iter)
    {
      std::size_t n = 4 + rng() % 3;
      std::vector<std::string> states;
      std::vector<std::set<std::string>> labels(n);
      successor_lists succ(n);
      for (std::size_t s = 0; s < n; ++s)
        {
          states.push_back("q" + std::to_string(s));
          if (rng() % 2) labels[s].insert("a");
          if (rng() % 2) labels[s].insert("b");
          for (std::size_t t = 0; t < n; ++t)
            if (rng() % 3 == 0)
              succ[s].push_back(t);
          if (succ[s].empty())
            succ[s].push_back(rng() % n);
        }
      for (auto text: corpus)
        {
          auto f = parse_ltl(text);
          REQUIRE(classify_ltl(f) == ltl_fragment::inf);
          auto el = compile_inf_fragment(f, states, labels);
          // All paths of length <= 8 from state 0, closed into lassos.
          std::vector<std::vector<std::size_t>> stack = {{0}};
          while (!stack.empty())
            {
              auto path = stack.back();
              stack.pop_back();
              for (std::size_t l = 0; l < path.size(); ++l)
                {
                  auto& last = succ[path.back()];
                  if (!std::binary_search(last.begin(), last.end(), path[l]))
                    continue;
                  state_set inf(n);
                  for (std::size_t i = l; i < path.size(); ++i)
                    inf.set(path[i]);
                  bool direct = oracle::holds_on_lasso(
                    f, path.size(), l, [&](const std::string& a, std::size_t i)
                    { return labels[path[i]].count(a) > 0; });
                  REQUIRE(el.formula.eval(inf) == direct);
                }
              if (path.size() < 8)
                for (auto t: succ[path.back()])
                  {
                    auto p = path;
                    p.push_back(t);
                    stack.push_back(std::move(p));
                  }
            }
        }
    }
}

namespace
{
  // Verdict of a finite word judged by its lasso extensions v.w^omega with
  // |v| + |w| <= ext: 1 all satisfy, -1 none does, 0 mixed.
  int
  prefix_verdict(const ltl_formula& f, const std::vector<std::string>& atoms,
                 const std::vector<std::size_t>& word, std::size_t ext)
  {
    std::size_t letters = std::size_t{1} << atoms.size();
    bool some_sat = false, some_unsat = false;
    std::vector<std::size_t> tail;
    std::function<void()> rec = [&]()
    {
      if (!tail.empty())
        for (std::size_t loop = 0; loop < tail.size(); ++loop)
          {
            auto w = word;
            w.insert(w.end(), tail.begin(), tail.end());
            bool v = oracle::holds_on_lasso(
              f, w.size(), word.size() + loop,
              [&](const std::string& a, std::size_t i)
              {
                auto k = std::find(atoms.begin(), atoms.end(), a) - atoms.begin();
                return ((w[i] >> k) & 1) != 0;
              });
            (v ? some_sat : some_unsat) = true;
          }
      if (tail.size() < ext)
        for (std::size_t l = 0; l < letters; ++l)
          {
            tail.push_back(l);
            rec();
            tail.pop_back();
          }
    };
    rec();
    return some_sat && !some_unsat ? 1 : (!some_sat ? -1 : 0);
  }

  bool
  is_sink(const monitor& m, std::size_t q)
  {
    return std::all_of(m.delta[q].begin(), m.delta[q].end(),
                       [&](std::size_t r) { return r == q; });
  }

  void
  check_monitor(const char* text, std::size_t max_word, std::size_t ext)
  {
    CAPTURE(text);
    auto f = parse_ltl(text);
    auto m = compile_monitor(f);
    std::size_t letters = m.num_letters();
    for (std::size_t q = 0; q < m.num_states(); ++q)
      {
        REQUIRE(m.delta[q].size() == letters);
        if (m.accepting[q])
          CHECK(is_sink(m, q));
      }
    std::vector<std::size_t> word;
    std::function<void()> rec = [&]()
    {
      int v = prefix_verdict(f, m.atoms, word, ext);
      auto q = m.run(word);
      bool acc = m.accepting[q];
      bool dead = !acc && is_sink(m, q);
      CAPTURE(word.size());
      if (m.pol == monitor::polarity::cosafe)
        {
          REQUIRE(acc == (v == 1));
          REQUIRE(dead == (v == -1));
        }
      else
        {
          REQUIRE(acc == (v == -1));
          REQUIRE(dead == (v == 1));
        }
      if (word.size() < max_word)
        for (std::size_t l = 0; l < letters; ++l)
          {
            word.push_back(l);
            rec();
            word.pop_back();
          }
    };
    rec();
  }
}

TEST_CASE("monitor shapes")
{
  auto aub = compile_monitor(parse_ltl("a U b"));
  CHECK(aub.num_states() == 3);
  CHECK(aub.atoms == std::vector<std::string>{"a", "b"});
  // Letters: bit0 = a, bit1 = b.
  auto acc = aub.delta[aub.init][2];
  CHECK(aub.accepting[acc]);
  CHECK(aub.delta[aub.init][3] == acc);
  CHECK(aub.delta[aub.init][1] == aub.init);
  auto rej = aub.delta[aub.init][0];
  CHECK_FALSE(aub.accepting[rej]);
  CHECK(is_sink(aub, rej));

  auto top = compile_monitor(parse_ltl("true"));
  CHECK(top.num_states() == 1);
  CHECK(top.accepting[0]);

  auto xb = compile_monitor(parse_ltl("X b"));
  CHECK(xb.num_states() == 4);
  CHECK_FALSE(xb.accepting[xb.init]);
  auto second = xb.delta[xb.init][0];
  CHECK(xb.delta[xb.init][1] == second);
  CHECK(xb.accepting[xb.delta[second][1]]);
  CHECK_FALSE(xb.accepting[xb.delta[second][0]]);

  CHECK(compile_monitor(parse_ltl("G a")).pol == monitor::polarity::safe);
  CHECK_THROWS_AS(compile_monitor(parse_ltl("GF a")), input_error);
  CHECK_THROWS_AS(compile_monitor(parse_ltl("F (a & X b & X X a)"), 3),
                  cap_exceeded);
}

TEST_CASE("monitor verdicts match the prefix semantics")
{
  check_monitor("a U b", 6, 3);
  check_monitor("X b", 6, 3);
  const char* corpus[] = {
    "true", "false", "a & !b", "F a & F b", "a U (b U a)", "X (a | X b)",
    "F (a & X b)", "(a U b) | X X !a", "X a | X !a",
    "G a", "a R b", "G (a -> X b)", "X G !b", "G a | G b", "!(a U b)",
    "G (a | b) & X !a",
  };
  for (auto text: corpus)
    check_monitor(text, 4, 4);
}

TEST_CASE("product construction")
{
  kripke k;
  k.states = {"0", "1", "2", "3", "4"};
  k.atomic_props = {"a", "b"};
  k.labels = {{"a"}, {"a"}, {"a"}, {}, {"b"}};
  k.succ = {{1}, {0, 2, 3}, {1, 3, 4}, {1, 4}, {4}};
  auto m = compile_monitor(parse_ltl("a U b"));
  auto p = product_game(k, m);
  CHECK(validate(p.system).empty());
  REQUIRE(p.cond.is<reachability>());
  // Every copy projects onto an existing state with matching successors.
  for (std::size_t i = 0; i < p.projection.size(); ++i)
    {
      std::set<std::size_t> proj;
      for (auto j: p.system.succ[i])
        proj.insert(p.projection[j]);
      auto& orig = k.succ[p.projection[i]];
      CHECK(proj == std::set<std::size_t>(orig.begin(), orig.end()));
    }
  auto lifted = lift_partition(default_partition(k.states), p.projection);
  CHECK(lifted.size() == 5);
  for (std::size_t i = 0; i < 5; ++i)
    for (auto s: lifted.parts[i])
      CHECK(p.projection[s] == i);
}
