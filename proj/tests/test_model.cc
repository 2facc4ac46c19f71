#include <doctest.h>

#include <random>

#include <impmc/model.hh>

using namespace impmc;

namespace
{
  model
  fig(const char* name)
  {
    return load_model(std::string(IMPMC_MODELS_DIR) + "/" + name + ".json");
  }

  kripke
  random_kripke(std::mt19937_64& rng, std::size_t n)
  {
    kripke k;
    for (std::size_t i = 0; i < n; ++i)
      k.states.push_back("q" + std::to_string(i));
    k.succ.resize(n);
    k.labels.resize(n);
    for (std::size_t i = 0; i < n; ++i)
      {
        for (std::size_t j = 0; j < n; ++j)
          if (rng() % 3 == 0)
            k.succ[i].push_back(j);
        if (k.succ[i].empty())
          k.succ[i].push_back(rng() % n);
        if (rng() % 2)
          k.labels[i].insert("a");
        if (rng() % 2)
          k.labels[i].insert("b");
        k.atomic_props.insert(k.labels[i].begin(), k.labels[i].end());
      }
    k.init = rng() % n;
    return k;
  }
}

TEST_CASE("bundled models parse")
{
  auto f2 = fig("fig2");
  CHECK_FALSE(f2.is_mts());
  CHECK(f2.as_kripke().num_states() == 5);
  CHECK(f2.as_kripke().num_transitions() == 10);
  CHECK(f2.as_kripke().labels[3].empty());
  CHECK(f2.as_kripke().labels[4] == std::set<std::string>{"b"});

  auto f3 = fig("fig3");
  CHECK(f3.as_kripke().num_transitions() == 11);
  CHECK(validate(f3).empty());

  auto f5 = fig("fig5");
  REQUIRE(f5.is_mts());
  CHECK(f5.as_mts().num_states() == 7);
  CHECK(f5.as_mts().must[0] == std::vector<std::size_t>{1, 4});
  CHECK(f5.as_mts().may[0] == std::vector<std::size_t>{1, 4, 5});
}

TEST_CASE("minimal model")
{
  auto m = parse_model(R"({"type":"kripke","states":["s"],"init":"s",
                           "transitions":[["s","s"]]})");
  CHECK(m.as_kripke().num_states() == 1);
  CHECK(m.parts.size() == 1);
  CHECK(validate(m).empty());
}

TEST_CASE("default partition")
{
  auto m = fig("fig1_right");
  auto p = default_partition(m);
  CHECK(p.names == std::vector<std::string>{"ok", "check", "sv", "sv'", "fail"});
  for (std::size_t i = 0; i < p.size(); ++i)
    CHECK(p.parts[i] == std::vector<std::size_t>{i});
  CHECK(m.parts == p);
}

TEST_CASE("validation violations")
{
  kripke k;
  k.states = {"q0", "q3"};
  k.succ = {{1}, {}};
  k.labels.resize(2);
  auto v = validate(k);
  REQUIRE(v.size() == 1);
  CHECK(v[0] == "state q3 has no successor");

  mts m;
  m.states = {"p"};
  m.must = {{}};
  m.may = {{0}};
  m.labels.resize(1);
  CHECK(validate(m).size() == 1);

  m.must = {{0}};
  m.may = {{}};
  auto w = validate(m);
  REQUIRE(w.size() == 1);
  CHECK(w[0].find("must") != std::string::npos);
}

TEST_CASE("parse errors")
{
  CHECK_THROWS_AS(parse_model("{ \"type\": "), input_error);
  try
    {
      parse_model(R"({"type":"kripke","states":["a","b"],"init":"a",
                      "transitions":[["a","b"]]})");
      FAIL("expected rejection");
    }
  catch (const input_error& e)
    {
      CHECK(std::string(e.what()).find("state b has no successor")
            != std::string::npos);
    }
  CHECK_THROWS_AS(parse_model(R"({"type":"kripke","states":["a"],"init":"z",
                                  "transitions":[["a","a"]]})"), input_error);
  CHECK_THROWS_AS(parse_model(R"({"type":"kripke","states":["a","a"],
                                  "init":"a","transitions":[["a","a"]]})"),
                  input_error);
  CHECK_THROWS_AS(parse_model(R"({"type":"kripke","states":["a","b"],
                                  "init":"a","transitions":[["a","a"],["b","b"]],
                                  "partition":{"P":["a"]}})"), input_error);
}

TEST_CASE("render/parse round trip on random models")
{
  std::mt19937_64 rng(7);
  for (int iter = 0; iter < 200; ++iter)
    {
      std::size_t n = 1 + rng() % 7;
      model m{random_kripke(rng, n), {}};
      if (iter % 2)
        {
          auto& k = std::get<kripke>(m.system);
          mts t;
          t.states = k.states;
          t.atomic_props = k.atomic_props;
          t.init = k.init;
          t.labels = k.labels;
          t.may = k.succ;
          t.must.resize(n);
          for (std::size_t s = 0; s < n; ++s)
            t.must[s].push_back(k.succ[s].front());
          m.system = t;
        }
      m.parts = default_partition(m);
      if (n > 2 && iter % 3 == 0)
        {
          m.parts.names = {"L", "R"};
          m.parts.parts = {{0, 1}, {}};
          for (std::size_t s = 2; s < n; ++s)
            m.parts.parts[1].push_back(s);
        }
      REQUIRE(validate(m).empty());
      CHECK(parse_model(render_model(m)) == m);

      auto p = default_partition(m);
      CHECK(p.size() == n);
      CHECK(p.states_of(coalition(n).set(), n).count() == n);
    }
}

TEST_CASE("mutated documents are rejected exactly when invalid")
{
  std::mt19937_64 rng(11);
  for (int iter = 0; iter < 200; ++iter)
    {
      std::size_t n = 2 + rng() % 5;
      auto k = random_kripke(rng, n);
      // Drop all successors of one state half the time.
      bool broken = rng() % 2;
      if (broken)
        k.succ[rng() % n].clear();
      model m{k, default_partition(k.states)};
      CHECK(validate(m).empty() == !broken);
      if (broken)
        CHECK_THROWS_AS(parse_model(render_model(m)), input_error);
    }
}

TEST_CASE("coalition parsing")
{
  auto m = fig("fig1_left");
  auto c = parse_coalition("ok,sv", m.parts);
  CHECK(c.count() == 2);
  CHECK(c.test(0));
  CHECK(c.test(2));
  CHECK(parse_coalition("", m.parts).none());
  CHECK_THROWS_AS(parse_coalition("nope", m.parts), input_error);
}
