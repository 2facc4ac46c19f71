// End-to-end acceptance run: one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include <impmc/branching.hh>
#include <impmc/concurrent.hh>
#include <impmc/shapley.hh>
#include <impmc/solve.hh>
#include <impmc/spec.hh>

#include "random_models.hh"

using namespace impmc;

namespace
{
  using clock_type = std::chrono::steady_clock;

  model
  fixture(const std::string& name)
  {
    return load_model(std::string(IMPMC_MODELS_DIR) + "/" + name + ".json");
  }

  std::vector<rational>
  values(const importance_report& r)
  {
    std::vector<rational> v;
    for (auto& p: r.parts)
      v.push_back(p.importance);
    return v;
  }

  std::vector<rational>
  q(std::initializer_list<const char*> xs)
  {
    std::vector<rational> v;
    for (auto x: xs)
      v.push_back(parse_rational(x));
    return v;
  }

  std::string
  show(const std::vector<rational>& v)
  {
    std::string out = "(";
    for (auto& x: v)
      out += (out.size() > 1 ? ", " : "") + to_string(x);
    return out + ")";
  }

  rational_oracle
  lift(const binary_oracle& v)
  {
    return [v](const coalition& c) { return rational(v(c) ? 1 : 0); };
  }

  importance_report
  linear(const model& m, const std::string& spec)
  {
    auto g = prepare_linear_game(m, parse_spec(spec, m));
    return importance_exact(m.parts.size(), game_oracle(g), m.parts.names,
                            prune_forced_parts(m));
  }

  binary_oracle
  oracle_of(const model& m, const winning_condition& c)
  {
    linear_game g;
    g.system = m.as_kripke();
    g.cond = c;
    g.parts = m.parts;
    return game_oracle(g);
  }

  winning_condition
  cond_of(std::size_t n, winning_condition::variant_type v)
  {
    winning_condition c;
    c.num_states = n;
    c.cond = std::move(v);
    return c;
  }

  // Collects failures of one criterion.
  struct check_log
  {
    std::size_t checks = 0;
    std::vector<std::string> failures;

    void
    expect(bool ok, const std::string& what)
    {
      ++checks;
      if (!ok && failures.size() < 5)
        failures.push_back(what);
      else if (!ok)
        failures.back() = "... more failures";
    }
  };

  const char* two_server_el = "el: Inf({check}) & !Inf({fail})";
  const char* two_server_ltl = "ltl: GF check & FG !fail";
  const char* fig5_spec = "A (EF a) U b";
  const char* fig6_spec = "AG (a -> EX(EF b))";
  const char* fig8_spec =
    "(EX(b & EX c) & AX(!c & !(a & EX c))) | (AX a & EX EX c)"
    " | (EX c & EX(b & EX c) & EX(a & EX c))";

  // ---------------------------------------------------------------------

  void
  golden_two_server(check_log& log)
  {
    for (auto spec: {two_server_el, two_server_ltl})
      {
        auto l = values(linear(fixture("fig1_left"), spec));
        log.expect(l == q({"1/2", "0", "1/2", "0"}),
                   std::string("fig1 left ") + spec + " " + show(l));
        auto r = values(linear(fixture("fig1_right"), spec));
        log.expect(r == q({"1/2", "1/6", "1/6", "1/6", "0"}),
                   std::string("fig1 right ") + spec + " " + show(r));
      }
  }

  void
  golden_cosafe(check_log& log)
  {
    auto a = values(linear(fixture("fig2"), "ltl: a U b"));
    log.expect(a == q({"0", "1/2", "1/2", "0", "0"}), "fig2 " + show(a));
    auto b = values(linear(fixture("fig3"), "ltl: a U b"));
    log.expect(b == q({"1/6", "1/6", "2/3", "0", "0"}), "fig3 " + show(b));
  }

  void
  golden_two_turn(check_log& log)
  {
    auto run = [](const char* name, const char* f)
    {
      auto m = fixture(name);
      return values(importance_exact(m.parts.size(),
                                     two_turn_oracle(m, parse_ctl(f)),
                                     m.parts.names, prune_forced_parts(m)));
    };
    auto a = run("fig5", fig5_spec);
    log.expect(a == q({"1/12", "1/4", "7/12", "0", "0", "1/12", "0"}),
               "fig5 " + show(a));
    auto b = run("fig6", fig6_spec);
    log.expect(b == q({"1/3", "0", "0", "1/3", "1/3"}), "fig6 " + show(b));
    auto c = run("fig8", fig8_spec);
    log.expect(c == q({"1/2", "1/2", "0", "0"}), "fig8 " + show(c));
  }

  void
  golden_concurrent(check_log& log)
  {
    auto m = fixture("fig8");
    auto f = parse_ctl(fig8_spec);
    auto r = values(importance_fractional(m.parts.size(),
                                          concurrent_oracle(m, f),
                                          m.parts.names,
                                          prune_forced_parts(m)));
    log.expect(r == q({"7/12", "1/3", "1/12", "0"}), "fig8 " + show(r));
    // Sat owns states 0 and 2, Unsat the other two.
    auto sub = concurrent_value(m.as_mts(), f, state_set(4, 0b0101));
    log.expect(sub == rational(1, 2), "sub-game value " + to_string(sub));
  }

  // ---------------------------------------------------------------------

  void
  identity_suite(check_log& log)
  {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 300; ++i)
      {
        std::size_t n = 4 + rng() % 4;
        auto m = testgen::random_kripke(rng, n, true);
        auto c = testgen::random_loop_condition(rng, n, i);
        std::string tag = "instance " + std::to_string(i) + ": ";
        auto v = oracle_of(m, c);
        std::size_t parts = m.parts.size();
        auto forced = prune_forced_parts(m);
        auto r = importance_exact(parts, v, m.parts.names, forced);

        rational sum;
        for (auto& p: r.parts)
          sum += p.importance;
        log.expect(sum == r.val_full - r.val_empty, tag + "telescope");

        auto k = m.as_kripke();
        auto vc = oracle_of(m, complement(c, &k.succ));
        log.expect(values(importance_exact(parts, vc, m.parts.names, forced))
                   == values(r), tag + "complement invariance");

        log.expect(values(r) == importance_brute_oracle(parts, lift(v)),
                   tag + "restriction to useful parts");

        // Whenever no winning coalition holds s without t, I(s) <= I(t).
        for (std::size_t s = 0; s < parts; ++s)
          for (std::size_t t = 0; t < parts; ++t)
            {
              if (s == t)
                continue;
              bool needs = true;
              for (std::uint32_t mask = 0; mask < (1u << parts) && needs;
                   ++mask)
                if (((mask >> s) & 1) && !((mask >> t) & 1))
                  needs = !v(coalition(parts, mask));
              if (needs)
                log.expect(r.parts[s].importance <= r.parts[t].importance,
                           tag + "ordering of dependent parts");
            }
      }
  }

  // ---------------------------------------------------------------------

  void
  compare_solvers(check_log& log, const arena& a, const winning_condition& c,
                  const std::string& tag)
  {
    solve_options direct, generic;
    direct.verify = generic.verify = false;
    generic.force_generic = true;
    auto d = solve_game(a, c, direct);
    auto g = solve_game(a, c, generic);
    log.expect(d.win_sat == g.win_sat, tag + "regions differ");
    log.expect(!d.win_sat.intersects(d.win_unsat)
               && (d.win_sat | d.win_unsat).count() == a.num_states(),
               tag + "regions do not partition the arena");
    log.expect(verify_strategy(a, c, d), tag + "specialised strategy");
    log.expect(verify_strategy(a, c, g), tag + "generic strategy");
  }

  std::vector<winning_condition>
  conditions_for(std::mt19937_64& rng, std::size_t n)
  {
    std::vector<winning_condition> out;
    out.push_back(cond_of(n, buchi{testgen::random_set(rng, n)}));
    out.push_back(cond_of(n, co_buchi{testgen::random_set(rng, n)}));
    parity p{std::vector<unsigned>(n)};
    for (auto& x: p.priority)
      x = rng() % 5;
    out.push_back(cond_of(n, p));
    return out;
  }

  void
  differential_suite(check_log& log)
  {
    // Fixed graph corpus: every graph on up to three states, then seeded
    // graphs on four and five states, each under every ownership.
    std::mt19937_64 rng(17);
    std::vector<successor_lists> corpus;
    for (std::size_t n = 1; n <= 3; ++n)
      {
        std::size_t nsets = (1ul << n) - 1, shapes = 1;
        for (std::size_t i = 0; i < n; ++i)
          shapes *= nsets;
        for (std::size_t shape = 0; shape < shapes; ++shape)
          {
            successor_lists succ(n);
            std::size_t code = shape;
            for (std::size_t s = 0; s < n; ++s)
              {
                std::size_t mask = code % nsets + 1;
                code /= nsets;
                for (std::size_t t = 0; t < n; ++t)
                  if ((mask >> t) & 1)
                    succ[s].push_back(t);
              }
            corpus.push_back(succ);
          }
      }
    for (std::size_t n = 4; n <= 5; ++n)
      for (int i = 0; i < 100; ++i)
        corpus.push_back(testgen::random_succ(rng, n));

    std::size_t index = 0;
    for (auto& succ: corpus)
      {
        std::size_t n = succ.size();
        for (std::size_t own = 0; own < (1ul << n); ++own)
          {
            auto a = build_arena(succ, state_set(n, own), 0);
            for (auto& c: conditions_for(rng, n))
              compare_solvers(log, a, c, "corpus graph "
                              + std::to_string(index) + ": ");
          }
        ++index;
      }

    for (int i = 0; i < 500; ++i)
      {
        std::size_t n = 6 + rng() % 3;
        auto a = build_arena(testgen::random_succ(rng, n),
                             testgen::random_set(rng, n), 0);
        auto cs = conditions_for(rng, n);
        compare_solvers(log, a, cs[i % 3],
                        "random arena " + std::to_string(i) + ": ");
      }
  }

  // ---------------------------------------------------------------------

  ctl_formula
  random_ctl(std::mt19937_64& rng, int depth)
  {
    static const char* atoms[] = {"a", "b", "true"};
    static const char* unary[] = {"EX", "AX", "EF", "AF", "EG", "AG", "!"};
    std::function<std::string(int)> gen = [&](int d) -> std::string
    {
      if (d == 0 || rng() % 4 == 0)
        return atoms[rng() % 3];
      switch (rng() % 4)
        {
        case 0: return std::string(unary[rng() % 7]) + "(" + gen(d - 1) + ")";
        case 1: return "(" + gen(d - 1) + " & " + gen(d - 1) + ")";
        case 2: return "(E (" + gen(d - 1) + ") U (" + gen(d - 1) + "))";
        default: return "(A (" + gen(d - 1) + ") U (" + gen(d - 1) + "))";
        }
    };
    return parse_ctl(gen(depth));
  }

  void
  consistency_one(check_log& log, const model& m, const ctl_formula& f,
                  const std::string& tag)
  {
    auto& t = m.as_mts();
    std::size_t n = t.states.size();
    for (std::uint32_t c = 0; c < (1u << n); ++c)
      {
        state_set sat(n, c);
        auto v = concurrent_value(t, f, sat);
        bool v2 = two_turn_value(t, f, sat).value;
        log.expect((v == 1) == v2, tag + "integer part of the value");
        log.expect((v == 0) == !dual_two_turn_value(t, f, sat),
                   tag + "zero value against the dual game");
      }
    auto r2 = importance_exact(m.parts.size(), two_turn_oracle(m, f),
                               m.parts.names, prune_forced_parts(m));
    auto rc = importance_fractional(m.parts.size(), concurrent_oracle(m, f),
                                    m.parts.names, prune_forced_parts(m));
    for (std::size_t p = 0; p < m.parts.size(); ++p)
      if (r2.parts[p].useful)
        log.expect(rc.parts[p].useful,
                   tag + "two-turn useful but not concurrently");
  }

  void
  consistency_suite(check_log& log)
  {
    consistency_one(log, fixture("fig5"), parse_ctl(fig5_spec), "fig5: ");
    consistency_one(log, fixture("fig6"), parse_ctl(fig6_spec), "fig6: ");
    consistency_one(log, fixture("fig8"), parse_ctl(fig8_spec), "fig8: ");
    std::mt19937_64 rng(23);
    for (int i = 0; i < 150; ++i)
      {
        std::size_t n = 2 + rng() % 4;
        auto m = testgen::random_mts(rng, n, 4);
        consistency_one(log, m, random_ctl(rng, 3),
                        "random MTS " + std::to_string(i) + ": ");
      }

    // The converse fails on fig8: part 2 matters only concurrently.
    auto m = fixture("fig8");
    auto f = parse_ctl(fig8_spec);
    auto r2 = importance_exact(4, two_turn_oracle(m, f), m.parts.names,
                               prune_forced_parts(m));
    auto rc = importance_fractional(4, concurrent_oracle(m, f), m.parts.names,
                                    prune_forced_parts(m));
    log.expect(r2.parts[2].importance == 0
               && rc.parts[2].importance == rational(1, 12),
               "fig8 part 2: two-turn " + to_string(r2.parts[2].importance)
               + ", concurrent " + to_string(rc.parts[2].importance));
  }

  // ---------------------------------------------------------------------

  void
  sampling_suite(check_log& log)
  {
    std::vector<std::pair<const char*, const char*>> cases = {
      {"fig1_left", two_server_el}, {"fig1_right", two_server_el},
      {"fig2", "ltl: a U b"}, {"fig3", "ltl: a U b"}};
    for (auto [name, spec]: cases)
      {
        auto m = fixture(name);
        auto g = prepare_linear_game(m, parse_spec(spec, m));
        auto v = game_oracle(g);
        auto forced = prune_forced_parts(m);
        auto exact = importance_exact(m.parts.size(), v, m.parts.names,
                                      forced);
        auto s = importance_sampled(m.parts.size(), v, m.parts.names, forced,
                                    10000, 2024);
        for (std::size_t p = 0; p < m.parts.size(); ++p)
          {
            double d = static_cast<double>(s.parts[p].importance
                                           - exact.parts[p].importance);
            log.expect(std::abs(d) <= 0.05, std::string(name) + " part "
                       + m.parts.names[p] + " off by " + std::to_string(d));
          }
        std::size_t left = s.samples;
        for (auto& batch: s.batch_counts)
          {
            std::uint64_t size = std::min<std::size_t>(left, 1000), total = 0;
            left -= size;
            for (auto x: batch)
              total += x;
            log.expect(rational(total, size) == s.val_full - s.val_empty,
                       std::string(name) + ": batch estimates do not sum "
                       "to the value gap");
          }
        log.expect(left == 0, std::string(name) + ": batch sizes");
      }
  }

  bool
  run(int number, const char* title, double limit_seconds,
      void (*body)(check_log&))
  {
    check_log log;
    auto start = clock_type::now();
    try
      {
        body(log);
      }
    catch (const std::exception& e)
      {
        log.failures.push_back(std::string("exception: ") + e.what());
      }
    double secs = std::chrono::duration<double>(clock_type::now()
                                                - start).count();
    if (secs > limit_seconds)
      log.failures.push_back("took " + std::to_string(secs) + " s, limit "
                             + std::to_string(limit_seconds) + " s");
    bool ok = log.failures.empty();
    std::ostringstream line;
    line.precision(2);
    line << std::fixed << (ok ? "PASS" : "FAIL") << ' ' << number << ' '
         << title << " (" << log.checks << " checks, " << secs << " s)";
    std::cout << line.str() << '\n';
    for (auto& f: log.failures)
      std::cout << "    " << f << '\n';
    return ok;
  }
}

int
main()
{
  bool ok = true;
  ok &= run(1, "golden values, two-server models", 1, golden_two_server);
  ok &= run(2, "golden values, a U b through the monitor product", 2,
            golden_cosafe);
  ok &= run(3, "golden values, two-turn CTL", 10, golden_two_turn);
  ok &= run(4, "golden values, concurrent CTL", 30, golden_concurrent);
  ok &= run(5, "importance identities on 300 random games", 300,
            identity_suite);
  ok &= run(6, "specialised vs generic solvers, strategies verified", 600,
            differential_suite);
  ok &= run(7, "concurrent, two-turn and dual games agree", 600,
            consistency_suite);
  ok &= run(8, "sampled importance", 60, sampling_suite);
  return ok ? 0 : 1;
}
