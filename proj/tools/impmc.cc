// Command-line front end: values, usefulness, thresholds, importance and
// standalone game solving.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include <impmc/branching.hh>
#include <impmc/concurrent.hh>
#include <impmc/shapley.hh>
#include <impmc/solve.hh>
#include <impmc/spec.hh>

using namespace impmc;
using json = nlohmann::ordered_json;

namespace
{
  enum exit_code { affirmative = 0, internal = 1, bad_input = 2,
                   negative = 3, over_cap = 4 };

  struct run_config
  {
    std::string model_path;
    std::string spec;
    std::string mode = "auto";
    std::string coalition_names;
    std::string part;
    std::string eta;
    std::string format = "table";
    bool exact = false;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    bool paranoid = false;
    bool two_turn = false, dual = false, concurrent = false;
    unsigned jobs = 0;
    std::size_t monitor_cap = default_monitor_cap;
    std::size_t lar_max = 12;
    std::size_t lar_nodes = std::size_t{1} << 20;
    std::size_t max_parts = 20;
    std::uint64_t profile_cap = default_profile_cap;
    std::uint64_t matrix_cap = default_matrix_cap;
    std::string pgsolver;
    bool verify = false;
    std::string export_pgsolver;
    std::string dump_matrix;
  };

  enum class engine { game, two_turn, dual, concurrent };

  const char*
  engine_name(engine e)
  {
    switch (e)
      {
      case engine::game: return "game";
      case engine::two_turn: return "two-turn";
      case engine::dual: return "dual";
      case engine::concurrent: return "concurrent";
      }
    return "?";
  }

  std::string
  read_file(const std::string& path)
  {
    std::ifstream in(path);
    if (!in)
      throw input_error("cannot open " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  void
  write_file(const std::string& path, const std::string& text)
  {
    std::ofstream out(path);
    if (!out || !(out << text))
      throw input_error("cannot write " + path);
  }

  std::string
  exact(const rational& q)
  {
    return denominator(q) == 1 ? numerator(q).str() : to_string(q);
  }

  json
  fraction(const rational& q)
  {
    return {{"num", numerator(q).str()}, {"den", denominator(q).str()}};
  }

  // Everything a value-based command needs.
  struct session
  {
    model m;
    specification spec;
    engine eng = engine::game;
    std::optional<linear_game> game;
    importance_options opt;
    solve_options sopt;
    std::vector<std::size_t> forced;

    binary_oracle
    binary() const
    {
      switch (eng)
        {
        case engine::game: return game_oracle(*game, sopt);
        case engine::two_turn: return two_turn_oracle(m, *spec.ctl, false, profile_cap);
        case engine::dual: return two_turn_oracle(m, *spec.ctl, true, profile_cap);
        case engine::concurrent: break;
        }
      throw std::logic_error("binary oracle of the concurrent engine");
    }

    rational_oracle
    fractional() const
    {
      if (eng == engine::concurrent)
        return concurrent_oracle(m, *spec.ctl, matrix_cap);
      auto b = binary();
      return [b](const coalition& c) { return rational(b(c) ? 1 : 0); };
    }

    std::uint64_t profile_cap = default_profile_cap;
    std::uint64_t matrix_cap = default_matrix_cap;
  };

  session
  open_session(const run_config& cfg)
  {
    session s;
    s.m = parse_model(read_file(cfg.model_path));
    if (cfg.mode == "kripke" && s.m.is_mts())
      throw input_error("--mode kripke, but the document is an MTS");
    if (cfg.mode == "mts" && !s.m.is_mts())
      throw input_error("--mode mts, but the document is a Kripke structure");
    s.spec = parse_spec(cfg.spec, s.m);
    int engines = cfg.two_turn + cfg.dual + cfg.concurrent;
    if (engines > 1)
      throw input_error("--two-turn, --dual and --concurrent are exclusive");
    if (s.m.is_mts())
      {
        if (engines == 0)
          throw input_error("an MTS needs an explicit engine: --two-turn, "
                            "--dual or --concurrent");
        s.eng = cfg.two_turn ? engine::two_turn
          : cfg.dual ? engine::dual : engine::concurrent;
      }
    else
      {
        if (engines)
          throw input_error("--two-turn, --dual and --concurrent apply to "
                            "MTS models only");
        s.game = prepare_linear_game(s.m, s.spec, cfg.monitor_cap);
      }
    s.opt.paranoid = cfg.paranoid;
    s.opt.jobs = cfg.jobs;
    s.opt.max_exact_parts = cfg.max_parts;
    s.sopt.lar_max_relevant = cfg.lar_max;
    s.sopt.lar_max_nodes = cfg.lar_nodes;
    s.profile_cap = cfg.profile_cap;
    s.matrix_cap = cfg.matrix_cap;
    s.forced = prune_forced_parts(s.m);
    return s;
  }

  std::size_t
  resolve_part(const session& s, const std::string& name)
  {
    if (name.empty())
      throw input_error("--part is required");
    auto i = s.m.parts.find_part(name);
    if (!i)
      throw input_error("unknown part \"" + name + "\"");
    return *i;
  }

  std::string
  coalition_text(const partition& p, const coalition& c)
  {
    std::string out = "{";
    for (auto i = c.find_first(); i != coalition::npos; i = c.find_next(i))
      out += (out.size() > 1 ? ", " : "") + p.names[i];
    return out + "}";
  }

  importance_report
  full_report(const session& s, const run_config& cfg)
  {
    std::size_t n = s.m.parts.size();
    importance_report r;
    if (cfg.samples)
      {
        if (s.eng == engine::concurrent)
          throw input_error("sampling needs 0/1 values; the concurrent "
                            "engine supports exact computation only");
        r = importance_sampled(n, s.binary(), s.m.parts.names, s.forced,
                               cfg.samples, cfg.seed, s.opt);
      }
    else if (s.eng == engine::concurrent)
      r = importance_fractional(n, s.fractional(), s.m.parts.names,
                                s.forced, s.opt);
    else
      r = importance_exact(n, s.binary(), s.m.parts.names, s.forced, s.opt);
    r.engine = engine_name(s.eng);
    return r;
  }

  // Library messages say what overflowed; name the flag that moves the limit.
  std::string
  cap_hint(const std::string& what)
  {
    static const std::pair<const char*, const char*> flags[] = {
      {"strategy profiles", "--profile-cap"},
      {"payoff matrix", "--matrix-cap"},
      {"monitor", "--monitor-cap"},
      {"relevant states", "--generic-cap"},
      {"parity product", "--generic-nodes"},
    };
    std::string hint;
    for (auto [key, flag]: flags)
      if (what.find(key) != std::string::npos)
        hint = std::string(" (raise ") + flag + ")";
    return hint;
  }

  // ---------------------------------------------------------------------

  int
  cmd_value(const run_config& cfg)
  {
    auto s = open_session(cfg);
    auto c = parse_coalition(cfg.coalition_names, s.m.parts);
    rational v;
    if (s.eng == engine::concurrent)
      {
        auto states = s.m.parts.states_of(c, s.m.states().size());
        auto a = build_payoff_matrix(s.m.as_mts(), *s.spec.ctl, states,
                                     cfg.matrix_cap, resolve_jobs(cfg.jobs));
        if (!cfg.dump_matrix.empty())
          write_file(cfg.dump_matrix, matrix_to_csv(a));
        v = solve_matrix_game(a).value;
      }
    else
      v = s.binary()(c) ? 1 : 0;
    if (cfg.format == "json")
      {
        json j;
        j["engine"] = engine_name(s.eng);
        j["coalition"] = json::array();
        for (auto i = c.find_first(); i != coalition::npos; i = c.find_next(i))
          j["coalition"].push_back(s.m.parts.names[i]);
        j["value"] = fraction(v);
        j["value_decimal"] = to_decimal(v, 6);
        std::cout << j.dump(2) << '\n';
      }
    else
      std::cout << exact(v) << '\n';
    return v == 1 ? affirmative : negative;
  }

  int
  cmd_usefulness(const run_config& cfg)
  {
    auto s = open_session(cfg);
    auto i = resolve_part(s, cfg.part);
    std::size_t n = s.m.parts.size();
    bool useful;
    std::optional<coalition> witness;
    rational importance;
    if (s.eng == engine::concurrent)
      {
        auto r = full_report(s, cfg);
        importance = r.parts[i].importance;
        useful = importance > 0;
      }
    else
      {
        witness = find_critical_pair(n, i, s.binary(), s.forced, cfg.paranoid);
        useful = witness.has_value();
      }
    if (cfg.format == "json")
      {
        json j;
        j["engine"] = engine_name(s.eng);
        j["part"] = s.m.parts.names[i];
        j["useful"] = useful;
        if (witness)
          {
            j["critical_pair"] = json::array();
            for (auto x = witness->find_first(); x != coalition::npos;
                 x = witness->find_next(x))
              j["critical_pair"].push_back(s.m.parts.names[x]);
          }
        if (s.eng == engine::concurrent)
          j["importance"] = fraction(importance);
        std::cout << j.dump(2) << '\n';
      }
    else
      {
        std::cout << s.m.parts.names[i] << ": "
                  << (useful ? "useful" : "not useful") << '\n';
        if (witness)
          std::cout << "critical pair: (" << s.m.parts.names[i] << ", "
                    << coalition_text(s.m.parts, *witness) << ")\n";
        if (s.eng == engine::concurrent)
          std::cout << "importance: " << exact(importance) << '\n';
      }
    return useful ? affirmative : negative;
  }

  int
  cmd_threshold(const run_config& cfg)
  {
    if (cfg.eta.empty())
      throw input_error("--eta is required");
    rational eta = parse_rational(cfg.eta);
    auto s = open_session(cfg);
    auto i = resolve_part(s, cfg.part);
    auto r = full_report(s, cfg);
    auto& imp = r.parts[i].importance;
    bool above = imp > eta;
    if (cfg.format == "json")
      {
        json j;
        j["engine"] = r.engine;
        j["part"] = r.parts[i].name;
        j["importance"] = fraction(imp);
        j["eta"] = fraction(eta);
        j["above"] = above;
        std::cout << j.dump(2) << '\n';
      }
    else
      std::cout << (above ? "yes" : "no") << ": I(" << r.parts[i].name
                << ") = " << exact(imp) << (above ? " > " : " <= ")
                << exact(eta) << '\n';
    return above ? affirmative : negative;
  }

  int
  cmd_importance(const run_config& cfg)
  {
    if (cfg.exact && cfg.samples)
      throw input_error("--exact and --sample are exclusive");
    auto s = open_session(cfg);
    auto r = full_report(s, cfg);
    std::cout << (cfg.format == "json" ? report_to_json(r)
                                       : report_to_table(r));
    return affirmative;
  }

  // ---------------------------------------------------------------------

  void
  print_solution(const arena& a, const solution& sol,
                 const std::vector<std::string>& names, bool as_json)
  {
    auto list = [&](const state_set& s)
    {
      std::vector<std::string> out;
      for (auto x = s.find_first(); x != state_set::npos; x = s.find_next(x))
        out.push_back(names[x]);
      return out;
    };
    auto strategy_rows = [&](player p)
    {
      std::vector<std::array<std::string, 3>> rows;
      auto& st = sol.strategy(p);
      for (std::size_t m = 0; m < st.size(); ++m)
        for (std::size_t s = 0; s < a.num_states(); ++s)
          if (st[m][s] != no_move)
            rows.push_back({std::to_string(m), names[s], names[st[m][s]]});
      return rows;
    };
    if (as_json)
      {
        json j;
        j["win_sat"] = list(sol.win_sat);
        j["win_unsat"] = list(sol.win_unsat);
        j["initial"] = names[a.init];
        j["initial_winner"] = sol.win_sat.test(a.init) ? "sat" : "unsat";
        j["memory_size"] = sol.memory_size;
        for (player p: {player::sat, player::unsat})
          {
            json rows = json::array();
            for (auto& r: strategy_rows(p))
              rows.push_back({{"memory", std::stoul(r[0])}, {"state", r[1]},
                              {"move", r[2]}});
            j[std::string("strategy_") + to_string(p)] = rows;
          }
        std::cout << j.dump(2) << '\n';
        return;
      }
    auto join = [](const std::vector<std::string>& xs)
    {
      std::string out;
      for (auto& x: xs)
        out += (out.empty() ? "" : ", ") + x;
      return "{" + out + "}";
    };
    std::cout << "win_sat:   " << join(list(sol.win_sat)) << '\n'
              << "win_unsat: " << join(list(sol.win_unsat)) << '\n'
              << "initial " << names[a.init] << ": "
              << (sol.win_sat.test(a.init) ? "Sat" : "Unsat") << " wins\n"
              << "memory size: " << sol.memory_size << '\n';
    for (player p: {player::sat, player::unsat})
      {
        std::cout << "strategy " << (p == player::sat ? "Sat" : "Unsat")
                  << ":\n";
        for (auto& r: strategy_rows(p))
          std::cout << "  " << (sol.memory_size > 1 ? "m" + r[0] + " " : "")
                    << r[1] << " -> " << r[2] << '\n';
      }
  }

  int
  cmd_solve(const run_config& cfg)
  {
    bool as_json = cfg.format == "json";
    solve_options sopt;
    sopt.lar_max_relevant = cfg.lar_max;
    sopt.lar_max_nodes = cfg.lar_nodes;
    sopt.verify = false;            // reported separately below
    if (!cfg.pgsolver.empty())
      {
        if (!cfg.model_path.empty() || !cfg.spec.empty())
          throw input_error("--pgsolver replaces --model and --spec");
        auto g = read_pgsolver(read_file(cfg.pgsolver));
        winning_condition c;
        c.num_states = g.game.num_states();
        c.cond = parity{g.priority};
        auto sol = solve_game(g.game, c, sopt);
        print_solution(g.game, sol, g.names, as_json);
        if (cfg.verify)
          {
            if (!verify_strategy(g.game, c, sol))
              throw std::logic_error("strategy verification failed");
            if (!as_json)
              std::cout << "strategies verified\n";
          }
        if (!cfg.export_pgsolver.empty())
          write_file(cfg.export_pgsolver,
                     write_pgsolver(g.game, g.priority, g.names));
        return sol.win_sat.test(g.game.init) ? affirmative : negative;
      }
    if (cfg.model_path.empty() || cfg.spec.empty())
      throw input_error("solve needs --pgsolver, or --model and --spec");
    auto s = open_session(cfg);
    if (s.m.is_mts())
      throw input_error("solve works on Kripke structures; use value with "
                        "an engine flag for an MTS");
    auto c = parse_coalition(cfg.coalition_names, s.m.parts);
    auto a = build_arena(s.game->system, s.game->parts, c);
    auto sol = solve_game(a, s.game->cond, sopt);
    print_solution(a, sol, s.game->system.states, as_json);
    if (cfg.verify)
      {
        if (!verify_strategy(a, s.game->cond, sol))
          throw std::logic_error("strategy verification failed");
        if (!as_json)
          std::cout << "strategies verified\n";
      }
    if (!cfg.export_pgsolver.empty())
      {
        auto p = to_parity_game(a, s.game->cond, sopt);
        std::vector<std::string> names;
        for (std::size_t v = 0; v < p.state.size(); ++v)
          names.push_back(s.game->system.states[p.state[v]]
                          + (p.memory_size > 1
                             ? "@" + std::to_string(p.memory[v]) : ""));
        write_file(cfg.export_pgsolver,
                   write_pgsolver(p.game, p.priority, names));
      }
    return sol.win_sat.test(a.init) ? affirmative : negative;
  }
}

int
main(int argc, char** argv)
{
  CLI::App app{"Importance of states for temporal specifications, by "
               "solving coalition games"};
  app.require_subcommand(1);
  run_config cfg;

  auto common = [&](CLI::App* sub, bool needs_model)
  {
    auto mo = sub->add_option("-m,--model", cfg.model_path,
                              "model document (JSON)");
    auto so = sub->add_option("--spec", cfg.spec,
                              "specification, e.g. 'ltl: a U b'");
    if (needs_model)
      {
        mo->required();
        so->required();
      }
    sub->add_option("--mode", cfg.mode, "auto, kripke or mts")
      ->check(CLI::IsMember({"auto", "kripke", "mts"}));
    sub->add_option("--format", cfg.format, "table or json")
      ->check(CLI::IsMember({"table", "json"}));
    sub->add_flag("--paranoid", cfg.paranoid,
                  "no pruning, re-solve cached values");
    sub->add_flag("--two-turn", cfg.two_turn, "two-turn CTL game (MTS)");
    sub->add_flag("--dual", cfg.dual, "two-turn game, Unsat first (MTS)");
    sub->add_flag("--concurrent", cfg.concurrent,
                  "concurrent CTL game (MTS)");
    sub->add_option("--jobs", cfg.jobs, "worker threads (0: all cores)")
      ->envname("IMPORTANCE_MC_JOBS");
    sub->add_option("--monitor-cap", cfg.monitor_cap,
                    "largest LTL monitor");
    sub->add_option("--generic-cap", cfg.lar_max,
                    "most relevant states on the generic solver path");
    sub->add_option("--generic-nodes", cfg.lar_nodes,
                    "most nodes of a generic parity product");
    sub->add_option("--max-parts", cfg.max_parts,
                    "most parts for exact importance");
    sub->add_option("--profile-cap", cfg.profile_cap,
                    "most strategy profiles of a two-turn game");
    sub->add_option("--matrix-cap", cfg.matrix_cap,
                    "most payoff-matrix entries");
  };

  auto value = app.add_subcommand("value", "value of a coalition (0/1, or "
                                  "a rational with --concurrent)");
  common(value, true);
  value->add_option("--coalition", cfg.coalition_names,
                    "comma-separated parts owned by Sat")->required();
  value->add_option("--dump-matrix", cfg.dump_matrix,
                    "write the payoff matrix as CSV (--concurrent)");

  auto useful = app.add_subcommand("usefulness", "does a part have a "
                                   "critical pair?");
  common(useful, true);
  useful->add_option("--part", cfg.part, "part name")->required();

  auto threshold = app.add_subcommand("threshold", "is the importance of a "
                                      "part strictly above eta?");
  common(threshold, true);
  threshold->add_option("--part", cfg.part, "part name")->required();
  threshold->add_option("--eta", cfg.eta, "exact rational p/q")->required();
  threshold->add_option("--sample", cfg.samples, "estimate from N orders");
  threshold->add_option("--seed", cfg.seed, "sampling seed");

  auto importance = app.add_subcommand("importance", "importance of every "
                                       "part");
  common(importance, true);
  importance->add_flag("--exact", cfg.exact, "exact computation (default)");
  importance->add_option("--sample", cfg.samples, "estimate from N orders")
    ->check(CLI::PositiveNumber);
  importance->add_option("--seed", cfg.seed, "sampling seed");

  auto solve = app.add_subcommand("solve", "winning regions and strategies");
  common(solve, false);
  solve->add_option("--coalition", cfg.coalition_names,
                    "comma-separated parts owned by Sat");
  solve->add_option("--pgsolver", cfg.pgsolver, "parity game file");
  solve->add_flag("--verify", cfg.verify, "check the strategies");
  solve->add_option("--export-pgsolver", cfg.export_pgsolver,
                    "write the parity game");

  try
    {
      app.parse(argc, argv);
    }
  catch (const CLI::ParseError& e)
    {
      int rc = app.exit(e);
      return rc == 0 ? 0 : bad_input;
    }

  try
    {
      if (*value)
        return cmd_value(cfg);
      if (*useful)
        return cmd_usefulness(cfg);
      if (*threshold)
        return cmd_threshold(cfg);
      if (*importance)
        return cmd_importance(cfg);
      return cmd_solve(cfg);
    }
  catch (const input_error& e)
    {
      std::cerr << "error: " << e.what() << '\n';
      return bad_input;
    }
  catch (const cap_exceeded& e)
    {
      std::cerr << "limit exceeded: " << e.what() << cap_hint(e.what())
                << '\n';
      return over_cap;
    }
  catch (const std::exception& e)
    {
      std::cerr << "internal error: " << e.what() << '\n';
      return internal;
    }
}
