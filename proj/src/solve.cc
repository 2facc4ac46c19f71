#include <impmc/solve.hh>

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace impmc
{
  arena
  build_arena(const kripke& k, const partition& p, const coalition& c)
  {
    return build_arena(k.succ, p.states_of(c, k.num_states()), k.init);
  }

  arena
  build_arena(const successor_lists& succ, const state_set& sat_states,
              std::size_t init)
  {
    arena a;
    a.succ = succ;
    a.init = init;
    a.owner.resize(succ.size(), player::unsat);
    for (std::size_t s = 0; s < succ.size(); ++s)
      if (sat_states.test(s))
        a.owner[s] = player::sat;
    return a;
  }

  namespace
  {
    using strategy_vec = std::vector<std::size_t>;

    std::vector<std::vector<std::size_t>>
    predecessors(const arena& a)
    {
      std::vector<std::vector<std::size_t>> pred(a.num_states());
      for (std::size_t s = 0; s < a.num_states(); ++s)
        for (auto t: a.succ[s])
          pred[t].push_back(s);
      return pred;
    }

    // Attractor inside the subgame \a alive; writes progress moves into
    // \a strat for p's states it adds.
    state_set
    attract(const arena& a, const std::vector<std::vector<std::size_t>>& pred,
            const state_set& alive, player p, const state_set& target,
            strategy_vec& strat)
    {
      std::size_t n = a.num_states();
      state_set region = target & alive;
      std::vector<std::size_t> count(n, 0);
      for (auto s = alive.find_first(); s != state_set::npos;
           s = alive.find_next(s))
        if (a.owner[s] != p)
          for (auto t: a.succ[s])
            if (alive.test(t))
              ++count[s];
      std::vector<std::size_t> queue;
      for (auto s = region.find_first(); s != state_set::npos;
           s = region.find_next(s))
        queue.push_back(s);
      for (std::size_t qi = 0; qi < queue.size(); ++qi)
        {
          auto t = queue[qi];
          for (auto s: pred[t])
            {
              if (!alive.test(s) || region.test(s))
                continue;
              if (a.owner[s] == p)
                strat[s] = t;
              else if (--count[s] > 0)
                continue;
              region.set(s);
              queue.push_back(s);
            }
        }
      return region;
    }

    std::size_t
    first_succ_in(const arena& a, std::size_t s, const state_set& in)
    {
      for (auto t: a.succ[s])
        if (in.test(t))
          return t;
      return no_move;
    }

    // Player p wants to visit \a accept infinitely often.
    void
    solve_buchi(const arena& a, player p, const state_set& accept,
                state_set& win_p, state_set& win_q, strategy_vec& strat)
    {
      std::size_t n = a.num_states();
      auto pred = predecessors(a);
      player q = opponent(p);
      state_set game = full_set(n);
      win_q = state_set(n);
      strategy_vec sp(n, no_move);
      state_set reach;
      for (;;)
        {
          std::fill(sp.begin(), sp.end(), no_move);
          reach = attract(a, pred, game, p, accept & game, sp);
          state_set trap = game - reach;
          if (trap.none())
            break;
          strategy_vec sq(n, no_move);
          auto lost = attract(a, pred, game, q, trap, sq);
          for (auto s = lost.find_first(); s != state_set::npos;
               s = lost.find_next(s))
            if (a.owner[s] == q)
              strat[s] = trap.test(s) ? first_succ_in(a, s, trap) : sq[s];
          win_q |= lost;
          game -= lost;
        }
      win_p = game;
      for (auto s = game.find_first(); s != state_set::npos;
           s = game.find_next(s))
        if (a.owner[s] == p)
          strat[s] = sp[s] != no_move ? sp[s] : first_succ_in(a, s, game);
    }

    // Zielonka's algorithm on the subgame \a alive (max-even).
    void
    zielonka(const arena& a, const std::vector<std::vector<std::size_t>>& pred,
             const std::vector<unsigned>& prio, const state_set& alive,
             state_set& w_sat, state_set& w_unsat, strategy_vec& strat)
    {
      std::size_t n = a.num_states();
      w_sat = state_set(n);
      w_unsat = state_set(n);
      if (alive.none())
        return;
      unsigned d = 0;
      for (auto s = alive.find_first(); s != state_set::npos;
           s = alive.find_next(s))
        d = std::max(d, prio[s]);
      player p = d % 2 == 0 ? player::sat : player::unsat;
      player q = opponent(p);
      state_set top(n);
      for (auto s = alive.find_first(); s != state_set::npos;
           s = alive.find_next(s))
        if (prio[s] == d)
          top.set(s);

      strategy_vec sa(n, no_move);
      auto attr = attract(a, pred, alive, p, top, sa);
      state_set w0, w1;
      zielonka(a, pred, prio, alive - attr, w0, w1, strat);
      auto& wq1 = q == player::sat ? w0 : w1;
      if (wq1.none())
        {
          (p == player::sat ? w_sat : w_unsat) = alive;
          for (auto s = attr.find_first(); s != state_set::npos;
               s = attr.find_next(s))
            if (a.owner[s] == p)
              strat[s] = top.test(s) ? first_succ_in(a, s, alive) : sa[s];
          return;
        }
      strategy_vec sb(n, no_move);
      auto lost = attract(a, pred, alive, q, wq1, sb);
      for (auto s = lost.find_first(); s != state_set::npos;
           s = lost.find_next(s))
        if (a.owner[s] == q && !wq1.test(s))
          strat[s] = sb[s];
      zielonka(a, pred, prio, alive - lost, w0, w1, strat);
      w_sat = w0;
      w_unsat = w1;
      (q == player::sat ? w_sat : w_unsat) |= lost;
    }

    solution
    positional(const arena& a, state_set win_sat, state_set win_unsat,
               const strategy_vec& strat)
    {
      std::size_t n = a.num_states();
      solution sol;
      sol.win_sat = std::move(win_sat);
      sol.win_unsat = std::move(win_unsat);
      sol.initial_memory.assign(n, 0);
      sol.memory_update.assign(1, std::vector<std::size_t>(n, 0));
      sol.strategy_sat.assign(1, strategy_vec(n, no_move));
      sol.strategy_unsat.assign(1, strategy_vec(n, no_move));
      for (std::size_t s = 0; s < n; ++s)
        {
          if (a.owner[s] == player::sat && sol.win_sat.test(s))
            sol.strategy_sat[0][s] = strat[s];
          if (a.owner[s] == player::unsat && sol.win_unsat.test(s))
            sol.strategy_unsat[0][s] = strat[s];
        }
      return sol;
    }

    // Reachability for player p: positional attractor strategy, the
    // opponent stays outside.
    solution
    solve_reach(const arena& a, player p, const state_set& target)
    {
      std::size_t n = a.num_states();
      auto pred = predecessors(a);
      strategy_vec strat(n, no_move);
      auto win = attract(a, pred, full_set(n), p, target, strat);
      state_set rest = ~win;
      for (std::size_t s = 0; s < n; ++s)
        {
          if (a.owner[s] == p && target.test(s))
            strat[s] = a.succ[s].front();
          if (a.owner[s] != p && rest.test(s))
            strat[s] = first_succ_in(a, s, rest);
        }
      return p == player::sat ? positional(a, win, rest, strat)
                              : positional(a, rest, win, strat);
    }

    // Conditions whose verdict also depends on the finite prefix are
    // rewritten to reachability or safety.
    const winning_condition*
    strip_negation(const winning_condition& c, winning_condition& storage)
    {
      if (auto* ng = std::get_if<negated>(&c.cond))
        if (!is_loop_determined(*ng->inner))
          {
            storage = complement(*ng->inner);
            return strip_negation(storage, storage);
          }
      return &c;
    }

    // -------------------------------------------------------------------
    // Products with a deterministic memory.

    using key_t = std::uint64_t;

    template<class Update, class Prio>
    parity_product
    build_product(const arena& a, key_t canonical, const Update& update,
                  const Prio& prio, std::size_t max_nodes)
    {
      std::size_t n = a.num_states();
      parity_product p;
      std::unordered_map<key_t, std::size_t> mem_id;
      std::vector<key_t> mem_key;
      std::unordered_map<std::size_t, std::size_t> node_id;
      auto memory = [&](key_t k)
      {
        auto [it, fresh] = mem_id.try_emplace(k, mem_key.size());
        if (fresh)
          {
            mem_key.push_back(k);
            p.memory_update.emplace_back(n, no_move);
          }
        return it->second;
      };
      auto node = [&](std::size_t s, std::size_t m)
      {
        auto [it, fresh] = node_id.try_emplace(m * n + s, p.state.size());
        if (fresh)
          {
            if (p.state.size() >= max_nodes)
              throw cap_exceeded("parity product exceeds "
                                 + std::to_string(max_nodes) + " nodes");
            p.state.push_back(s);
            p.memory.push_back(m);
          }
        return it->second;
      };
      for (std::size_t s = 0; s < n; ++s)
        p.initial_node.push_back(node(s, memory(update(canonical, s))));
      for (std::size_t v = 0; v < p.state.size(); ++v)
        {
          auto s = p.state[v];
          auto m = p.memory[v];
          std::vector<std::size_t> out;
          for (auto t: a.succ[s])
            {
              auto m2 = memory(update(mem_key[m], t));
              p.memory_update[m][t] = m2;
              out.push_back(node(t, m2));
            }
          std::sort(out.begin(), out.end());
          p.game.succ.push_back(std::move(out));
          p.game.owner.push_back(a.owner[s]);
          p.priority.push_back(prio(mem_key[m], s));
        }
      p.memory_size = mem_key.size();
      p.game.init = p.initial_node[a.init];
      return p;
    }

    solution
    from_product(const arena& a, const parity_product& p,
                 const parity_solution& ps)
    {
      std::size_t n = a.num_states();
      solution sol;
      sol.win_sat = state_set(n);
      sol.win_unsat = state_set(n);
      sol.memory_size = p.memory_size;
      sol.memory_update = p.memory_update;
      sol.strategy_sat.assign(p.memory_size, strategy_vec(n, no_move));
      sol.strategy_unsat.assign(p.memory_size, strategy_vec(n, no_move));
      for (std::size_t s = 0; s < n; ++s)
        {
          auto v = p.initial_node[s];
          sol.initial_memory.push_back(p.memory[v]);
          (ps.win_sat.test(v) ? sol.win_sat : sol.win_unsat).set(s);
        }
      for (std::size_t v = 0; v < p.state.size(); ++v)
        {
          auto s = p.state[v];
          auto m = p.memory[v];
          auto mv = ps.strategy[v];
          if (mv == no_move)
            continue;
          if (a.owner[s] == player::sat && ps.win_sat.test(v))
            sol.strategy_sat[m][s] = p.state[mv];
          if (a.owner[s] == player::unsat && ps.win_unsat.test(v))
            sol.strategy_unsat[m][s] = p.state[mv];
        }
      return sol;
    }

    std::vector<unsigned>
    direct_priorities(const winning_condition& c)
    {
      std::size_t n = c.num_states;
      std::vector<unsigned> pr(n);
      if (auto* b = std::get_if<buchi>(&c.cond))
        for (std::size_t s = 0; s < n; ++s)
          pr[s] = b->accept.test(s) ? 2 : 1;
      else if (auto* cb = std::get_if<co_buchi>(&c.cond))
        for (std::size_t s = 0; s < n; ++s)
          pr[s] = cb->reject.test(s) ? 1 : 0;
      else
        pr = c.as<parity>().priority;
      return pr;
    }

    bool
    has_direct_priorities(const winning_condition& c)
    {
      return c.is<buchi>() || c.is<co_buchi>() || c.is<parity>();
    }
  }

  attractor_result
  attractor(const arena& a, player p, const state_set& target)
  {
    attractor_result r;
    r.strategy.assign(a.num_states(), no_move);
    r.region = attract(a, predecessors(a), full_set(a.num_states()), p,
                       target, r.strategy);
    return r;
  }

  parity_solution
  solve_parity(const arena& a, const std::vector<unsigned>& priority)
  {
    parity_solution ps;
    ps.strategy.assign(a.num_states(), no_move);
    zielonka(a, predecessors(a), priority, full_set(a.num_states()),
             ps.win_sat, ps.win_unsat, ps.strategy);
    return ps;
  }

  parity_product
  lar_reduce(const arena& a, const winning_condition& c,
             const solve_options& opt)
  {
    if (!is_loop_determined(c))
      throw std::logic_error("lar_reduce needs a loop-determined condition");
    std::size_t n = a.num_states();
    auto rel = members(relevant_states(c));
    std::size_t r = rel.size();
    if (r > std::min<std::size_t>(opt.lar_max_relevant, 15))
      throw cap_exceeded("generic solver handles at most "
                         + std::to_string(std::min<std::size_t>(
                                            opt.lar_max_relevant, 15))
                         + " relevant states; this condition has "
                         + std::to_string(r));
    std::vector<int> pos(n, -1);
    for (std::size_t i = 0; i < r; ++i)
      pos[rel[i]] = static_cast<int>(i);

    // Record: digit i (4 bits at 4i) is the i-th most recent relevant
    // state; bits 60..63 hold the hit position.
    constexpr key_t hit_mask = key_t{0xF} << 60;
    auto digit = [](key_t k, std::size_t i) { return (k >> (4 * i)) & 0xF; };
    key_t canonical = 0;
    for (std::size_t i = 0; i < r; ++i)
      canonical |= key_t(i) << (4 * i);

    auto update = [&](key_t k, std::size_t t) -> key_t
    {
      if (pos[t] < 0)
        return k & ~hit_mask;
      key_t idx = static_cast<key_t>(pos[t]);
      std::size_t j = 0;
      while (digit(k, j) != idx)
        ++j;
      key_t low = k & ((key_t{1} << (4 * j)) - 1);     // digits before j
      key_t high = k & ~hit_mask & ~((key_t{1} << (4 * (j + 1))) - 1);
      return high | (low << 4) | idx | (key_t(j + 1) << 60);
    };

    std::vector<signed char> good(std::size_t{1} << r, -1);
    auto prio = [&](key_t k, std::size_t) -> unsigned
    {
      std::size_t h = k >> 60;
      std::size_t mask = 0;
      for (std::size_t i = 0; i < h; ++i)
        mask |= std::size_t{1} << digit(k, i);
      if (good[mask] < 0)
        {
          state_set x(n);
          for (std::size_t i = 0; i < r; ++i)
            if ((mask >> i) & 1)
              x.set(rel[i]);
          good[mask] = evaluate_on_loop(c, x, x);
        }
      return static_cast<unsigned>(2 * h + (good[mask] ? 0 : 1));
    };
    return build_product(a, canonical, update, prio, opt.lar_max_nodes);
  }

  parity_product
  to_parity_game(const arena& a, const winning_condition& c,
                 const solve_options& opt)
  {
    winning_condition storage;
    auto& cond = *strip_negation(c, storage);
    auto no_memory = [](key_t, std::size_t) -> key_t { return 0; };
    if (has_direct_priorities(cond))
      {
        auto pr = direct_priorities(cond);
        return build_product(a, 0, no_memory,
                             [&](key_t, std::size_t s) { return pr[s]; },
                             opt.lar_max_nodes);
      }
    if (cond.is<reachability>() || cond.is<safety>())
      {
        bool reach = cond.is<reachability>();
        state_set mark = reach ? cond.as<reachability>().target
                               : ~cond.as<safety>().safe;
        auto update = [&](key_t k, std::size_t t) -> key_t
        { return k | (mark.test(t) ? 1 : 0); };
        auto prio = [&](key_t k, std::size_t) -> unsigned
        { return reach ? (k ? 0 : 1) : (k ? 1 : 0); };
        return build_product(a, 0, update, prio, opt.lar_max_nodes);
      }
    return lar_reduce(a, cond, opt);
  }

  solution
  solve_game(const arena& a, const winning_condition& c,
             const solve_options& opt)
  {
    if (c.num_states != a.num_states())
      throw std::logic_error("condition and arena disagree on state count");
    winning_condition storage;
    auto& cond = *strip_negation(c, storage);
    std::size_t n = a.num_states();
    solution sol;
    if (auto* r = std::get_if<reachability>(&cond.cond))
      sol = solve_reach(a, player::sat, r->target);
    else if (auto* s = std::get_if<safety>(&cond.cond))
      sol = solve_reach(a, player::unsat, ~s->safe);
    else if (!opt.force_generic && (cond.is<buchi>() || cond.is<co_buchi>()))
      {
        bool b = cond.is<buchi>();
        player p = b ? player::sat : player::unsat;
        const state_set& f = b ? cond.as<buchi>().accept
                               : cond.as<co_buchi>().reject;
        state_set wp, wq;
        strategy_vec strat(n, no_move);
        solve_buchi(a, p, f, wp, wq, strat);
        sol = b ? positional(a, wp, wq, strat) : positional(a, wq, wp, strat);
      }
    else if (!opt.force_generic && cond.is<parity>())
      {
        auto ps = solve_parity(a, cond.as<parity>().priority);
        sol = positional(a, ps.win_sat, ps.win_unsat, ps.strategy);
      }
    else
      {
        auto prod = has_direct_priorities(cond) && !opt.force_generic
          ? to_parity_game(a, cond, opt) : lar_reduce(a, cond, opt);
        sol = from_product(a, prod, solve_parity(prod.game, prod.priority));
      }
    if (opt.verify && !verify_strategy(a, c, sol))
      throw std::logic_error("internal error: solver produced a strategy "
                             "that fails verification");
    return sol;
  }

  // ---------------------------------------------------------------------
  // Verification.

  namespace
  {
    // Iterative Tarjan over the nodes with keep[v]; calls visit(scc) for
    // every SCC that contains a cycle.
    void
    cyclic_sccs(const std::vector<std::vector<std::size_t>>& g,
                const std::vector<char>& keep,
                const std::function<void(const std::vector<std::size_t>&)>& visit)
    {
      std::size_t n = g.size();
      std::vector<std::size_t> index(n, no_move), low(n, 0);
      std::vector<char> on_stack(n, 0);
      std::vector<std::size_t> stack, scc;
      std::vector<std::pair<std::size_t, std::size_t>> call;
      std::size_t counter = 0;
      for (std::size_t root = 0; root < n; ++root)
        {
          if (!keep[root] || index[root] != no_move)
            continue;
          call.push_back({root, 0});
          index[root] = low[root] = counter++;
          stack.push_back(root);
          on_stack[root] = 1;
          while (!call.empty())
            {
              auto& [v, i] = call.back();
              if (i < g[v].size())
                {
                  auto w = g[v][i++];
                  if (!keep[w])
                    continue;
                  if (index[w] == no_move)
                    {
                      index[w] = low[w] = counter++;
                      stack.push_back(w);
                      on_stack[w] = 1;
                      call.push_back({w, 0});
                    }
                  else if (on_stack[w])
                    low[v] = std::min(low[v], index[w]);
                  continue;
                }
              auto done = v;
              call.pop_back();
              if (!call.empty())
                {
                  auto parent = call.back().first;
                  low[parent] = std::min(low[parent], low[done]);
                }
              if (low[done] != index[done])
                continue;
              scc.clear();
              std::size_t w;
              do
                {
                  w = stack.back();
                  stack.pop_back();
                  on_stack[w] = 0;
                  scc.push_back(w);
                }
              while (w != done);
              bool cyclic = scc.size() > 1
                || std::find(g[done].begin(), g[done].end(), done)
                   != g[done].end();
              if (cyclic)
                visit(scc);
            }
        }
    }

    // Plays of the arena with p's strategy fixed, over (memory, state).
    struct play_graph
    {
      std::vector<std::size_t> state;
      std::vector<std::vector<std::size_t>> succ;
      std::vector<std::size_t> starts;
      bool valid = true;
    };

    // Plays stop at states in \a stop (reachability already decided).
    play_graph
    fix_strategy(const arena& a, const solution& sol, player p,
                 const state_set* stop = nullptr)
    {
      std::size_t n = a.num_states();
      play_graph g;
      auto& strat = sol.strategy(p);
      if (sol.initial_memory.size() != n || strat.size() != sol.memory_size
          || sol.memory_update.size() != sol.memory_size)
        {
          g.valid = false;
          return g;
        }
      std::unordered_map<std::size_t, std::size_t> id;
      std::vector<std::size_t> mem;
      auto node = [&](std::size_t m, std::size_t s)
      {
        auto [it, fresh] = id.try_emplace(m * n + s, g.state.size());
        if (fresh)
          {
            g.state.push_back(s);
            mem.push_back(m);
          }
        return it->second;
      };
      auto& win = sol.win(p);
      for (auto s = win.find_first(); s != state_set::npos;
           s = win.find_next(s))
        {
          if (sol.initial_memory[s] >= sol.memory_size)
            {
              g.valid = false;
              return g;
            }
          g.starts.push_back(node(sol.initial_memory[s], s));
        }
      for (std::size_t v = 0; v < g.state.size(); ++v)
        {
          auto s = g.state[v];
          auto m = mem[v];
          std::vector<std::size_t> moves;
          if (stop && stop->test(s))
            ;
          else if (a.owner[s] == p)
            {
              auto t = strat[m][s];
              if (t == no_move
                  || !std::binary_search(a.succ[s].begin(), a.succ[s].end(), t))
                {
                  g.valid = false;
                  return g;
                }
              moves.push_back(t);
            }
          else
            moves = a.succ[s];
          std::vector<std::size_t> out;
          for (auto t: moves)
            {
              auto m2 = sol.memory_update[m][t];
              if (m2 >= sol.memory_size)
                {
                  g.valid = false;
                  return g;
                }
              out.push_back(node(m2, t));
            }
          g.succ.push_back(std::move(out));
        }
      return g;
    }

    bool
    all_plays_reach(const play_graph& g, const state_set& target)
    {
      std::vector<char> keep(g.state.size(), 0);
      std::vector<std::size_t> stack;
      for (auto v: g.starts)
        if (!target.test(g.state[v]) && !keep[v])
          {
            keep[v] = 1;
            stack.push_back(v);
          }
      while (!stack.empty())
        {
          auto v = stack.back();
          stack.pop_back();
          for (auto w: g.succ[v])
            if (!target.test(g.state[w]) && !keep[w])
              {
                keep[w] = 1;
                stack.push_back(w);
              }
        }
      bool cycle = false;
      cyclic_sccs(g.succ, keep, [&](auto&) { cycle = true; });
      return !cycle;
    }

    bool
    all_plays_stay(const play_graph& g, const state_set& safe)
    {
      // Every node of the graph is reachable from a start.
      for (auto s: g.state)
        if (!safe.test(s))
          return false;
      return true;
    }
  }

  bool
  verify_strategy(const arena& a, const winning_condition& c,
                  const solution& sol)
  {
    std::size_t n = a.num_states();
    if (sol.win_sat.size() != n || sol.win_unsat.size() != n
        || sol.win_sat.intersects(sol.win_unsat)
        || (sol.win_sat | sol.win_unsat).count() != n)
      return false;
    winning_condition storage;
    auto& cond = *strip_negation(c, storage);
    state_set goal(n);
    if (auto* r = std::get_if<reachability>(&cond.cond))
      goal = r->target;
    else if (auto* sf = std::get_if<safety>(&cond.cond))
      goal = ~sf->safe;
    for (player p: {player::sat, player::unsat})
      {
        bool sat = p == player::sat;
        // The player aiming at goal stops caring once it is reached.
        bool reaching = (cond.is<reachability>() && sat)
          || (cond.is<safety>() && !sat);
        auto g = fix_strategy(a, sol, p, reaching ? &goal : nullptr);
        if (!g.valid)
          return false;
        if (auto* r = std::get_if<reachability>(&cond.cond))
          {
            if (!(sat ? all_plays_reach(g, r->target)
                      : all_plays_stay(g, ~r->target)))
              return false;
            continue;
          }
        if (auto* s = std::get_if<safety>(&cond.cond))
          {
            if (!(sat ? all_plays_stay(g, s->safe)
                      : all_plays_reach(g, ~s->safe)))
              return false;
            continue;
          }
        std::vector<char> all(g.state.size(), 1);
        if (has_direct_priorities(cond))
          {
            auto pr = direct_priorities(cond);
            unsigned top = 0;
            for (auto x: pr)
              top = std::max(top, x);
            for (unsigned d = 0; d <= top; ++d)
              {
                if ((d % 2 == 0) == sat)
                  continue;
                std::vector<char> keep(g.state.size());
                for (std::size_t v = 0; v < g.state.size(); ++v)
                  keep[v] = pr[g.state[v]] <= d;
                bool bad = false;
                cyclic_sccs(g.succ, keep, [&](auto& scc)
                  {
                    for (auto v: scc)
                      if (pr[g.state[v]] == d)
                        bad = true;
                  });
                if (bad)
                  return false;
              }
            continue;
          }
        // Generic: for each X over the relevant states, is there a cycle
        // whose relevant projection is exactly X and that p loses?
        auto rel = members(relevant_states(cond));
        std::vector<int> pos(n, -1);
        for (std::size_t i = 0; i < rel.size(); ++i)
          pos[rel[i]] = static_cast<int>(i);
        if (rel.size() > 20)
          throw cap_exceeded("strategy check over more than 20 relevant states");
        for (std::size_t mask = 0; mask < (std::size_t{1} << rel.size()); ++mask)
          {
            state_set x(n);
            for (std::size_t i = 0; i < rel.size(); ++i)
              if ((mask >> i) & 1)
                x.set(rel[i]);
            if (evaluate_on_loop(cond, x, x) == sat)
              continue;
            std::vector<char> keep(g.state.size());
            for (std::size_t v = 0; v < g.state.size(); ++v)
              {
                int i = pos[g.state[v]];
                keep[v] = i < 0 || ((mask >> i) & 1);
              }
            bool bad = false;
            cyclic_sccs(g.succ, keep, [&](auto& scc)
              {
                std::size_t seen = 0;
                for (auto v: scc)
                  if (int i = pos[g.state[v]]; i >= 0)
                    seen |= std::size_t{1} << i;
                if (seen == mask)
                  bad = true;
              });
            if (bad)
              return false;
          }
      }
    return true;
  }

  // ---------------------------------------------------------------------
  // PGSolver format.

  std::string
  write_pgsolver(const arena& a, const std::vector<unsigned>& priority,
                 const std::vector<std::string>& names)
  {
    std::ostringstream out;
    std::size_t n = a.num_states();
    out << "parity " << (n ? n - 1 : 0) << ";\n";
    out << "start " << a.init << ";\n";
    for (std::size_t s = 0; s < n; ++s)
      {
        out << s << ' ' << priority[s] << ' '
            << (a.owner[s] == player::sat ? 0 : 1) << ' ';
        for (std::size_t i = 0; i < a.succ[s].size(); ++i)
          out << (i ? "," : "") << a.succ[s][i];
        if (s < names.size())
          {
            out << " \"";
            for (char ch: names[s])
              out << (ch == '"' ? '\'' : ch);
            out << '"';
          }
        out << ";\n";
      }
    return out.str();
  }

  pgsolver_game
  read_pgsolver(std::string_view text)
  {
    pgsolver_game g;
    std::size_t line_no = 0;
    std::optional<long> start;
    std::vector<std::vector<long>> raw_succ;
    std::unordered_map<long, std::size_t> index;
    auto fail = [&](const std::string& msg) -> void
    {
      throw input_error("PGSolver input, line " + std::to_string(line_no)
                        + ": " + msg);
    };
    std::istringstream in{std::string(text)};
    std::string statement;
    // Statements end with ';' and may span lines; track line numbers.
    std::string buf;
    for (std::string line; std::getline(in, line);)
      {
        ++line_no;
        for (char ch: line)
          {
            if (ch != ';')
              {
                buf += ch;
                continue;
              }
            std::istringstream st(buf);
            buf.clear();
            std::string first;
            if (!(st >> first))
              continue;
            if (first == "parity")
              continue;
            if (first == "start")
              {
                long v;
                if (!(st >> v))
                  fail("malformed start statement");
                start = v;
                continue;
              }
            long id;
            try
              {
                std::size_t used;
                id = std::stol(first, &used);
                if (used != first.size() || id < 0)
                  throw std::invalid_argument(first);
              }
            catch (const std::exception&)
              {
                fail("expected a node identifier, found \"" + first + "\"");
              }
            long pr, owner;
            std::string succs;
            if (!(st >> pr >> owner >> succs) || pr < 0)
              fail("expected \"priority owner successors\" after node "
                   + first);
            if (owner != 0 && owner != 1)
              fail("owner must be 0 or 1");
            std::vector<long> out;
            std::istringstream ss(succs);
            for (std::string item; std::getline(ss, item, ',');)
              {
                try
                  {
                    std::size_t used;
                    long v = std::stol(item, &used);
                    if (used != item.size())
                      throw std::invalid_argument(item);
                    out.push_back(v);
                  }
                catch (const std::exception&)
                  {
                    fail("bad successor \"" + item + "\"");
                  }
              }
            if (out.empty())
              fail("node " + first + " has no successor");
            std::string rest;
            std::getline(st, rest);
            auto q1 = rest.find('"'), q2 = rest.rfind('"');
            std::string name = q1 != std::string::npos && q2 > q1
              ? rest.substr(q1 + 1, q2 - q1 - 1) : std::to_string(id);
            if (!index.try_emplace(id, g.ids.size()).second)
              fail("node " + first + " defined twice");
            g.ids.push_back(id);
            g.names.push_back(name);
            g.priority.push_back(static_cast<unsigned>(pr));
            g.game.owner.push_back(owner == 0 ? player::sat : player::unsat);
            raw_succ.push_back(std::move(out));
          }
      }
    std::string tail = buf;
    tail.erase(0, tail.find_first_not_of(" \t\r\n"));
    if (!tail.empty())
      fail("statement not terminated by ';'");
    if (g.ids.empty())
      fail("no nodes");
    for (std::size_t v = 0; v < raw_succ.size(); ++v)
      {
        std::vector<std::size_t> out;
        for (auto w: raw_succ[v])
          {
            auto it = index.find(w);
            if (it == index.end())
              throw input_error("PGSolver input: node " + std::to_string(g.ids[v])
                                + " points to undefined node "
                                + std::to_string(w));
            out.push_back(it->second);
          }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        g.game.succ.push_back(std::move(out));
      }
    if (start)
      {
        auto it = index.find(*start);
        if (it == index.end())
          throw input_error("PGSolver input: start node "
                            + std::to_string(*start) + " is undefined");
        g.game.init = it->second;
      }
    return g;
  }
}
