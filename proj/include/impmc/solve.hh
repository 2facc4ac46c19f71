#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <impmc/condition.hh>
#include <impmc/model.hh>

namespace impmc
{
  inline constexpr std::size_t no_move = static_cast<std::size_t>(-1);

  /// Game graph with a total successor relation and an owner per state.
  struct arena
  {
    successor_lists succ;
    std::vector<player> owner;
    std::size_t init = 0;

    std::size_t num_states() const noexcept { return succ.size(); }
  };

  /// Sat owns exactly the states of the parts in \a c.
  arena build_arena(const kripke& k, const partition& p, const coalition& c);
  arena build_arena(const successor_lists& succ, const state_set& sat_states,
                    std::size_t init = 0);

  struct attractor_result
  {
    state_set region;
    /// For states of the attracting player in region minus target: a move
    /// that makes progress.  no_move elsewhere.
    std::vector<std::size_t> strategy;
  };

  /// States from which \a p forces a visit to \a target.
  attractor_result attractor(const arena& a, player p, const state_set& target);

  /// Winning regions and finite-memory strategies.  Memory 0 .. size-1;
  /// a play from s starts in initial_memory[s] and after moving to t the
  /// memory becomes memory_update[m][t].
  struct solution
  {
    state_set win_sat, win_unsat;
    std::size_t memory_size = 1;
    std::vector<std::size_t> initial_memory;
    std::vector<std::vector<std::size_t>> memory_update;      // [m][t]
    std::vector<std::vector<std::size_t>> strategy_sat;       // [m][s]
    std::vector<std::vector<std::size_t>> strategy_unsat;     // [m][s]

    const std::vector<std::vector<std::size_t>>&
    strategy(player p) const
    {
      return p == player::sat ? strategy_sat : strategy_unsat;
    }
    const state_set& win(player p) const
    {
      return p == player::sat ? win_sat : win_unsat;
    }
  };

  struct solve_options
  {
    /// Relevant-state bound of the generic path.
    std::size_t lar_max_relevant = 12;
    /// Product-node bound of the generic path.
    std::size_t lar_max_nodes = std::size_t{1} << 20;
    /// Route Büchi, co-Büchi and parity through the generic path too.
    bool force_generic = false;
    /// Check strategies before returning (throws std::logic_error).
    bool verify = true;
  };

  solution solve_game(const arena& a, const winning_condition& c,
                      const solve_options& opt = {});

  /// Positional solution of a max-even parity game.
  struct parity_solution
  {
    state_set win_sat, win_unsat;
    std::vector<std::size_t> strategy;    // for the winner's own states
  };

  parity_solution solve_parity(const arena& a,
                               const std::vector<unsigned>& priority);

  /// Parity game over (state, memory) pairs equivalent to a condition.
  struct parity_product
  {
    arena game;
    std::vector<unsigned> priority;
    std::vector<std::size_t> state;             // node -> arena state
    std::vector<std::size_t> memory;            // node -> memory id
    std::vector<std::size_t> initial_node;      // arena state -> node
    std::size_t memory_size = 1;
    std::vector<std::vector<std::size_t>> memory_update;   // [m][t]
  };

  /// Latest-appearance-record product over the relevant states of a
  /// loop-determined condition.
  parity_product lar_reduce(const arena& a, const winning_condition& c,
                            const solve_options& opt = {});

  /// Any condition as a parity game: direct priorities for Büchi, co-Büchi
  /// and parity, a visited bit for reachability/safety, LAR otherwise.
  parity_product to_parity_game(const arena& a, const winning_condition& c,
                                const solve_options& opt = {});

  /// Independent check: from every state of win(p), every play consistent
  /// with p's strategy is won by p.
  bool verify_strategy(const arena& a, const winning_condition& c,
                       const solution& s);

  /// PGSolver text: "parity N;" then "id priority owner s1,s2,... ;" where
  /// owner 0 is Sat.  Max-even convention, as solve_parity.
  std::string write_pgsolver(const arena& a,
                             const std::vector<unsigned>& priority,
                             const std::vector<std::string>& names = {});

  struct pgsolver_game
  {
    arena game;
    std::vector<unsigned> priority;
    std::vector<std::string> names;
    std::vector<long> ids;                 // identifiers from the file
  };

  pgsolver_game read_pgsolver(std::string_view text);
}
