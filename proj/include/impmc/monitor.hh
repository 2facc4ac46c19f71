#pragma once

#include <string>
#include <vector>

#include <impmc/condition.hh>
#include <impmc/ltl.hh>
#include <impmc/model.hh>

namespace impmc
{
  /// Deterministic complete automaton over the letters 2^atoms.  Accepting
  /// states are sinks.  With cosafe polarity acceptance means a good prefix
  /// of the formula was read; with safe polarity, a bad prefix.
  struct monitor
  {
    enum class polarity { cosafe, safe };

    std::vector<std::string> atoms;           // letter bit i <-> atoms[i]
    std::vector<std::vector<std::size_t>> delta;  // [state][letter]
    std::vector<bool> accepting;
    std::size_t init = 0;
    polarity pol = polarity::cosafe;

    std::size_t num_states() const noexcept { return delta.size(); }
    std::size_t num_letters() const noexcept { return std::size_t{1} << atoms.size(); }
    /// Letter read at a state whose effective label satisfies \a holds.
    template<class Holds>
    std::size_t
    letter(const Holds& holds) const
    {
      std::size_t l = 0;
      for (std::size_t i = 0; i < atoms.size(); ++i)
        if (holds(atoms[i]))
          l |= std::size_t{1} << i;
      return l;
    }
    std::size_t run(const std::vector<std::size_t>& word) const;
  };

  constexpr std::size_t default_monitor_cap = 4096;

  /// Builds the monitor of a co-safety or safety formula by formula
  /// progression, then merges states whose verdict is already decided.
  monitor compile_monitor(const ltl_formula& f,
                          std::size_t cap = default_monitor_cap);

  struct product
  {
    kripke system;
    winning_condition cond;
    std::vector<std::size_t> projection;      // product state -> model state
    std::vector<std::size_t> memory;          // product state -> monitor state
  };

  /// Synchronous product reachable from (init, delta(q0, label(init))).
  product product_game(const kripke& k, const monitor& m);

  /// Part i of the product owns every copy of a state of part i.
  partition lift_partition(const partition& p,
                           const std::vector<std::size_t>& projection);
}
