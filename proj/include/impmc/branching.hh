#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <impmc/ctl.hh>
#include <impmc/model.hh>
#include <impmc/shapley.hh>

namespace impmc
{
  /// Successor sets chosen for some states: must ⊆ choice ⊆ may.
  struct pure_strategy
  {
    std::vector<std::size_t> states;
    std::vector<std::vector<std::size_t>> choice;     // per entry of states
  };

  /// The pure strategies of the owner of \a owned, indexed by a binary
  /// counter whose bits are the optional edges (may minus must) of the
  /// owned states in state order.  Index 0 keeps only must edges; the last
  /// index takes every may edge.
  class strategy_space
  {
  public:
    strategy_space(const mts& m, const state_set& owned);

    /// Number of optional edges, i.e. log2 of the strategy count.
    std::size_t bits() const noexcept { return edges_.size(); }
    /// Strategy count; throws cap_exceeded above 2^62.
    std::uint64_t size() const;

    /// Overwrites the successor lists of the owned states.
    void apply(std::uint64_t index, successor_lists& succ) const;
    pure_strategy at(std::uint64_t index) const;
    /// One character per optional edge, '1' when kept; "-" when there is
    /// no optional edge.
    std::string describe(std::uint64_t index) const;

  private:
    const mts* m_;
    std::vector<std::size_t> owned_;
    std::vector<std::pair<std::size_t, std::size_t>> edges_;   // (s, t)
  };

  std::vector<pure_strategy> enumerate_pure_strategies(const mts& m,
                                                       const state_set& owned,
                                                       std::size_t cap = std::size_t{1} << 20);

  /// Each state follows the strategy of its owner.
  kripke induced_kripke(const mts& m, const pure_strategy& sat,
                        const pure_strategy& unsat);

  constexpr std::uint64_t default_profile_cap = std::uint64_t{1} << 24;

  struct two_turn_result
  {
    bool value = false;
    /// Lowest winning Sat strategy index, when value holds.
    std::optional<std::uint64_t> witness;
  };

  /// Exists a Sat strategy such that for all Unsat strategies the induced
  /// structure satisfies \a f.  \a sat_states are the states Sat owns.
  two_turn_result two_turn_value(const mts& m, const ctl_formula& f,
                                 const state_set& sat_states,
                                 std::uint64_t cap = default_profile_cap,
                                 unsigned jobs = 1);

  /// The game where Unsat commits first: 1 - two_turn_value of the
  /// negated formula with the roles of the states swapped.
  bool dual_two_turn_value(const mts& m, const ctl_formula& f,
                           const state_set& sat_states,
                           std::uint64_t cap = default_profile_cap,
                           unsigned jobs = 1);

  /// Coalition-of-parts oracles over m.parts.
  binary_oracle two_turn_oracle(const model& m, const ctl_formula& f,
                                bool dual = false,
                                std::uint64_t cap = default_profile_cap);
}
