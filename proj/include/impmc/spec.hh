#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <impmc/condition.hh>
#include <impmc/ctl.hh>
#include <impmc/ltl.hh>
#include <impmc/model.hh>
#include <impmc/monitor.hh>

namespace impmc
{
  /// A parsed "--spec" argument: a winning condition, an LTL formula of a
  /// supported fragment, or a CTL formula.
  struct specification
  {
    enum class kind { condition, ltl, ctl };
    kind k = kind::condition;
    std::string text;                          // as given
    std::optional<winning_condition> cond;     // kind::condition
    std::optional<ltl_formula> ltl;            // kind::ltl
    ltl_fragment fragment = ltl_fragment::unsupported;
    std::optional<ctl_formula> ctl;            // kind::ctl
  };

  /// Parses "kind: body".  Conditions and LTL need a Kripke model, CTL an
  /// MTS.  Atoms must be propositions or state names of \a m.
  specification parse_spec(std::string_view text, const model& m);

  /// A turn-based game ready for build_arena: the model itself or its
  /// product with a monitor, with the partition lifted accordingly.
  struct linear_game
  {
    kripke system;
    winning_condition cond;
    partition parts;
    std::vector<std::size_t> projection;       // game state -> model state
    std::size_t monitor_states = 0;            // 0 without a monitor
  };

  linear_game prepare_linear_game(const model& m, const specification& s,
                                  std::size_t monitor_cap = default_monitor_cap);
}
