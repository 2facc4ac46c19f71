#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include <impmc/common.hh>
#include <impmc/model.hh>

namespace impmc
{
  /// Boolean formula over atoms Inf(C): "some state of C recurs".
  struct el_formula
  {
    enum class op { tt, ff, inf, neg, conj, disj };

    op kind = op::tt;
    state_set set;                    // for op::inf
    std::vector<el_formula> args;

    static el_formula truth(bool value);
    static el_formula inf(state_set s);
    static el_formula negate(el_formula f);
    static el_formula conj(el_formula a, el_formula b);
    static el_formula disj(el_formula a, el_formula b);

    bool eval(const state_set& inf_set) const;
    bool operator==(const el_formula&) const = default;
  };

  struct winning_condition;

  struct reachability { state_set target; };
  struct safety { state_set safe; };
  struct buchi { state_set accept; };
  struct co_buchi { state_set reject; };
  /// Max priority seen infinitely often; even wins for Sat.
  struct parity { std::vector<unsigned> priority; };
  /// Pair (E, F): E visited infinitely often, F only finitely often.
  struct rabin_pair
  {
    state_set e, f;
    bool operator==(const rabin_pair&) const = default;
  };
  struct rabin { std::vector<rabin_pair> pairs; };
  struct streett { std::vector<rabin_pair> pairs; };
  struct explicit_muller { std::vector<state_set> accepting; };
  struct emerson_lei { el_formula formula; };
  struct negated { std::shared_ptr<const winning_condition> inner; };

  /// Winning condition of Sat over a universe of num_states states.
  struct winning_condition
  {
    using variant_type = std::variant<reachability, safety, buchi, co_buchi,
                                      parity, rabin, streett, explicit_muller,
                                      emerson_lei, negated>;
    variant_type cond;
    std::size_t num_states = 0;

    template<class T>
    bool is() const noexcept { return std::holds_alternative<T>(cond); }
    template<class T>
    const T& as() const { return std::get<T>(cond); }
  };

  winning_condition make_negated(winning_condition c);

  /// Verdict for an ultimately periodic play that visits exactly
  /// \a prefix_visited and recurs exactly on \a inf_set.  Loop-determined
  /// variants only look at \a inf_set; with an empty \a inf_set they report
  /// the verdict of a play that avoids relevant_states() from some point on.
  bool evaluate_on_loop(const winning_condition& c, const state_set& inf_set,
                        const state_set& prefix_visited);

  /// False only for reachability and safety (and negations thereof).
  bool is_loop_determined(const winning_condition& c);

  /// States on which a loop-determined verdict depends: the verdict of
  /// inf_set equals the verdict of inf_set ∩ relevant_states().
  state_set relevant_states(const winning_condition& c);

  /// Structural complement.  Explicit Muller families are complemented
  /// over all nonempty subsets, or only over strongly connected subsets of
  /// \a graph when one is supplied; falls back to Negated above 16 states.
  winning_condition complement(const winning_condition& c,
                               const successor_lists* graph = nullptr);

  /// Parses "buchi: {s,...}", "parity: s=k, ...", "rabin: ({..},{..}); ..."
  /// and friends over the given state names.
  winning_condition parse_condition(std::string_view text,
                                    const std::vector<std::string>& states);

  /// Parses the Boolean formula of an "el:" condition.
  el_formula parse_el_formula(std::string_view text,
                              const std::vector<std::string>& states);

  std::string to_string(const winning_condition& c,
                        const std::vector<std::string>& states);
  std::string to_string(const el_formula& f,
                        const std::vector<std::string>& states);
}
