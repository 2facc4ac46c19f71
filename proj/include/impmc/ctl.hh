#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <impmc/model.hh>

namespace impmc
{
  /// CTL over the core operators; the parser desugars AX, EF, AF, EG, AG,
  /// ->, <->, and the release forms.
  struct ctl_formula
  {
    enum class op { tt, ff, atom, neg, conj, disj, ex, eu, au };

    op kind = op::tt;
    std::string atom;
    std::vector<ctl_formula> args;

    static ctl_formula truth(bool value);
    static ctl_formula prop(std::string name);
    static ctl_formula negate(ctl_formula f);
    static ctl_formula conj(ctl_formula a, ctl_formula b);
    static ctl_formula disj(ctl_formula a, ctl_formula b);
    static ctl_formula ex(ctl_formula f);
    static ctl_formula eu(ctl_formula a, ctl_formula b);
    static ctl_formula au(ctl_formula a, ctl_formula b);
    static ctl_formula ax(ctl_formula f);
    static ctl_formula ef(ctl_formula f);
    static ctl_formula af(ctl_formula f);
    static ctl_formula eg(ctl_formula f);
    static ctl_formula ag(ctl_formula f);

    bool operator==(const ctl_formula&) const = default;
  };

  /// Accepts "A φ U ψ", "A(φ U ψ)", "A[φ U ψ]" and likewise for E and R;
  /// "AG φ" or "A G φ".  Identifiers spelled as [AE][XFG] pairs such as
  /// "EXEF" are read as operator chains.
  ctl_formula parse_ctl(std::string_view text);

  std::set<std::string> atoms_of(const ctl_formula& f);
  std::string to_string(const ctl_formula& f);

  /// A formula compiled into a subformula DAG evaluated bottom-up.
  class ctl_checker
  {
  public:
    explicit ctl_checker(const ctl_formula& f);

    const std::vector<std::string>& atoms() const noexcept { return atoms_; }

    /// Satisfaction sets of atoms() over the effective labels; throws
    /// input_error on an atom that is neither a proposition nor a state.
    std::vector<state_set> bind(const std::vector<std::string>& states,
                                const std::set<std::string>& props,
                                const std::vector<std::set<std::string>>& labels) const;

    /// States satisfying the formula.  \a succ must be total.
    state_set sat(const successor_lists& succ,
                  const std::vector<state_set>& atom_sets) const;

    bool holds(const kripke& k) const;

  private:
    struct node
    {
      ctl_formula::op kind;
      std::size_t a = 0, b = 0;                 // child node or atom index
    };
    std::size_t compile(const ctl_formula& f);

    std::vector<node> nodes_;
    std::vector<std::string> atoms_;
  };

  /// Does the initial state satisfy \a f?
  bool check_ctl(const kripke& k, const ctl_formula& f);
}
