#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <impmc/condition.hh>

namespace impmc
{
  /// LTL syntax tree.  The parser desugars F, G, ->, <-> so only these
  /// operators remain; nnf() further confines negation to atoms.
  struct ltl_formula
  {
    enum class op { tt, ff, atom, neg, conj, disj, next, until, release };

    op kind = op::tt;
    std::string atom;
    std::vector<ltl_formula> args;

    static ltl_formula truth(bool value);
    static ltl_formula prop(std::string name);
    static ltl_formula negate(ltl_formula f);
    static ltl_formula conj(ltl_formula a, ltl_formula b);
    static ltl_formula disj(ltl_formula a, ltl_formula b);
    static ltl_formula next(ltl_formula f);
    static ltl_formula until(ltl_formula a, ltl_formula b);
    static ltl_formula release(ltl_formula a, ltl_formula b);
    static ltl_formula eventually(ltl_formula f);   // tt U f
    static ltl_formula always(ltl_formula f);       // ff R f

    bool operator==(const ltl_formula&) const = default;
    bool operator<(const ltl_formula& o) const;
  };

  enum class ltl_fragment { cosafe, safe, inf, unsupported };

  const char* to_string(ltl_fragment f) noexcept;

  /// Operators: ! & | -> <-> X F G U R, true/false.  An identifier made
  /// only of the letters X, F, G is read as a chain of those operators.
  ltl_formula parse_ltl(std::string_view text);

  /// Negation normal form: neg only applies to atoms.
  ltl_formula nnf(const ltl_formula& f);
  ltl_formula negate_nnf(const ltl_formula& f);

  ltl_fragment classify_ltl(const ltl_formula& f);

  bool is_propositional(const ltl_formula& f);
  /// Propositional evaluation; \a holds tells whether an atom is true.
  template<class Holds>
  bool
  eval_propositional(const ltl_formula& f, const Holds& holds)
  {
    using op = ltl_formula::op;
    switch (f.kind)
      {
      case op::tt: return true;
      case op::ff: return false;
      case op::atom: return holds(f.atom);
      case op::neg: return !eval_propositional(f.args[0], holds);
      case op::conj:
        return eval_propositional(f.args[0], holds)
          && eval_propositional(f.args[1], holds);
      case op::disj:
        return eval_propositional(f.args[0], holds)
          || eval_propositional(f.args[1], holds);
      default:
        throw std::logic_error("eval_propositional on a temporal formula");
      }
  }

  std::set<std::string> atoms_of(const ltl_formula& f);

  /// Maps GF b to Inf({s : s |= b}) and FG b to !Inf({s : s |/= b}) over
  /// the effective labels (own name included).
  emerson_lei compile_inf_fragment(const ltl_formula& f,
                                   const std::vector<std::string>& states,
                                   const std::vector<std::set<std::string>>& labels);

  std::string to_string(const ltl_formula& f);
}
