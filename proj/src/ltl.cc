#include <impmc/ltl.hh>

#include <algorithm>

#include <impmc/detail/lexer.hh>

namespace impmc
{
  using detail::tok;
  using detail::token_stream;
  using op = ltl_formula::op;

  ltl_formula
  ltl_formula::truth(bool value)
  {
    ltl_formula f;
    f.kind = value ? op::tt : op::ff;
    return f;
  }

  ltl_formula
  ltl_formula::prop(std::string name)
  {
    ltl_formula f;
    f.kind = op::atom;
    f.atom = std::move(name);
    return f;
  }

  namespace
  {
    ltl_formula
    make(op k, std::vector<ltl_formula> args)
    {
      ltl_formula f;
      f.kind = k;
      f.args = std::move(args);
      return f;
    }
  }

  ltl_formula ltl_formula::negate(ltl_formula f) { return make(op::neg, {std::move(f)}); }
  ltl_formula ltl_formula::next(ltl_formula f) { return make(op::next, {std::move(f)}); }

  ltl_formula
  ltl_formula::conj(ltl_formula a, ltl_formula b)
  {
    return make(op::conj, {std::move(a), std::move(b)});
  }

  ltl_formula
  ltl_formula::disj(ltl_formula a, ltl_formula b)
  {
    return make(op::disj, {std::move(a), std::move(b)});
  }

  ltl_formula
  ltl_formula::until(ltl_formula a, ltl_formula b)
  {
    return make(op::until, {std::move(a), std::move(b)});
  }

  ltl_formula
  ltl_formula::release(ltl_formula a, ltl_formula b)
  {
    return make(op::release, {std::move(a), std::move(b)});
  }

  ltl_formula
  ltl_formula::eventually(ltl_formula f)
  {
    return until(truth(true), std::move(f));
  }

  ltl_formula
  ltl_formula::always(ltl_formula f)
  {
    return release(truth(false), std::move(f));
  }

  bool
  ltl_formula::operator<(const ltl_formula& o) const
  {
    if (kind != o.kind)
      return kind < o.kind;
    if (atom != o.atom)
      return atom < o.atom;
    return std::lexicographical_compare(args.begin(), args.end(),
                                        o.args.begin(), o.args.end());
  }

  const char*
  to_string(ltl_fragment f) noexcept
  {
    switch (f)
      {
      case ltl_fragment::cosafe: return "co-safety";
      case ltl_fragment::safe: return "safety";
      case ltl_fragment::inf: return "recurrence/persistence";
      case ltl_fragment::unsupported: return "unsupported";
      }
    return "?";
  }

  // ---------------------------------------------------------------------
  // Parser.  Precedence, loosest first: <->, -> (right), |, &, U/R (right),
  // unary.

  namespace
  {
    bool
    operator_chain(const std::string& s)
    {
      return !s.empty() && s.find_first_not_of("XFG") == std::string::npos;
    }

    bool
    reserved(const std::string& s)
    {
      return s == "U" || s == "R" || s == "W" || s == "M";
    }

    class ltl_parser
    {
    public:
      explicit ltl_parser(std::string_view text)
        : ts_(text, "LTL formula")
      {
      }

      ltl_formula
      parse()
      {
        auto f = parse_iff();
        if (!ts_.at_end())
          ts_.fail("unexpected trailing input");
        return f;
      }

    private:
      ltl_formula
      parse_iff()
      {
        auto f = parse_implies();
        while (ts_.accept(tok::iff))
          {
            auto g = parse_implies();
            f = ltl_formula::disj(ltl_formula::conj(f, g),
                                  ltl_formula::conj(ltl_formula::negate(f),
                                                    ltl_formula::negate(g)));
          }
        return f;
      }

      ltl_formula
      parse_implies()
      {
        auto f = parse_or();
        if (ts_.accept(tok::implies))
          return ltl_formula::disj(ltl_formula::negate(std::move(f)),
                                   parse_implies());
        return f;
      }

      ltl_formula
      parse_or()
      {
        auto f = parse_and();
        while (ts_.accept(tok::bar))
          f = ltl_formula::disj(std::move(f), parse_and());
        return f;
      }

      ltl_formula
      parse_and()
      {
        auto f = parse_binary();
        while (ts_.accept(tok::amp))
          f = ltl_formula::conj(std::move(f), parse_binary());
        return f;
      }

      ltl_formula
      parse_binary()
      {
        auto f = parse_unary();
        auto& t = ts_.peek();
        if (t.kind == tok::ident && (t.text == "U" || t.text == "R"))
          {
            bool u = ts_.next().text == "U";
            auto g = parse_binary();
            return u ? ltl_formula::until(std::move(f), std::move(g))
                     : ltl_formula::release(std::move(f), std::move(g));
          }
        return f;
      }

      ltl_formula
      parse_unary()
      {
        if (ts_.accept(tok::bang))
          return ltl_formula::negate(parse_unary());
        if (ts_.accept(tok::lparen))
          {
            auto f = parse_iff();
            ts_.expect(tok::rparen, "')'");
            return f;
          }
        auto& t = ts_.expect(tok::ident, "formula");
        if (t.text == "true")
          return ltl_formula::truth(true);
        if (t.text == "false")
          return ltl_formula::truth(false);
        if (reserved(t.text))
          ts_.fail_at(t, "binary operator " + t.text + " lacks a left operand");
        if (operator_chain(t.text))
          {
            auto f = parse_unary();
            for (auto c = t.text.rbegin(); c != t.text.rend(); ++c)
              switch (*c)
                {
                case 'X': f = ltl_formula::next(std::move(f)); break;
                case 'F': f = ltl_formula::eventually(std::move(f)); break;
                default: f = ltl_formula::always(std::move(f)); break;
                }
            return f;
          }
        return ltl_formula::prop(t.text);
      }

      token_stream ts_;
    };
  }

  ltl_formula
  parse_ltl(std::string_view text)
  {
    return ltl_parser(text).parse();
  }

  // ---------------------------------------------------------------------

  ltl_formula
  nnf(const ltl_formula& f)
  {
    switch (f.kind)
      {
      case op::tt:
      case op::ff:
      case op::atom:
        return f;
      case op::neg:
        return negate_nnf(f.args[0]);
      default:
        {
          ltl_formula g = f;
          for (auto& a: g.args)
            a = nnf(a);
          return g;
        }
      }
  }

  ltl_formula
  negate_nnf(const ltl_formula& f)
  {
    switch (f.kind)
      {
      case op::tt: return ltl_formula::truth(false);
      case op::ff: return ltl_formula::truth(true);
      case op::atom: return ltl_formula::negate(f);
      case op::neg: return nnf(f.args[0]);
      case op::conj:
        return ltl_formula::disj(negate_nnf(f.args[0]), negate_nnf(f.args[1]));
      case op::disj:
        return ltl_formula::conj(negate_nnf(f.args[0]), negate_nnf(f.args[1]));
      case op::next:
        return ltl_formula::next(negate_nnf(f.args[0]));
      case op::until:
        return ltl_formula::release(negate_nnf(f.args[0]),
                                    negate_nnf(f.args[1]));
      case op::release:
        return ltl_formula::until(negate_nnf(f.args[0]),
                                  negate_nnf(f.args[1]));
      }
    return f;
  }

  bool
  is_propositional(const ltl_formula& f)
  {
    switch (f.kind)
      {
      case op::tt: case op::ff: case op::atom: return true;
      case op::neg: case op::conj: case op::disj:
        for (auto& a: f.args)
          if (!is_propositional(a))
            return false;
        return true;
      default:
        return false;
      }
  }

  namespace
  {
    // Uses only atoms, &, |, X and the temporal operator \a allowed.
    bool
    in_fragment(const ltl_formula& f, op allowed)
    {
      switch (f.kind)
        {
        case op::tt: case op::ff: case op::atom: case op::neg:
          return true;
        case op::until:
        case op::release:
          if (f.kind != allowed)
            return false;
          [[fallthrough]];
        default:
          for (auto& a: f.args)
            if (!in_fragment(a, allowed))
              return false;
          return true;
        }
    }

    bool
    is_tt(const ltl_formula& f)
    {
      return f.kind == op::tt;
    }

    bool
    is_ff(const ltl_formula& f)
    {
      return f.kind == op::ff;
    }

    // GF b in NNF: ff R (tt U b).
    const ltl_formula*
    match_gf(const ltl_formula& f)
    {
      if (f.kind == op::release && is_ff(f.args[0])
          && f.args[1].kind == op::until && is_tt(f.args[1].args[0])
          && is_propositional(f.args[1].args[1]))
        return &f.args[1].args[1];
      return nullptr;
    }

    // FG b in NNF: tt U (ff R b).
    const ltl_formula*
    match_fg(const ltl_formula& f)
    {
      if (f.kind == op::until && is_tt(f.args[0])
          && f.args[1].kind == op::release && is_ff(f.args[1].args[0])
          && is_propositional(f.args[1].args[1]))
        return &f.args[1].args[1];
      return nullptr;
    }

    bool
    is_inf_shape(const ltl_formula& f)
    {
      switch (f.kind)
        {
        case op::tt: case op::ff:
          return true;
        case op::conj: case op::disj:
          return is_inf_shape(f.args[0]) && is_inf_shape(f.args[1]);
        default:
          return match_gf(f) || match_fg(f);
        }
    }

    void
    collect_atoms(const ltl_formula& f, std::set<std::string>& out)
    {
      if (f.kind == op::atom)
        out.insert(f.atom);
      for (auto& a: f.args)
        collect_atoms(a, out);
    }
  }

  ltl_fragment
  classify_ltl(const ltl_formula& f)
  {
    auto g = nnf(f);
    if (in_fragment(g, op::until))
      return ltl_fragment::cosafe;
    if (in_fragment(g, op::release))
      return ltl_fragment::safe;
    if (is_inf_shape(g))
      return ltl_fragment::inf;
    return ltl_fragment::unsupported;
  }

  std::set<std::string>
  atoms_of(const ltl_formula& f)
  {
    std::set<std::string> out;
    collect_atoms(f, out);
    return out;
  }

  namespace
  {
    el_formula
    to_el(const ltl_formula& f, const std::vector<std::string>& states,
          const std::vector<std::set<std::string>>& labels)
    {
      std::size_t n = states.size();
      auto sat_set = [&](const ltl_formula& beta)
      {
        state_set s(n);
        for (std::size_t i = 0; i < n; ++i)
          if (eval_propositional(beta, [&](const std::string& a)
                                 { return a == states[i] || labels[i].count(a); }))
            s.set(i);
        return s;
      };
      switch (f.kind)
        {
        case op::tt: return el_formula::truth(true);
        case op::ff: return el_formula::truth(false);
        case op::conj:
          return el_formula::conj(to_el(f.args[0], states, labels),
                                  to_el(f.args[1], states, labels));
        case op::disj:
          return el_formula::disj(to_el(f.args[0], states, labels),
                                  to_el(f.args[1], states, labels));
        default:
          break;
        }
      if (auto beta = match_gf(f))
        return el_formula::inf(sat_set(*beta));
      if (auto beta = match_fg(f))
        return el_formula::negate(el_formula::inf(~sat_set(*beta)));
      throw input_error("formula " + to_string(f)
                        + " is not a combination of GF/FG over state formulas");
    }
  }

  emerson_lei
  compile_inf_fragment(const ltl_formula& f,
                       const std::vector<std::string>& states,
                       const std::vector<std::set<std::string>>& labels)
  {
    return {to_el(nnf(f), states, labels)};
  }

  std::string
  to_string(const ltl_formula& f)
  {
    switch (f.kind)
      {
      case op::tt: return "true";
      case op::ff: return "false";
      case op::atom: return f.atom;
      case op::neg: return "!" + to_string(f.args[0]);
      case op::next: return "X " + to_string(f.args[0]);
      case op::conj:
        return "(" + to_string(f.args[0]) + " & " + to_string(f.args[1]) + ")";
      case op::disj:
        return "(" + to_string(f.args[0]) + " | " + to_string(f.args[1]) + ")";
      case op::until:
        if (is_tt(f.args[0]))
          return "F " + to_string(f.args[1]);
        return "(" + to_string(f.args[0]) + " U " + to_string(f.args[1]) + ")";
      case op::release:
        if (is_ff(f.args[0]))
          return "G " + to_string(f.args[1]);
        return "(" + to_string(f.args[0]) + " R " + to_string(f.args[1]) + ")";
      }
    return "?";
  }
}
