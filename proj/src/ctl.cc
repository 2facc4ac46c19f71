#include <impmc/ctl.hh>

#include <algorithm>
#include <map>
#include <regex>

#include <impmc/detail/lexer.hh>

namespace impmc
{
  using detail::tok;
  using detail::token_stream;
  using op = ctl_formula::op;

  namespace
  {
    ctl_formula
    make(op k, std::vector<ctl_formula> args)
    {
      ctl_formula f;
      f.kind = k;
      f.args = std::move(args);
      return f;
    }
  }

  ctl_formula
  ctl_formula::truth(bool value)
  {
    ctl_formula f;
    f.kind = value ? op::tt : op::ff;
    return f;
  }

  ctl_formula
  ctl_formula::prop(std::string name)
  {
    ctl_formula f;
    f.kind = op::atom;
    f.atom = std::move(name);
    return f;
  }

  ctl_formula ctl_formula::negate(ctl_formula f) { return make(op::neg, {std::move(f)}); }
  ctl_formula ctl_formula::ex(ctl_formula f) { return make(op::ex, {std::move(f)}); }

  ctl_formula
  ctl_formula::conj(ctl_formula a, ctl_formula b)
  {
    return make(op::conj, {std::move(a), std::move(b)});
  }

  ctl_formula
  ctl_formula::disj(ctl_formula a, ctl_formula b)
  {
    return make(op::disj, {std::move(a), std::move(b)});
  }

  ctl_formula
  ctl_formula::eu(ctl_formula a, ctl_formula b)
  {
    return make(op::eu, {std::move(a), std::move(b)});
  }

  ctl_formula
  ctl_formula::au(ctl_formula a, ctl_formula b)
  {
    return make(op::au, {std::move(a), std::move(b)});
  }

  ctl_formula ctl_formula::ax(ctl_formula f) { return negate(ex(negate(std::move(f)))); }
  ctl_formula ctl_formula::ef(ctl_formula f) { return eu(truth(true), std::move(f)); }
  ctl_formula ctl_formula::af(ctl_formula f) { return au(truth(true), std::move(f)); }
  ctl_formula ctl_formula::eg(ctl_formula f) { return negate(af(negate(std::move(f)))); }
  ctl_formula ctl_formula::ag(ctl_formula f) { return negate(ef(negate(std::move(f)))); }

  // ---------------------------------------------------------------------
  // Parser.  Path formulas (X φ, F φ, G φ, φ U ψ, φ R ψ) only exist as the
  // operand of A or E; the parser carries them in a tagged result.

  namespace
  {
    struct parsed
    {
      enum class path { none, x, f, g, u, r } shape = path::none;
      ctl_formula f, g;         // operands; f alone for state formulas
    };

    bool
    quantifier_chain(const std::string& s)
    {
      static const std::regex re("([AE][XFG])+");
      return std::regex_match(s, re);
    }

    class ctl_parser
    {
    public:
      explicit ctl_parser(std::string_view text)
        : ts_(text, "CTL formula")
      {
        // Expand "EXEF" style identifiers into single-letter tokens so the
        // grammar below only deals with A, E, X, F, G.
        std::vector<detail::token> out;
        for (std::size_t i = 0;; ++i)
          {
            auto& t = ts_.peek(i);
            if (t.kind == tok::ident && quantifier_chain(t.text))
              for (std::size_t k = 0; k < t.text.size(); ++k)
                out.push_back({tok::ident, t.text.substr(k, 1), t.pos + k});
            else
              out.push_back(t);
            if (t.kind == tok::end)
              break;
          }
        toks_ = std::move(out);
      }

      ctl_formula
      parse()
      {
        auto f = state(parse_iff(), peek());
        if (peek().kind != tok::end)
          fail_at(peek(), "unexpected trailing input");
        return f;
      }

    private:
      const detail::token& peek() const { return toks_[i_]; }
      const detail::token& next() { return toks_[i_++]; }

      bool
      accept(tok k)
      {
        if (peek().kind != k)
          return false;
        ++i_;
        return true;
      }

      bool
      accept_word(const char* w)
      {
        if (peek().kind != tok::ident || peek().text != w)
          return false;
        ++i_;
        return true;
      }

      [[noreturn]] void
      fail_at(const detail::token& t, const std::string& msg) const
      {
        std::string found = t.kind == tok::end ? "end of input"
                                               : "\"" + t.text + "\"";
        throw input_error("syntax error in CTL formula at position "
                          + std::to_string(t.pos) + ": " + msg + ", found "
                          + found);
      }

      void
      expect(tok k, const char* what)
      {
        if (!accept(k))
          fail_at(peek(), std::string("expected ") + what);
      }

      ctl_formula
      state(parsed p, const detail::token& at) const
      {
        if (p.shape != parsed::path::none)
          fail_at(at, "path formula must be quantified with A or E");
        return std::move(p.f);
      }

      parsed
      plain(ctl_formula f)
      {
        return {parsed::path::none, std::move(f), {}};
      }

      parsed
      parse_iff()
      {
        auto at = peek();
        auto p = parse_implies();
        while (accept(tok::iff))
          {
            auto f = state(std::move(p), at);
            auto g = state(parse_implies(), at);
            p = plain(ctl_formula::disj(
                        ctl_formula::conj(f, g),
                        ctl_formula::conj(ctl_formula::negate(f),
                                          ctl_formula::negate(g))));
          }
        return p;
      }

      parsed
      parse_implies()
      {
        auto at = peek();
        auto p = parse_or();
        if (accept(tok::implies))
          {
            auto f = state(std::move(p), at);
            auto g = state(parse_implies(), at);
            return plain(ctl_formula::disj(ctl_formula::negate(f), g));
          }
        return p;
      }

      parsed
      parse_or()
      {
        auto at = peek();
        auto p = parse_and();
        while (accept(tok::bar))
          {
            auto f = state(std::move(p), at);
            p = plain(ctl_formula::disj(f, state(parse_and(), at)));
          }
        return p;
      }

      parsed
      parse_and()
      {
        auto at = peek();
        auto p = parse_binary();
        while (accept(tok::amp))
          {
            auto f = state(std::move(p), at);
            p = plain(ctl_formula::conj(f, state(parse_binary(), at)));
          }
        return p;
      }

      parsed
      parse_binary()
      {
        auto at = peek();
        auto p = parse_unary();
        if (peek().kind == tok::ident
            && (peek().text == "U" || peek().text == "R"))
          {
            bool u = next().text == "U";
            auto f = state(std::move(p), at);
            auto rhs_at = peek();
            auto g = state(parse_unary(), rhs_at);
            return {u ? parsed::path::u : parsed::path::r, f, g};
          }
        return p;
      }

      ctl_formula
      quantify(bool universal, parsed p, const detail::token& at)
      {
        using F = ctl_formula;
        switch (p.shape)
          {
          case parsed::path::x: return universal ? F::ax(p.f) : F::ex(p.f);
          case parsed::path::f: return universal ? F::af(p.f) : F::ef(p.f);
          case parsed::path::g: return universal ? F::ag(p.f) : F::eg(p.f);
          case parsed::path::u: return universal ? F::au(p.f, p.g) : F::eu(p.f, p.g);
          case parsed::path::r:
            {
              auto nf = F::negate(p.f), ng = F::negate(p.g);
              return universal ? F::negate(F::eu(nf, ng))
                               : F::negate(F::au(nf, ng));
            }
          case parsed::path::none:
            break;
          }
        fail_at(at, std::string("expected a path formula after ")
                + (universal ? "A" : "E"));
      }

      parsed
      parse_unary()
      {
        auto& t = peek();
        if (accept(tok::bang))
          {
            auto at = peek();
            return plain(ctl_formula::negate(state(parse_unary(), at)));
          }
        if (accept(tok::lparen))
          {
            auto p = parse_iff();
            expect(tok::rparen, "')'");
            return p;
          }
        if (t.kind != tok::ident)
          fail_at(t, "expected a formula");
        auto tok_copy = next();
        auto& w = tok_copy.text;
        if (w == "true")
          return plain(ctl_formula::truth(true));
        if (w == "false")
          return plain(ctl_formula::truth(false));
        if (w == "A" || w == "E")
          {
            auto at = peek();
            parsed p;
            if (accept(tok::lbrack))
              {
                p = parse_iff();
                expect(tok::rbrack, "']'");
              }
            else if (at.kind == tok::ident
                     && (at.text == "X" || at.text == "F" || at.text == "G"))
              p = parse_unary();
            else
              p = parse_binary();
            return plain(quantify(w == "A", std::move(p), at));
          }
        if (w == "X" || w == "F" || w == "G")
          {
            auto at = peek();
            auto f = state(parse_unary(), at);
            auto shape = w == "X" ? parsed::path::x
              : w == "F" ? parsed::path::f : parsed::path::g;
            return {shape, std::move(f), {}};
          }
        if (w == "U" || w == "R")
          fail_at(tok_copy, "binary operator lacks a left operand");
        return plain(ctl_formula::prop(w));
      }

      token_stream ts_;
      std::vector<detail::token> toks_;
      std::size_t i_ = 0;
    };

    void
    collect_atoms(const ctl_formula& f, std::set<std::string>& out)
    {
      if (f.kind == op::atom)
        out.insert(f.atom);
      for (auto& a: f.args)
        collect_atoms(a, out);
    }
  }

  ctl_formula
  parse_ctl(std::string_view text)
  {
    return ctl_parser(text).parse();
  }

  std::set<std::string>
  atoms_of(const ctl_formula& f)
  {
    std::set<std::string> out;
    collect_atoms(f, out);
    return out;
  }

  std::string
  to_string(const ctl_formula& f)
  {
    switch (f.kind)
      {
      case op::tt: return "true";
      case op::ff: return "false";
      case op::atom: return f.atom;
      case op::neg: return "!" + to_string(f.args[0]);
      case op::ex: return "EX " + to_string(f.args[0]);
      case op::conj:
        return "(" + to_string(f.args[0]) + " & " + to_string(f.args[1]) + ")";
      case op::disj:
        return "(" + to_string(f.args[0]) + " | " + to_string(f.args[1]) + ")";
      case op::eu:
        return "E[" + to_string(f.args[0]) + " U " + to_string(f.args[1]) + "]";
      case op::au:
        return "A[" + to_string(f.args[0]) + " U " + to_string(f.args[1]) + "]";
      }
    return "?";
  }

  // ---------------------------------------------------------------------
  // Checker.

  ctl_checker::ctl_checker(const ctl_formula& f)
  {
    auto atoms = atoms_of(f);
    atoms_.assign(atoms.begin(), atoms.end());
    compile(f);
  }

  std::size_t
  ctl_checker::compile(const ctl_formula& f)
  {
    node n{f.kind};
    if (f.kind == op::atom)
      n.a = std::lower_bound(atoms_.begin(), atoms_.end(), f.atom)
        - atoms_.begin();
    else
      {
        if (f.args.size() > 0)
          n.a = compile(f.args[0]);
        if (f.args.size() > 1)
          n.b = compile(f.args[1]);
      }
    nodes_.push_back(n);
    return nodes_.size() - 1;
  }

  std::vector<state_set>
  ctl_checker::bind(const std::vector<std::string>& states,
                    const std::set<std::string>& props,
                    const std::vector<std::set<std::string>>& labels) const
  {
    std::size_t n = states.size();
    std::vector<state_set> out;
    for (auto& a: atoms_)
      {
        state_set s(n);
        bool known = props.count(a) > 0;
        for (std::size_t i = 0; i < n; ++i)
          if (states[i] == a || labels[i].count(a))
            {
              s.set(i);
              known = true;
            }
        if (!known)
          throw input_error("unknown atom \"" + a + "\" in CTL formula");
        out.push_back(std::move(s));
      }
    return out;
  }

  state_set
  ctl_checker::sat(const successor_lists& succ,
                   const std::vector<state_set>& atom_sets) const
  {
    std::size_t n = succ.size();
    std::vector<std::vector<std::size_t>> pred;
    auto need_pred = [&]()
    {
      if (!pred.empty() || n == 0)
        return;
      pred.resize(n);
      for (std::size_t s = 0; s < n; ++s)
        for (auto t: succ[s])
          pred[t].push_back(s);
    };
    std::vector<state_set> val(nodes_.size());
    std::vector<std::size_t> work;
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      {
        auto& nd = nodes_[i];
        auto& out = val[i];
        switch (nd.kind)
          {
          case op::tt: out = full_set(n); break;
          case op::ff: out = state_set(n); break;
          case op::atom: out = atom_sets[nd.a]; break;
          case op::neg: out = ~val[nd.a]; break;
          case op::conj: out = val[nd.a] & val[nd.b]; break;
          case op::disj: out = val[nd.a] | val[nd.b]; break;
          case op::ex:
            out = state_set(n);
            for (std::size_t s = 0; s < n; ++s)
              for (auto t: succ[s])
                if (val[nd.a].test(t))
                  {
                    out.set(s);
                    break;
                  }
            break;
          case op::eu:
          case op::au:
            {
              need_pred();
              auto& phi = val[nd.a];
              out = val[nd.b];
              work.clear();
              for (auto s = out.find_first(); s != state_set::npos;
                   s = out.find_next(s))
                work.push_back(s);
              std::vector<std::size_t> missing;
              bool universal = nd.kind == op::au;
              if (universal)
                {
                  missing.resize(n);
                  for (std::size_t s = 0; s < n; ++s)
                    missing[s] = succ[s].size();
                }
              while (!work.empty())
                {
                  auto t = work.back();
                  work.pop_back();
                  for (auto s: pred[t])
                    {
                      if (out.test(s) || !phi.test(s))
                        continue;
                      if (universal && --missing[s] > 0)
                        continue;
                      out.set(s);
                      work.push_back(s);
                    }
                }
              break;
            }
          }
      }
    return val.back();
  }

  bool
  ctl_checker::holds(const kripke& k) const
  {
    return sat(k.succ, bind(k.states, k.atomic_props, k.labels)).test(k.init);
  }

  bool
  check_ctl(const kripke& k, const ctl_formula& f)
  {
    return ctl_checker(f).holds(k);
  }
}
