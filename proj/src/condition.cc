#include <impmc/condition.hh>

#include <algorithm>
#include <set>

#include <impmc/detail/lexer.hh>

namespace impmc
{
  using detail::tok;
  using detail::token_stream;

  el_formula
  el_formula::truth(bool value)
  {
    el_formula f;
    f.kind = value ? op::tt : op::ff;
    return f;
  }

  el_formula
  el_formula::inf(state_set s)
  {
    el_formula f;
    f.kind = op::inf;
    f.set = std::move(s);
    return f;
  }

  el_formula
  el_formula::negate(el_formula a)
  {
    el_formula f;
    f.kind = op::neg;
    f.args.push_back(std::move(a));
    return f;
  }

  el_formula
  el_formula::conj(el_formula a, el_formula b)
  {
    el_formula f;
    f.kind = op::conj;
    f.args.push_back(std::move(a));
    f.args.push_back(std::move(b));
    return f;
  }

  el_formula
  el_formula::disj(el_formula a, el_formula b)
  {
    el_formula f;
    f.kind = op::disj;
    f.args.push_back(std::move(a));
    f.args.push_back(std::move(b));
    return f;
  }

  bool
  el_formula::eval(const state_set& inf_set) const
  {
    switch (kind)
      {
      case op::tt: return true;
      case op::ff: return false;
      case op::inf: return set.intersects(inf_set);
      case op::neg: return !args[0].eval(inf_set);
      case op::conj:
        return std::all_of(args.begin(), args.end(),
                           [&](auto& a) { return a.eval(inf_set); });
      case op::disj:
        return std::any_of(args.begin(), args.end(),
                           [&](auto& a) { return a.eval(inf_set); });
      }
    return false;
  }

  winning_condition
  make_negated(winning_condition c)
  {
    std::size_t n = c.num_states;
    auto inner = std::make_shared<const winning_condition>(std::move(c));
    return {negated{std::move(inner)}, n};
  }

  namespace
  {
    template<class... Ts> struct overloaded : Ts... { using Ts::operator()...; };
    template<class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

    void
    collect_sets(const el_formula& f, state_set& acc)
    {
      if (f.kind == el_formula::op::inf)
        acc |= f.set;
      for (auto& a: f.args)
        collect_sets(a, acc);
    }

    bool
    strongly_connected(const successor_lists& g, const state_set& s)
    {
      auto first = s.find_first();
      if (first == state_set::npos)
        return false;
      auto reach = [&](bool forward)
      {
        state_set seen(s.size());
        std::vector<std::size_t> stack{first};
        seen.set(first);
        while (!stack.empty())
          {
            auto v = stack.back();
            stack.pop_back();
            if (forward)
              {
                for (auto w: g[v])
                  if (s.test(w) && !seen.test(w))
                    {
                      seen.set(w);
                      stack.push_back(w);
                    }
              }
            else
              {
                for (auto u = s.find_first(); u != state_set::npos;
                     u = s.find_next(u))
                  if (!seen.test(u)
                      && std::binary_search(g[u].begin(), g[u].end(), v))
                    {
                      seen.set(u);
                      stack.push_back(u);
                    }
              }
          }
        return seen == s;
      };
      // A singleton needs a self-loop to recur.
      if (s.count() == 1)
        return std::binary_search(g[first].begin(), g[first].end(), first);
      return reach(true) && reach(false);
    }
  }

  bool
  evaluate_on_loop(const winning_condition& c, const state_set& inf_set,
                   const state_set& prefix_visited)
  {
    return std::visit(overloaded{
        [&](const reachability& r) { return r.target.intersects(prefix_visited); },
        [&](const safety& s) { return prefix_visited.is_subset_of(s.safe); },
        [&](const buchi& b) { return b.accept.intersects(inf_set); },
        [&](const co_buchi& b) { return !b.reject.intersects(inf_set); },
        [&](const parity& p)
        {
          unsigned best = 0;
          for (auto s = inf_set.find_first(); s != state_set::npos;
               s = inf_set.find_next(s))
            best = std::max(best, p.priority[s]);
          return best % 2 == 0;
        },
        [&](const rabin& r)
        {
          return std::any_of(r.pairs.begin(), r.pairs.end(), [&](auto& pr)
                             { return pr.e.intersects(inf_set)
                                 && !pr.f.intersects(inf_set); });
        },
        [&](const streett& r)
        {
          return std::all_of(r.pairs.begin(), r.pairs.end(), [&](auto& pr)
                             { return !pr.e.intersects(inf_set)
                                 || pr.f.intersects(inf_set); });
        },
        [&](const explicit_muller& m)
        {
          return std::find(m.accepting.begin(), m.accepting.end(), inf_set)
            != m.accepting.end();
        },
        [&](const emerson_lei& e) { return e.formula.eval(inf_set); },
        [&](const negated& n)
        { return !evaluate_on_loop(*n.inner, inf_set, prefix_visited); },
      }, c.cond);
  }

  bool
  is_loop_determined(const winning_condition& c)
  {
    if (c.is<reachability>() || c.is<safety>())
      return false;
    if (auto* n = std::get_if<negated>(&c.cond))
      return is_loop_determined(*n->inner);
    return true;
  }

  state_set
  relevant_states(const winning_condition& c)
  {
    std::size_t n = c.num_states;
    return std::visit(overloaded{
        [&](const reachability& r) { return r.target; },
        [&](const safety& s) { return state_set(~s.safe); },
        [&](const buchi& b) { return b.accept; },
        [&](const co_buchi& b) { return b.reject; },
        [&](const parity& p)
        {
          state_set r(n);
          for (std::size_t s = 0; s < n; ++s)
            if (p.priority[s] > 0)
              r.set(s);
          return r;
        },
        [&](const rabin& r)
        {
          state_set acc(n);
          for (auto& pr: r.pairs)
            acc |= pr.e | pr.f;
          return acc;
        },
        [&](const streett& r)
        {
          state_set acc(n);
          for (auto& pr: r.pairs)
            acc |= pr.e | pr.f;
          return acc;
        },
        [&](const explicit_muller&) { return full_set(n); },
        [&](const emerson_lei& e)
        {
          state_set acc(n);
          collect_sets(e.formula, acc);
          return acc;
        },
        [&](const negated& ng) { return relevant_states(*ng.inner); },
      }, c.cond);
  }

  winning_condition
  complement(const winning_condition& c, const successor_lists* graph)
  {
    std::size_t n = c.num_states;
    auto wrap = [n](winning_condition::variant_type v)
    {
      return winning_condition{std::move(v), n};
    };
    return std::visit(overloaded{
        [&](const reachability& r) { return wrap(safety{~r.target}); },
        [&](const safety& s) { return wrap(reachability{~s.safe}); },
        [&](const buchi& b) { return wrap(co_buchi{b.accept}); },
        [&](const co_buchi& b) { return wrap(buchi{b.reject}); },
        [&](const parity& p)
        {
          parity q = p;
          for (auto& x: q.priority)
            ++x;
          return wrap(q);
        },
        [&](const rabin& r) { return wrap(streett{r.pairs}); },
        [&](const streett& r) { return wrap(rabin{r.pairs}); },
        [&](const explicit_muller& m)
        {
          if (n > 16)
            return make_negated(c);
          std::set<state_set> in(m.accepting.begin(), m.accepting.end());
          explicit_muller out;
          for (unsigned long mask = 1; mask < (1ul << n); ++mask)
            {
              state_set s(n, mask);
              if (in.count(s))
                continue;
              if (graph && !strongly_connected(*graph, s))
                continue;
              out.accepting.push_back(std::move(s));
            }
          return wrap(out);
        },
        [&](const emerson_lei& e)
        { return wrap(emerson_lei{el_formula::negate(e.formula)}); },
        [&](const negated& ng) { return *ng.inner; },
      }, c.cond);
  }

  // ---------------------------------------------------------------------
  // Condition mini-language.

  namespace
  {
    std::size_t
    resolve(token_stream& ts, const detail::token& t,
            const std::vector<std::string>& states)
    {
      auto it = std::find(states.begin(), states.end(), t.text);
      if (it == states.end())
        ts.fail_at(t, "unknown state name \"" + t.text + "\"");
      return static_cast<std::size_t>(it - states.begin());
    }

    state_set
    parse_set(token_stream& ts, const std::vector<std::string>& states)
    {
      state_set s(states.size());
      ts.expect(tok::lbrace, "'{'");
      if (ts.accept(tok::rbrace))
        return s;
      do
        {
          auto& t = ts.expect(tok::ident, "state name");
          s.set(resolve(ts, t, states));
        }
      while (ts.accept(tok::comma));
      ts.expect(tok::rbrace, "'}'");
      return s;
    }

    // el := imp ; imp := or ('->' imp)? ; or := and ('|' and)* ; ...
    el_formula parse_el_or(token_stream&, const std::vector<std::string>&);

    el_formula
    parse_el_unary(token_stream& ts, const std::vector<std::string>& states)
    {
      if (ts.accept(tok::bang))
        return el_formula::negate(parse_el_unary(ts, states));
      if (ts.accept(tok::lparen))
        {
          auto f = parse_el_or(ts, states);
          while (ts.peek().kind == tok::implies || ts.peek().kind == tok::iff)
            {
              bool iff = ts.next().kind == tok::iff;
              auto g = parse_el_or(ts, states);
              if (iff)
                f = el_formula::disj(el_formula::conj(f, g),
                                     el_formula::conj(el_formula::negate(f),
                                                      el_formula::negate(g)));
              else
                f = el_formula::disj(el_formula::negate(f), g);
            }
          ts.expect(tok::rparen, "')'");
          return f;
        }
      auto& t = ts.expect(tok::ident, "Inf(...), Fin(...), true or false");
      if (t.text == "true")
        return el_formula::truth(true);
      if (t.text == "false")
        return el_formula::truth(false);
      if (t.text == "Inf" || t.text == "Fin")
        {
          bool paren = ts.accept(tok::lparen);
          auto s = parse_set(ts, states);
          if (paren)
            ts.expect(tok::rparen, "')'");
          auto f = el_formula::inf(std::move(s));
          return t.text == "Inf" ? f : el_formula::negate(std::move(f));
        }
      ts.fail_at(t, "expected Inf(...), Fin(...), true or false");
    }

    el_formula
    parse_el_and(token_stream& ts, const std::vector<std::string>& states)
    {
      auto f = parse_el_unary(ts, states);
      while (ts.accept(tok::amp))
        f = el_formula::conj(std::move(f), parse_el_unary(ts, states));
      return f;
    }

    el_formula
    parse_el_or(token_stream& ts, const std::vector<std::string>& states)
    {
      auto f = parse_el_and(ts, states);
      while (ts.accept(tok::bar))
        f = el_formula::disj(std::move(f), parse_el_and(ts, states));
      return f;
    }

    el_formula
    parse_el_top(token_stream& ts, const std::vector<std::string>& states)
    {
      auto f = parse_el_or(ts, states);
      if (ts.peek().kind == tok::implies)
        {
          ts.next();
          auto g = parse_el_top(ts, states);
          return el_formula::disj(el_formula::negate(std::move(f)),
                                  std::move(g));
        }
      if (ts.peek().kind == tok::iff)
        {
          ts.next();
          auto g = parse_el_top(ts, states);
          return el_formula::disj(el_formula::conj(f, g),
                                  el_formula::conj(el_formula::negate(f),
                                                   el_formula::negate(g)));
        }
      return f;
    }

    std::vector<rabin_pair>
    parse_pairs(token_stream& ts, const std::vector<std::string>& states)
    {
      std::vector<rabin_pair> pairs;
      if (ts.at_end())
        return pairs;
      do
        {
          if (ts.at_end())
            break;
          ts.expect(tok::lparen, "'(' opening a pair");
          rabin_pair p;
          p.e = parse_set(ts, states);
          ts.expect(tok::comma, "',' between the sets of a pair");
          p.f = parse_set(ts, states);
          ts.expect(tok::rparen, "')' closing a pair");
          pairs.push_back(std::move(p));
        }
      while (ts.accept(tok::semicolon) || ts.accept(tok::comma));
      return pairs;
    }

    std::pair<std::string, std::string_view>
    split_kind(std::string_view text)
    {
      auto colon = text.find(':');
      if (colon == std::string_view::npos)
        throw input_error("condition \"" + std::string(text)
                          + "\" lacks a \"kind:\" prefix");
      std::string kind(text.substr(0, colon));
      kind.erase(0, kind.find_first_not_of(" \t"));
      kind.erase(kind.find_last_not_of(" \t") + 1);
      return {kind, text.substr(colon + 1)};
    }
  }

  el_formula
  parse_el_formula(std::string_view text,
                   const std::vector<std::string>& states)
  {
    token_stream ts(text, "Emerson-Lei formula");
    auto f = parse_el_top(ts, states);
    if (!ts.at_end())
      ts.fail("unexpected trailing input");
    return f;
  }

  winning_condition
  parse_condition(std::string_view text,
                  const std::vector<std::string>& states)
  {
    auto [kind, body] = split_kind(text);
    std::size_t n = states.size();
    if (kind == "el")
      return {emerson_lei{parse_el_formula(body, states)}, n};
    if (kind == "ltl" || kind == "ctl")
      throw input_error("\"" + kind + ":\" specifications are temporal "
                        "formulas, not winning conditions");

    token_stream ts(body, kind + " condition");
    winning_condition res;
    res.num_states = n;
    if (kind == "reach" || kind == "reachability")
      res.cond = reachability{parse_set(ts, states)};
    else if (kind == "safety" || kind == "safe")
      res.cond = safety{parse_set(ts, states)};
    else if (kind == "buchi")
      res.cond = buchi{parse_set(ts, states)};
    else if (kind == "cobuchi" || kind == "co-buchi")
      res.cond = co_buchi{parse_set(ts, states)};
    else if (kind == "parity")
      {
        parity p{std::vector<unsigned>(n, 0)};
        state_set seen(n);
        while (!ts.at_end())
          {
            auto& name = ts.expect(tok::ident, "state name");
            auto s = resolve(ts, name, states);
            if (seen.test(s))
              ts.fail_at(name, "priority of " + name.text + " given twice");
            seen.set(s);
            ts.expect(tok::equals, "'='");
            auto& k = ts.expect(tok::ident, "priority");
            if (k.text.find_first_not_of("0123456789") != std::string::npos
                || k.text.size() > 9)
              ts.fail_at(k, "priority must be a non-negative integer");
            p.priority[s] = static_cast<unsigned>(std::stoul(k.text));
            if (!ts.accept(tok::comma))
              break;
          }
        res.cond = std::move(p);
      }
    else if (kind == "rabin")
      res.cond = rabin{parse_pairs(ts, states)};
    else if (kind == "streett")
      res.cond = streett{parse_pairs(ts, states)};
    else if (kind == "muller")
      {
        explicit_muller m;
        ts.expect(tok::lbrace, "'{' opening the family");
        if (!ts.accept(tok::rbrace))
          {
            do
              {
                auto& at = ts.peek();
                auto s = parse_set(ts, states);
                if (s.none())
                  ts.fail_at(at, "Muller sets must be nonempty");
                if (std::find(m.accepting.begin(), m.accepting.end(), s)
                    != m.accepting.end())
                  ts.fail_at(at, "duplicate set in Muller family");
                m.accepting.push_back(std::move(s));
              }
            while (ts.accept(tok::comma));
            ts.expect(tok::rbrace, "'}' closing the family");
          }
        res.cond = std::move(m);
      }
    else
      throw input_error("unknown condition kind \"" + kind + "\"");
    if (!ts.at_end())
      ts.fail("unexpected trailing input");
    return res;
  }

  namespace
  {
    std::string
    set_string(const state_set& s, const std::vector<std::string>& states)
    {
      std::string out = "{";
      bool first = true;
      for (auto i = s.find_first(); i != state_set::npos; i = s.find_next(i))
        {
          if (!first)
            out += ",";
          first = false;
          out += i < states.size() ? states[i] : std::to_string(i);
        }
      return out + "}";
    }

    std::string
    pairs_string(const std::vector<rabin_pair>& pairs,
                 const std::vector<std::string>& states)
    {
      std::string out;
      for (std::size_t i = 0; i < pairs.size(); ++i)
        {
          if (i)
            out += "; ";
          out += "(" + set_string(pairs[i].e, states) + ","
            + set_string(pairs[i].f, states) + ")";
        }
      return out;
    }
  }

  std::string
  to_string(const el_formula& f, const std::vector<std::string>& states)
  {
    using op = el_formula::op;
    switch (f.kind)
      {
      case op::tt: return "true";
      case op::ff: return "false";
      case op::inf: return "Inf(" + set_string(f.set, states) + ")";
      case op::neg: return "!" + to_string(f.args[0], states);
      case op::conj:
      case op::disj:
        {
          std::string sep = f.kind == op::conj ? " & " : " | ";
          std::string out = "(";
          for (std::size_t i = 0; i < f.args.size(); ++i)
            out += (i ? sep : "") + to_string(f.args[i], states);
          return out + ")";
        }
      }
    return "?";
  }

  std::string
  to_string(const winning_condition& c, const std::vector<std::string>& states)
  {
    return std::visit(overloaded{
        [&](const reachability& r) { return "reach: " + set_string(r.target, states); },
        [&](const safety& s) { return "safety: " + set_string(s.safe, states); },
        [&](const buchi& b) { return "buchi: " + set_string(b.accept, states); },
        [&](const co_buchi& b) { return "cobuchi: " + set_string(b.reject, states); },
        [&](const parity& p)
        {
          std::string out = "parity:";
          bool first = true;
          for (std::size_t s = 0; s < p.priority.size(); ++s)
            if (p.priority[s])
              {
                out += (first ? " " : ", ")
                  + (s < states.size() ? states[s] : std::to_string(s))
                  + "=" + std::to_string(p.priority[s]);
                first = false;
              }
          return out;
        },
        [&](const rabin& r) { return "rabin: " + pairs_string(r.pairs, states); },
        [&](const streett& r) { return "streett: " + pairs_string(r.pairs, states); },
        [&](const explicit_muller& m)
        {
          std::string out = "muller: {";
          for (std::size_t i = 0; i < m.accepting.size(); ++i)
            out += (i ? "," : "") + set_string(m.accepting[i], states);
          return out + "}";
        },
        [&](const emerson_lei& e) { return "el: " + to_string(e.formula, states); },
        [&](const negated& n) { return "not(" + to_string(*n.inner, states) + ")"; },
      }, c.cond);
  }
}
