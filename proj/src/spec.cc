#include <impmc/spec.hh>

#include <numeric>

namespace impmc
{
  namespace
  {
    template<class Model>
    void
    check_atoms(const std::set<std::string>& atoms, const Model& m)
    {
      for (auto& a: atoms)
        if (!m.atomic_props.count(a) && !m.find_state(a))
          throw input_error("unknown atom \"" + a
                            + "\": neither a proposition nor a state");
    }

    std::string_view
    trim(std::string_view s)
    {
      auto b = s.find_first_not_of(" \t\r\n");
      if (b == std::string_view::npos)
        return {};
      auto e = s.find_last_not_of(" \t\r\n");
      return s.substr(b, e - b + 1);
    }
  }

  specification
  parse_spec(std::string_view text, const model& m)
  {
    specification s;
    s.text = std::string(text);
    auto colon = text.find(':');
    if (colon == std::string_view::npos)
      throw input_error("specification needs a \"kind:\" prefix "
                        "(reach, safety, buchi, ..., ltl, ctl)");
    auto head = trim(text.substr(0, colon));
    auto body = text.substr(colon + 1);
    if (head == "ctl")
      {
        if (!m.is_mts())
          throw input_error("ctl specifications are evaluated on modal "
                            "transition systems; use an ltl or condition "
                            "specification for a Kripke structure");
        s.k = specification::kind::ctl;
        s.ctl = parse_ctl(body);
        check_atoms(atoms_of(*s.ctl), m.as_mts());
        return s;
      }
    if (m.is_mts())
      throw input_error("a modal transition system needs a ctl "
                        "specification");
    auto& k = m.as_kripke();
    if (head == "ltl")
      {
        s.k = specification::kind::ltl;
        s.ltl = parse_ltl(body);
        check_atoms(atoms_of(*s.ltl), k);
        s.fragment = classify_ltl(*s.ltl);
        if (s.fragment == ltl_fragment::unsupported)
          throw input_error("LTL formula \"" + std::string(trim(body))
                            + "\" is outside the supported fragments (co-safety,"
                            " safety, Boolean combinations of GF/FG over "
                            "propositional formulas); general LTL games are "
                            "not supported");
        return s;
      }
    s.k = specification::kind::condition;
    s.cond = parse_condition(text, m.states());
    return s;
  }

  linear_game
  prepare_linear_game(const model& m, const specification& s,
                      std::size_t monitor_cap)
  {
    if (s.k == specification::kind::ctl || m.is_mts())
      throw input_error("turn-based games need a Kripke structure and a "
                        "condition or ltl specification");
    auto& k = m.as_kripke();
    linear_game g;
    bool monitored = s.k == specification::kind::ltl
      && s.fragment != ltl_fragment::inf;
    if (!monitored)
      {
        g.system = k;
        g.parts = m.parts;
        g.projection.resize(k.num_states());
        std::iota(g.projection.begin(), g.projection.end(), 0);
        if (s.k == specification::kind::condition)
          g.cond = *s.cond;
        else
          {
            g.cond.num_states = k.num_states();
            g.cond.cond = compile_inf_fragment(*s.ltl, k.states, k.labels);
          }
        return g;
      }
    auto mon = compile_monitor(*s.ltl, monitor_cap);
    auto p = product_game(k, mon);
    g.system = std::move(p.system);
    g.cond = std::move(p.cond);
    g.projection = std::move(p.projection);
    g.parts = lift_partition(m.parts, g.projection);
    g.monitor_states = mon.num_states();
    return g;
  }
}
