#include <impmc/branching.hh>

#include <algorithm>
#include <atomic>
#include <limits>

#include <impmc/detail/parallel.hh>

namespace impmc
{
  strategy_space::strategy_space(const mts& m, const state_set& owned)
    : m_(&m)
  {
    for (std::size_t s = 0; s < m.num_states(); ++s)
      {
        if (!owned.test(s))
          continue;
        owned_.push_back(s);
        for (auto t: m.may[s])
          if (!std::binary_search(m.must[s].begin(), m.must[s].end(), t))
            edges_.emplace_back(s, t);
      }
  }

  std::uint64_t
  strategy_space::size() const
  {
    if (edges_.size() > 62)
      throw cap_exceeded(std::to_string(edges_.size())
                         + " optional edges: strategy space too large");
    return std::uint64_t{1} << edges_.size();
  }

  void
  strategy_space::apply(std::uint64_t index, successor_lists& succ) const
  {
    for (auto s: owned_)
      succ[s] = m_->must[s];
    for (std::size_t e = 0; e < edges_.size(); ++e)
      if ((index >> e) & 1)
        succ[edges_[e].first].push_back(edges_[e].second);
    for (auto s: owned_)
      std::sort(succ[s].begin(), succ[s].end());
  }

  pure_strategy
  strategy_space::at(std::uint64_t index) const
  {
    successor_lists succ(m_->num_states());
    apply(index, succ);
    pure_strategy p;
    for (auto s: owned_)
      {
        p.states.push_back(s);
        p.choice.push_back(succ[s]);
      }
    return p;
  }

  std::string
  strategy_space::describe(std::uint64_t index) const
  {
    if (edges_.empty())
      return "-";
    std::string out;
    for (std::size_t e = 0; e < edges_.size(); ++e)
      out += (index >> e) & 1 ? '1' : '0';
    return out;
  }

  std::vector<pure_strategy>
  enumerate_pure_strategies(const mts& m, const state_set& owned,
                            std::size_t cap)
  {
    strategy_space space(m, owned);
    auto count = space.size();
    if (count > cap)
      throw cap_exceeded(std::to_string(count) + " pure strategies exceed "
                         "the cap of " + std::to_string(cap));
    std::vector<pure_strategy> out;
    for (std::uint64_t i = 0; i < count; ++i)
      out.push_back(space.at(i));
    return out;
  }

  kripke
  induced_kripke(const mts& m, const pure_strategy& sat,
                 const pure_strategy& unsat)
  {
    kripke k;
    k.states = m.states;
    k.atomic_props = m.atomic_props;
    k.init = m.init;
    k.labels = m.labels;
    k.succ = m.must;
    for (auto* p: {&sat, &unsat})
      for (std::size_t i = 0; i < p->states.size(); ++i)
        k.succ[p->states[i]] = p->choice[i];
    return k;
  }

  two_turn_result
  two_turn_value(const mts& m, const ctl_formula& f,
                 const state_set& sat_states, std::uint64_t cap,
                 unsigned jobs)
  {
    strategy_space sat(m, sat_states), unsat(m, ~sat_states);
    if (sat.bits() + unsat.bits() > 62 || sat.size() * unsat.size() > cap)
      throw cap_exceeded("two-turn game has 2^"
                         + std::to_string(sat.bits() + unsat.bits())
                         + " strategy profiles, above the cap of "
                         + std::to_string(cap));
    ctl_checker chk(f);
    auto atom_sets = chk.bind(m.states, m.atomic_props, m.labels);
    constexpr auto none = std::numeric_limits<std::uint64_t>::max();
    std::atomic<std::uint64_t> best = none;
    detail::parallel_for(sat.size(), jobs, [&](std::size_t i)
      {
        if (i > best)
          return;
        successor_lists succ = m.must;
        sat.apply(i, succ);
        for (std::uint64_t j = 0; j < unsat.size(); ++j)
          {
            unsat.apply(j, succ);
            if (!chk.sat(succ, atom_sets).test(m.init))
              return;
          }
        for (auto cur = best.load(); i < cur
               && !best.compare_exchange_weak(cur, i);)
          ;
      });
    two_turn_result r;
    if (best != none)
      {
        r.value = true;
        r.witness = best;
      }
    return r;
  }

  bool
  dual_two_turn_value(const mts& m, const ctl_formula& f,
                      const state_set& sat_states, std::uint64_t cap,
                      unsigned jobs)
  {
    return !two_turn_value(m, ctl_formula::negate(f), ~sat_states, cap,
                           jobs).value;
  }

  binary_oracle
  two_turn_oracle(const model& m, const ctl_formula& f, bool dual,
                  std::uint64_t cap)
  {
    auto sys = std::make_shared<const mts>(m.as_mts());
    auto parts = std::make_shared<const partition>(m.parts);
    return [sys, parts, f, dual, cap](const coalition& c)
    {
      auto states = parts->states_of(c, sys->num_states());
      return dual ? dual_two_turn_value(*sys, f, states, cap)
                  : two_turn_value(*sys, f, states, cap).value;
    };
  }
}
