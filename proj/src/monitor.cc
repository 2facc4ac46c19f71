#include <impmc/monitor.hh>

#include <algorithm>
#include <deque>
#include <map>

namespace impmc
{
  using op = ltl_formula::op;

  std::size_t
  monitor::run(const std::vector<std::size_t>& word) const
  {
    std::size_t q = init;
    for (auto l: word)
      q = delta[q][l];
    return q;
  }

  namespace
  {
    // A monitor state is a positive Boolean combination of obligations, kept
    // as a DNF: a sorted list of clauses, each a sorted list of obligation
    // ids, with no clause containing another.  {} is false, {{}} is true.
    using clause = std::vector<int>;
    using dnf = std::vector<clause>;

    void
    absorb(dnf& d)
    {
      std::sort(d.begin(), d.end(), [](const clause& a, const clause& b)
                { return a.size() != b.size() ? a.size() < b.size() : a < b; });
      d.erase(std::unique(d.begin(), d.end()), d.end());
      dnf out;
      for (auto& c: d)
        {
          bool subsumed = std::any_of(out.begin(), out.end(), [&](auto& k)
            { return std::includes(c.begin(), c.end(), k.begin(), k.end()); });
          if (!subsumed)
            out.push_back(c);
        }
      std::sort(out.begin(), out.end());
      d = std::move(out);
    }

    dnf
    dnf_or(dnf a, const dnf& b)
    {
      a.insert(a.end(), b.begin(), b.end());
      absorb(a);
      return a;
    }

    dnf
    dnf_and(const dnf& a, const dnf& b)
    {
      dnf out;
      for (auto& x: a)
        for (auto& y: b)
          {
            clause c;
            std::set_union(x.begin(), x.end(), y.begin(), y.end(),
                           std::back_inserter(c));
            out.push_back(std::move(c));
          }
      absorb(out);
      return out;
    }

    const dnf dnf_true{clause{}};
    const dnf dnf_false{};

    class progression
    {
    public:
      explicit progression(std::vector<std::string> atoms)
        : atoms_(std::move(atoms))
      {
      }

      dnf
      to_dnf(const ltl_formula& f)
      {
        switch (f.kind)
          {
          case op::tt: return dnf_true;
          case op::ff: return dnf_false;
          case op::conj: return dnf_and(to_dnf(f.args[0]), to_dnf(f.args[1]));
          case op::disj: return dnf_or(to_dnf(f.args[0]), to_dnf(f.args[1]));
          default: return {clause{intern(f)}};
          }
      }

      dnf
      step(const dnf& d, std::size_t letter)
      {
        dnf out;
        for (auto& c: d)
          {
            dnf acc = dnf_true;
            for (int id: c)
              {
                acc = dnf_and(acc, step_obligation(id, letter));
                if (acc.empty())
                  break;
              }
            out.insert(out.end(), acc.begin(), acc.end());
          }
        absorb(out);
        return out;
      }

    private:
      int
      intern(const ltl_formula& f)
      {
        auto [it, fresh] = ids_.try_emplace(f, static_cast<int>(forms_.size()));
        if (fresh)
          forms_.push_back(f);
        return it->second;
      }

      bool
      holds(const std::string& atom, std::size_t letter) const
      {
        auto it = std::find(atoms_.begin(), atoms_.end(), atom);
        return (letter >> (it - atoms_.begin())) & 1;
      }

      dnf
      step_formula(const ltl_formula& f, std::size_t letter)
      {
        switch (f.kind)
          {
          case op::tt: return dnf_true;
          case op::ff: return dnf_false;
          case op::conj:
            return dnf_and(step_formula(f.args[0], letter),
                           step_formula(f.args[1], letter));
          case op::disj:
            return dnf_or(step_formula(f.args[0], letter),
                          step_formula(f.args[1], letter));
          default: return step_obligation(intern(f), letter);
          }
      }

      dnf
      step_obligation(int id, std::size_t letter)
      {
        auto key = std::make_pair(id, letter);
        if (auto it = memo_.find(key); it != memo_.end())
          return it->second;
        // Copy: interning below may grow forms_.
        ltl_formula f = forms_[id];
        dnf r;
        switch (f.kind)
          {
          case op::atom:
            r = holds(f.atom, letter) ? dnf_true : dnf_false;
            break;
          case op::neg:
            r = holds(f.args[0].atom, letter) ? dnf_false : dnf_true;
            break;
          case op::next:
            r = to_dnf(f.args[0]);
            break;
          case op::until:
            r = dnf_or(step_formula(f.args[1], letter),
                       dnf_and(step_formula(f.args[0], letter),
                               {clause{id}}));
            break;
          case op::release:
            r = dnf_and(step_formula(f.args[1], letter),
                        dnf_or(step_formula(f.args[0], letter),
                               {clause{id}}));
            break;
          default:
            throw std::logic_error("progression of a Boolean connective");
          }
        memo_.emplace(key, r);
        return r;
      }

      std::vector<std::string> atoms_;
      std::map<ltl_formula, int> ids_;
      std::vector<ltl_formula> forms_;
      std::map<std::pair<int, std::size_t>, dnf> memo_;
    };
  }

  monitor
  compile_monitor(const ltl_formula& f, std::size_t cap)
  {
    auto frag = classify_ltl(f);
    if (frag != ltl_fragment::cosafe && frag != ltl_fragment::safe)
      throw input_error("formula " + to_string(f) + " is neither a co-safety "
                        "nor a safety formula");
    monitor m;
    m.pol = frag == ltl_fragment::cosafe ? monitor::polarity::cosafe
                                         : monitor::polarity::safe;
    auto atoms = atoms_of(f);
    m.atoms.assign(atoms.begin(), atoms.end());
    if (m.atoms.size() > 16)
      throw cap_exceeded("monitor alphabet over "
                         + std::to_string(m.atoms.size()) + " atoms");
    std::size_t letters = m.num_letters();

    // A safety formula is monitored through its negation, which is co-safe.
    ltl_formula target = m.pol == monitor::polarity::cosafe ? nnf(f)
                                                            : negate_nnf(f);
    progression prog(m.atoms);
    std::map<dnf, std::size_t> index;
    std::vector<dnf> states;
    std::vector<std::vector<std::size_t>> delta;
    auto lookup = [&](dnf d)
    {
      auto [it, fresh] = index.try_emplace(d, states.size());
      if (fresh)
        {
          if (states.size() >= cap)
            throw cap_exceeded("monitor exceeds " + std::to_string(cap)
                               + " states");
          states.push_back(std::move(d));
        }
      return it->second;
    };
    lookup(prog.to_dnf(target));
    for (std::size_t q = 0; q < states.size(); ++q)
      {
        std::vector<std::size_t> row(letters);
        for (std::size_t l = 0; l < letters; ++l)
          row[l] = lookup(prog.step(states[q], l));
        delta.push_back(std::move(row));
      }

    // Decided states.  good: every continuation reaches true.  bad: true is
    // unreachable.
    std::size_t n = states.size();
    std::vector<bool> is_true(n);
    for (std::size_t q = 0; q < n; ++q)
      is_true[q] = states[q] == dnf_true;
    std::vector<bool> avoid(n);
    for (std::size_t q = 0; q < n; ++q)
      avoid[q] = !is_true[q];
    for (bool changed = true; changed;)
      {
        changed = false;
        for (std::size_t q = 0; q < n; ++q)
          if (avoid[q]
              && std::none_of(delta[q].begin(), delta[q].end(),
                              [&](std::size_t r) { return avoid[r]; }))
            {
              avoid[q] = false;
              changed = true;
            }
      }
    std::vector<bool> reach_true = is_true;
    for (bool changed = true; changed;)
      {
        changed = false;
        for (std::size_t q = 0; q < n; ++q)
          if (!reach_true[q]
              && std::any_of(delta[q].begin(), delta[q].end(),
                             [&](std::size_t r) { return reach_true[r]; }))
            {
              reach_true[q] = true;
              changed = true;
            }
      }

    // Renumber in BFS order with the two sinks collapsed.
    constexpr std::size_t good = static_cast<std::size_t>(-1);
    constexpr std::size_t bad = static_cast<std::size_t>(-2);
    auto klass = [&](std::size_t q)
    {
      if (!avoid[q])
        return good;
      if (!reach_true[q])
        return bad;
      return q;
    };
    std::map<std::size_t, std::size_t> renum;
    std::deque<std::size_t> queue;
    std::vector<std::size_t> repr;
    auto visit = [&](std::size_t q)
    {
      auto k = klass(q);
      auto [it, fresh] = renum.try_emplace(k, repr.size());
      if (fresh)
        {
          repr.push_back(q);
          queue.push_back(q);
        }
      return it->second;
    };
    m.init = visit(0);
    while (!queue.empty())
      {
        auto q = queue.front();
        queue.pop_front();
        auto k = klass(q);
        std::vector<std::size_t> row(letters);
        for (std::size_t l = 0; l < letters; ++l)
          row[l] = k == q ? visit(delta[q][l]) : renum[k];
        m.delta.push_back(std::move(row));
        m.accepting.push_back(k == good);
      }
    return m;
  }

  product
  product_game(const kripke& k, const monitor& m)
  {
    product p;
    auto letter_at = [&](std::size_t s)
    {
      return m.letter([&](const std::string& a) { return k.holds(a, s); });
    };
    std::vector<std::size_t> letter(k.num_states());
    for (std::size_t s = 0; s < k.num_states(); ++s)
      letter[s] = letter_at(s);

    std::map<std::pair<std::size_t, std::size_t>, std::size_t> index;
    auto lookup = [&](std::size_t s, std::size_t q)
    {
      auto [it, fresh] = index.try_emplace({s, q}, p.projection.size());
      if (fresh)
        {
          p.projection.push_back(s);
          p.memory.push_back(q);
        }
      return it->second;
    };
    p.system.init = lookup(k.init, m.delta[m.init][letter[k.init]]);
    for (std::size_t i = 0; i < p.projection.size(); ++i)
      {
        auto s = p.projection[i];
        auto q = p.memory[i];
        std::vector<std::size_t> succ;
        for (auto t: k.succ[s])
          succ.push_back(lookup(t, m.delta[q][letter[t]]));
        std::sort(succ.begin(), succ.end());
        p.system.succ.push_back(std::move(succ));
      }

    std::size_t n = p.projection.size();
    p.system.atomic_props = k.atomic_props;
    state_set acc(n);
    for (std::size_t i = 0; i < n; ++i)
      {
        p.system.states.push_back(k.states[p.projection[i]] + "#"
                                  + std::to_string(p.memory[i]));
        p.system.labels.push_back(k.labels[p.projection[i]]);
        if (m.accepting[p.memory[i]])
          acc.set(i);
      }
    p.cond.num_states = n;
    if (m.pol == monitor::polarity::cosafe)
      p.cond.cond = reachability{acc};
    else
      p.cond.cond = safety{~acc};
    return p;
  }

  partition
  lift_partition(const partition& p, const std::vector<std::size_t>& projection)
  {
    std::size_t n = 0;
    for (auto& part: p.parts)
      n += part.size();
    auto part = p.part_of(n);
    partition out;
    out.names = p.names;
    out.parts.resize(p.size());
    for (std::size_t i = 0; i < projection.size(); ++i)
      out.parts[part[projection[i]]].push_back(i);
    return out;
  }
}
