#pragma once

// Seeded generators shared by the test suites and the acceptance run.

#include <algorithm>
#include <random>
#include <string>

#include <impmc/condition.hh>
#include <impmc/model.hh>

namespace testgen
{
  using namespace impmc;

  inline state_set
  random_set(std::mt19937_64& rng, std::size_t n)
  {
    return state_set(n, rng() & ((1ul << n) - 1));
  }

  inline successor_lists
  random_succ(std::mt19937_64& rng, std::size_t n, std::size_t max_out = 3)
  {
    successor_lists succ(n);
    for (auto& out: succ)
      {
        std::size_t k = 1 + rng() % max_out;
        for (std::size_t i = 0; i < k; ++i)
          out.push_back(rng() % n);
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
      }
    return succ;
  }

  inline partition
  random_partition(std::mt19937_64& rng, std::size_t n,
                   const std::vector<std::string>& states)
  {
    // Assign each state a block label, then drop empty blocks.
    std::size_t blocks = 1 + rng() % n;
    std::vector<std::vector<std::size_t>> parts(blocks);
    for (std::size_t s = 0; s < n; ++s)
      parts[s < blocks ? s : rng() % blocks].push_back(s);
    partition p;
    for (auto& part: parts)
      if (!part.empty())
        {
          std::string name;
          for (auto s: part)
            name += (name.empty() ? "" : "+") + states[s];
          p.names.push_back(name);
          p.parts.push_back(part);
        }
    return p;
  }

  /// Kripke model with labels over {a, b}; singleton or random partition.
  inline model
  random_kripke(std::mt19937_64& rng, std::size_t n, bool random_parts)
  {
    kripke k;
    for (std::size_t s = 0; s < n; ++s)
      k.states.push_back("s" + std::to_string(s));
    k.succ = random_succ(rng, n);
    k.labels.resize(n);
    for (auto& l: k.labels)
      {
        if (rng() % 2)
          l.insert("a");
        if (rng() % 3 == 0)
          l.insert("b");
      }
    k.atomic_props = {"a", "b"};
    k.init = 0;
    model m;
    m.parts = random_parts ? random_partition(rng, n, k.states)
                           : default_partition(k.states);
    m.system = std::move(k);
    return m;
  }

  /// MTS with must edges from random_succ and extra optional edges.
  inline model
  random_mts(std::mt19937_64& rng, std::size_t n, std::size_t max_optional)
  {
    mts t;
    for (std::size_t s = 0; s < n; ++s)
      t.states.push_back("s" + std::to_string(s));
    t.must = random_succ(rng, n, 2);
    t.may = t.must;
    std::size_t extra = rng() % (max_optional + 1);
    for (std::size_t e = 0; e < extra; ++e)
      {
        auto s = rng() % n;
        t.may[s].push_back(rng() % n);
        std::sort(t.may[s].begin(), t.may[s].end());
        t.may[s].erase(std::unique(t.may[s].begin(), t.may[s].end()),
                       t.may[s].end());
      }
    t.labels.resize(n);
    for (auto& l: t.labels)
      {
        if (rng() % 2)
          l.insert("a");
        if (rng() % 3 == 0)
          l.insert("b");
      }
    t.atomic_props = {"a", "b"};
    model m;
    m.parts = default_partition(t.states);
    m.system = std::move(t);
    return m;
  }

  inline el_formula
  random_el(std::mt19937_64& rng, std::size_t n, int depth)
  {
    if (depth == 0 || rng() % 3 == 0)
      return el_formula::inf(random_set(rng, n));
    switch (rng() % 3)
      {
      case 0: return el_formula::negate(random_el(rng, n, depth - 1));
      case 1: return el_formula::conj(random_el(rng, n, depth - 1),
                                      random_el(rng, n, depth - 1));
      default: return el_formula::disj(random_el(rng, n, depth - 1),
                                       random_el(rng, n, depth - 1));
      }
  }

  /// Büchi, parity, Rabin or Emerson-Lei, chosen by \a kind mod 4.
  inline winning_condition
  random_loop_condition(std::mt19937_64& rng, std::size_t n, unsigned kind)
  {
    winning_condition c;
    c.num_states = n;
    switch (kind % 4)
      {
      case 0: c.cond = buchi{random_set(rng, n)}; break;
      case 1:
        {
          parity p{std::vector<unsigned>(n)};
          for (auto& x: p.priority)
            x = rng() % 4;
          c.cond = p;
          break;
        }
      case 2:
        {
          std::vector<rabin_pair> pairs(1 + rng() % 2);
          for (auto& pr: pairs)
            pr = {random_set(rng, n), random_set(rng, n)};
          c.cond = rabin{pairs};
          break;
        }
      default: c.cond = emerson_lei{random_el(rng, n, 2)};
      }
    return c;
  }
}
