#pragma once

// Direct LTL semantics on ultimately periodic words, independent of the
// progression-based monitor.

#include <functional>
#include <vector>

#include <impmc/ltl.hh>

namespace oracle
{
  // Word positions 0..n-1; position n-1 continues at loop_start.
  // holds(atom, i) gives the letter at position i.
  using atom_fn = std::function<bool(const std::string&, std::size_t)>;

  inline std::vector<bool>
  sat_positions(const impmc::ltl_formula& f, std::size_t n,
                std::size_t loop_start, const atom_fn& holds)
  {
    using op = impmc::ltl_formula::op;
    auto nxt = [&](std::size_t i) { return i + 1 < n ? i + 1 : loop_start; };
    std::vector<bool> v(n);
    switch (f.kind)
      {
      case op::tt: v.assign(n, true); break;
      case op::ff: break;
      case op::atom:
        for (std::size_t i = 0; i < n; ++i)
          v[i] = holds(f.atom, i);
        break;
      case op::neg:
        v = sat_positions(f.args[0], n, loop_start, holds);
        v.flip();
        break;
      case op::conj:
      case op::disj:
        {
          auto a = sat_positions(f.args[0], n, loop_start, holds);
          auto b = sat_positions(f.args[1], n, loop_start, holds);
          for (std::size_t i = 0; i < n; ++i)
            v[i] = f.kind == op::conj ? a[i] && b[i] : a[i] || b[i];
          break;
        }
      case op::next:
        {
          auto a = sat_positions(f.args[0], n, loop_start, holds);
          for (std::size_t i = 0; i < n; ++i)
            v[i] = a[nxt(i)];
          break;
        }
      case op::until:
      case op::release:
        {
          bool u = f.kind == op::until;
          auto a = sat_positions(f.args[0], n, loop_start, holds);
          auto b = sat_positions(f.args[1], n, loop_start, holds);
          v.assign(n, !u);
          for (bool changed = true; changed;)
            {
              changed = false;
              for (std::size_t i = n; i-- > 0;)
                {
                  bool w = u ? b[i] || (a[i] && v[nxt(i)])
                             : b[i] && (a[i] || v[nxt(i)]);
                  if (w != v[i])
                    {
                      v[i] = w;
                      changed = true;
                    }
                }
            }
          break;
        }
      }
    return v;
  }

  inline bool
  holds_on_lasso(const impmc::ltl_formula& f, std::size_t n,
                 std::size_t loop_start, const atom_fn& holds)
  {
    return sat_positions(f, n, loop_start, holds)[0];
  }
}
