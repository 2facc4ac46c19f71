#include <impmc/concurrent.hh>

#include <algorithm>
#include <map>
#include <sstream>

#include <impmc/detail/parallel.hh>

namespace impmc
{
  payoff_matrix
  build_payoff_matrix(const mts& m, const ctl_formula& f,
                      const state_set& sat_states, std::uint64_t cap,
                      unsigned jobs)
  {
    strategy_space sat(m, sat_states), unsat(m, ~sat_states);
    if (sat.bits() + unsat.bits() > 62 || sat.size() * unsat.size() > cap)
      throw cap_exceeded("payoff matrix would have 2^"
                         + std::to_string(sat.bits() + unsat.bits())
                         + " entries, above the cap of "
                         + std::to_string(cap));
    ctl_checker chk(f);
    auto atom_sets = chk.bind(m.states, m.atomic_props, m.labels);
    payoff_matrix a;
    a.entry.assign(sat.size(), std::vector<char>(unsat.size(), 0));
    for (std::uint64_t i = 0; i < sat.size(); ++i)
      a.row_labels.push_back(sat.describe(i));
    for (std::uint64_t j = 0; j < unsat.size(); ++j)
      a.col_labels.push_back(unsat.describe(j));
    detail::parallel_for(sat.size(), jobs, [&](std::size_t i)
      {
        successor_lists succ = m.must;
        sat.apply(i, succ);
        for (std::uint64_t j = 0; j < unsat.size(); ++j)
          {
            unsat.apply(j, succ);
            a.entry[i][j] = chk.sat(succ, atom_sets).test(m.init);
          }
      });
    return a;
  }

  namespace
  {
    using matrix = std::vector<std::vector<rational>>;

    // Drops rows (Sat) weakly dominated by another row and columns (Unsat)
    // weakly dominating another, keeping the lowest index among equals.
    void
    reduce(const matrix& a, std::vector<std::size_t>& rows,
           std::vector<std::size_t>& cols)
    {
      auto row_leq = [&](std::size_t r, std::size_t s)
      {
        for (auto c: cols)
          if (a[r][c] > a[s][c])
            return false;
        return true;
      };
      auto col_geq = [&](std::size_t c, std::size_t d)
      {
        for (auto r: rows)
          if (a[r][c] < a[r][d])
            return false;
        return true;
      };
      for (bool changed = true; changed;)
        {
          changed = false;
          for (std::size_t x = 0; x < rows.size() && !changed; ++x)
            for (std::size_t y = 0; y < rows.size() && !changed; ++y)
              if (x != y && row_leq(rows[x], rows[y])
                  && (!row_leq(rows[y], rows[x]) || y < x))
                {
                  rows.erase(rows.begin() + x);
                  changed = true;
                }
          for (std::size_t x = 0; x < cols.size() && !changed; ++x)
            for (std::size_t y = 0; y < cols.size() && !changed; ++y)
              if (x != y && col_geq(cols[x], cols[y])
                  && (!col_geq(cols[y], cols[x]) || y < x))
                {
                  cols.erase(cols.begin() + x);
                  changed = true;
                }
        }
    }

    // Exact simplex with Bland's rule on: max sum y s.t. B y <= 1, y >= 0,
    // B > 0.  Returns (y, dual x) at the optimum.
    std::pair<std::vector<rational>, std::vector<rational>>
    simplex(const matrix& b)
    {
      std::size_t m = b.size(), k = b[0].size(), width = k + m;
      matrix t(m + 1, std::vector<rational>(width + 1));
      std::vector<std::size_t> basis(m);
      for (std::size_t i = 0; i < m; ++i)
        {
          for (std::size_t j = 0; j < k; ++j)
            t[i][j] = b[i][j];
          t[i][k + i] = 1;
          t[i][width] = 1;
          basis[i] = k + i;
        }
      for (std::size_t j = 0; j < k; ++j)
        t[m][j] = -1;
      for (;;)
        {
          std::size_t enter = width;
          for (std::size_t j = 0; j < width; ++j)
            if (t[m][j] < 0)
              {
                enter = j;
                break;
              }
          if (enter == width)
            break;
          std::size_t leave = m;
          rational best;
          for (std::size_t i = 0; i < m; ++i)
            if (t[i][enter] > 0)
              {
                rational ratio = t[i][width] / t[i][enter];
                if (leave == m || ratio < best
                    || (ratio == best && basis[i] < basis[leave]))
                  {
                    leave = i;
                    best = ratio;
                  }
              }
          if (leave == m)
            throw std::logic_error("matrix game LP unbounded");
          rational piv = t[leave][enter];
          for (auto& x: t[leave])
            x /= piv;
          for (std::size_t i = 0; i <= m; ++i)
            if (i != leave && t[i][enter] != 0)
              {
                rational factor = t[i][enter];
                for (std::size_t j = 0; j <= width; ++j)
                  if (t[leave][j] != 0)
                    t[i][j] -= factor * t[leave][j];
              }
          basis[leave] = enter;
        }
      std::vector<rational> y(k), x(m);
      for (std::size_t i = 0; i < m; ++i)
        if (basis[i] < k)
          y[basis[i]] = t[i][width];
      for (std::size_t i = 0; i < m; ++i)
        x[i] = t[m][k + i];
      return {y, x};
    }

    void
    check_solution(const matrix& a, const matrix_solution& s)
    {
      rational rs, cs;
      for (auto& x: s.row_mix)
        {
          if (x < 0)
            throw std::logic_error("matrix game: negative row weight");
          rs += x;
        }
      for (auto& y: s.col_mix)
        {
          if (y < 0)
            throw std::logic_error("matrix game: negative column weight");
          cs += y;
        }
      if (rs != 1 || cs != 1)
        throw std::logic_error("matrix game: mix does not sum to one");
      for (std::size_t c = 0; c < a[0].size(); ++c)
        {
          rational e;
          for (std::size_t r = 0; r < a.size(); ++r)
            e += s.row_mix[r] * a[r][c];
          if (e < s.value)
            throw std::logic_error("matrix game: row mix below the value");
        }
      for (std::size_t r = 0; r < a.size(); ++r)
        {
          rational e;
          for (std::size_t c = 0; c < a[0].size(); ++c)
            e += s.col_mix[c] * a[r][c];
          if (e > s.value)
            throw std::logic_error("matrix game: column mix above the value");
        }
    }
  }

  matrix_solution
  solve_matrix_game(const std::vector<std::vector<rational>>& a)
  {
    if (a.empty() || a[0].empty())
      throw input_error("empty payoff matrix");
    std::size_t m = a.size(), k = a[0].size();
    // Identical rows/columns first: cheap and usually most of the work.
    std::vector<std::size_t> rows, cols;
    {
      std::map<std::vector<rational>, std::size_t> seen;
      for (std::size_t r = 0; r < m; ++r)
        if (seen.emplace(a[r], r).second)
          rows.push_back(r);
      seen.clear();
      for (std::size_t c = 0; c < k; ++c)
        {
          std::vector<rational> col;
          for (auto r: rows)
            col.push_back(a[r][c]);
          if (seen.emplace(col, c).second)
            cols.push_back(c);
        }
    }
    reduce(a, rows, cols);

    rational lo = a[rows[0]][cols[0]];
    for (auto r: rows)
      for (auto c: cols)
        lo = std::min(lo, a[r][c]);
    rational shift = 1 - lo;                  // entries become >= 1
    matrix b(rows.size(), std::vector<rational>(cols.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < cols.size(); ++j)
        b[i][j] = a[rows[i]][cols[j]] + shift;
    auto [y, x] = simplex(b);
    rational total;
    for (auto& v: y)
      total += v;
    rational vb = 1 / total;

    matrix_solution s;
    s.value = vb - shift;
    s.row_mix.assign(m, 0);
    s.col_mix.assign(k, 0);
    for (std::size_t i = 0; i < rows.size(); ++i)
      s.row_mix[rows[i]] = x[i] * vb;
    for (std::size_t j = 0; j < cols.size(); ++j)
      s.col_mix[cols[j]] = y[j] * vb;
    check_solution(a, s);
    return s;
  }

  matrix_solution
  solve_matrix_game(const payoff_matrix& a)
  {
    std::vector<std::vector<rational>> q(a.rows());
    for (std::size_t r = 0; r < a.rows(); ++r)
      for (auto e: a.entry[r])
        q[r].emplace_back(e ? 1 : 0);
    return solve_matrix_game(q);
  }

  rational
  concurrent_value(const mts& m, const ctl_formula& f,
                   const state_set& sat_states, std::uint64_t cap,
                   unsigned jobs)
  {
    return solve_matrix_game(build_payoff_matrix(m, f, sat_states, cap, jobs))
      .value;
  }

  rational_oracle
  concurrent_oracle(const model& m, const ctl_formula& f, std::uint64_t cap)
  {
    auto sys = std::make_shared<const mts>(m.as_mts());
    auto parts = std::make_shared<const partition>(m.parts);
    return [sys, parts, f, cap](const coalition& c)
    {
      return concurrent_value(*sys, f, parts->states_of(c, sys->num_states()),
                              cap);
    };
  }

  std::string
  matrix_to_csv(const payoff_matrix& a)
  {
    std::ostringstream out;
    out << "row\\col";
    for (auto& c: a.col_labels)
      out << ',' << c;
    out << '\n';
    for (std::size_t r = 0; r < a.rows(); ++r)
      {
        out << a.row_labels[r];
        for (auto e: a.entry[r])
          out << ',' << (e ? 1 : 0);
        out << '\n';
      }
    return out.str();
  }
}
