#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <impmc/branching.hh>

namespace impmc
{
  /// 0/1 outcomes: rows are Sat pure strategies, columns Unsat ones, both
  /// in strategy_space order.
  struct payoff_matrix
  {
    std::vector<std::string> row_labels, col_labels;
    std::vector<std::vector<char>> entry;          // [row][col]

    std::size_t rows() const noexcept { return entry.size(); }
    std::size_t cols() const noexcept { return entry.empty() ? 0 : entry[0].size(); }
  };

  constexpr std::uint64_t default_matrix_cap = std::uint64_t{1} << 22;

  payoff_matrix build_payoff_matrix(const mts& m, const ctl_formula& f,
                                    const state_set& sat_states,
                                    std::uint64_t cap = default_matrix_cap,
                                    unsigned jobs = 1);

  /// Optimal mixed strategies of the zero-sum game, Sat maximizing.
  struct matrix_solution
  {
    rational value;
    std::vector<rational> row_mix, col_mix;
  };

  /// Exact simplex after dominated rows and columns are removed.  The
  /// mixes are checked against every pure reply before returning.
  matrix_solution solve_matrix_game(const payoff_matrix& a);
  matrix_solution solve_matrix_game(const std::vector<std::vector<rational>>& a);

  rational concurrent_value(const mts& m, const ctl_formula& f,
                            const state_set& sat_states,
                            std::uint64_t cap = default_matrix_cap,
                            unsigned jobs = 1);

  rational_oracle concurrent_oracle(const model& m, const ctl_formula& f,
                                    std::uint64_t cap = default_matrix_cap);

  /// "row\col" header with column labels, then one line per row.
  std::string matrix_to_csv(const payoff_matrix& a);
}
