#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include <impmc/common.hh>
#include <impmc/model.hh>
#include <impmc/solve.hh>
#include <impmc/spec.hh>

namespace impmc
{
  /// Value of a coalition of parts.  Must be safe to call concurrently.
  using binary_oracle = std::function<bool(const coalition&)>;
  using rational_oracle = std::function<rational(const coalition&)>;

  /// Thread-safe memo of coalition values in front of an oracle.  With
  /// paranoid set, every hit is re-solved and compared.
  class value_cache
  {
  public:
    explicit value_cache(binary_oracle oracle, bool paranoid = false);

    bool value(const coalition& c);
    std::optional<bool> lookup(const coalition& c) const;
    void insert(const coalition& c, bool v);

    std::size_t hits() const noexcept { return hits_; }
    std::size_t solves() const noexcept { return solves_; }

  private:
    binary_oracle oracle_;
    bool paranoid_;
    mutable std::shared_mutex mutex_;
    std::map<coalition, bool> values_;
    std::atomic<std::size_t> hits_ = 0, solves_ = 0;
  };

  struct importance_options
  {
    /// Most non-forced parts the exact engines accept.
    std::size_t max_exact_parts = 20;
    /// Disables forced-part pruning, usefulness restriction and monotone
    /// value inference; cached values are re-solved.
    bool paranoid = false;
    /// Worker threads; 0 means hardware concurrency.
    unsigned jobs = 0;
  };

  struct part_importance
  {
    std::string name;
    rational importance;
    /// importance times n! (n = all parts); integral for 0/1 values.
    rational times_nfact;
    bool useful = false;
    bool forced = false;                  // structurally pruned
    /// Critical coalitions J by |J|, over the universe the computation
    /// ran on (useful parts, or every part when paranoid).
    std::vector<bigint> critical_by_size;
    /// Sampling only: 95% Wilson interval.
    std::optional<std::pair<double, double>> interval;
  };

  struct importance_report
  {
    std::string engine;                   // game, two-turn, dual, concurrent
    std::string method;                   // exact, sampled
    std::size_t n = 0;
    rational val_full, val_empty;
    std::vector<part_importance> parts;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    /// Sampling only: per-batch switch counts per part.
    std::vector<std::vector<std::uint64_t>> batch_counts;
  };

  /// Parts whose states have no choice to make (one successor, or may
  /// equal to must): their owner never matters.
  std::vector<std::size_t> prune_forced_parts(const model& m);

  /// Exact Shapley values of a 0/1 game, restricted to useful parts.
  importance_report importance_exact(std::size_t n, const binary_oracle& v,
                                     const std::vector<std::string>& names,
                                     const std::vector<std::size_t>& forced,
                                     const importance_options& opt = {});

  /// Exact Shapley values of a game with rational values, computed over
  /// the subset lattice of the non-forced parts.
  importance_report importance_fractional(std::size_t n,
                                          const rational_oracle& v,
                                          const std::vector<std::string>& names,
                                          const std::vector<std::size_t>& forced,
                                          const importance_options& opt = {});

  /// Monte-Carlo estimate over random give-up orders of the non-forced
  /// parts.  Deterministic in \a seed whatever the thread count.
  importance_report importance_sampled(std::size_t n, const binary_oracle& v,
                                       const std::vector<std::string>& names,
                                       const std::vector<std::size_t>& forced,
                                       std::size_t samples, std::uint64_t seed,
                                       const importance_options& opt = {});

  /// Literal average over all n! orders, no pruning (n <= 8).
  std::vector<rational> importance_brute_oracle(std::size_t n,
                                                const rational_oracle& v);
  /// Critical-pair sum over every J, no pruning (n <= 16).
  std::vector<rational> importance_critical_sum(std::size_t n,
                                                const binary_oracle& v);

  /// A critical pair (i, J) of part i, or nothing when i is not useful.
  std::optional<coalition> find_critical_pair(std::size_t n, std::size_t i,
                                              const binary_oracle& v,
                                              const std::vector<std::size_t>& forced,
                                              bool paranoid = false);

  /// All critical J for part i over the non-forced parts.
  std::vector<coalition> critical_pairs(std::size_t n, std::size_t i,
                                        const binary_oracle& v,
                                        const std::vector<std::size_t>& forced);

  /// Value oracle of the turn-based game: Sat controls the coalition's
  /// states and wins from the initial state.
  binary_oracle game_oracle(const linear_game& g, solve_options opt = {});

  std::string report_to_json(const importance_report& r);
  importance_report report_from_json(std::string_view text);
  std::string report_to_table(const importance_report& r);

  /// 0 means hardware concurrency (at least 1).
  unsigned resolve_jobs(unsigned jobs);
}
