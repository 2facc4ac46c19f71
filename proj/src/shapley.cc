#include <impmc/shapley.hh>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <mutex>
#include <numeric>
#include <random>
#include <sstream>

#include <json.hpp>

#include <impmc/detail/parallel.hh>

namespace impmc
{
  using json = nlohmann::ordered_json;

  unsigned
  resolve_jobs(unsigned jobs)
  {
    if (jobs)
      return jobs;
    return std::max(1u, std::thread::hardware_concurrency());
  }

  // ---------------------------------------------------------------------

  value_cache::value_cache(binary_oracle oracle, bool paranoid)
    : oracle_(std::move(oracle)), paranoid_(paranoid)
  {
  }

  std::optional<bool>
  value_cache::lookup(const coalition& c) const
  {
    std::shared_lock lock(mutex_);
    auto it = values_.find(c);
    if (it == values_.end())
      return std::nullopt;
    return it->second;
  }

  void
  value_cache::insert(const coalition& c, bool v)
  {
    std::unique_lock lock(mutex_);
    auto [it, fresh] = values_.emplace(c, v);
    if (!fresh && it->second != v)
      throw std::logic_error("value cache: conflicting values for one "
                             "coalition");
  }

  bool
  value_cache::value(const coalition& c)
  {
    if (auto v = lookup(c))
      {
        ++hits_;
        if (paranoid_ && oracle_(c) != *v)
          throw std::logic_error("value cache: memoized value does not "
                                 "re-solve identically");
        return *v;
      }
    ++solves_;
    bool v = oracle_(c);
    insert(c, v);
    return v;
  }

  // ---------------------------------------------------------------------

  std::vector<std::size_t>
  prune_forced_parts(const model& m)
  {
    std::vector<std::size_t> out;
    auto forced_state = [&](std::size_t s)
    {
      if (m.is_mts())
        return m.as_mts().must[s] == m.as_mts().may[s];
      return m.as_kripke().succ[s].size() == 1;
    };
    for (std::size_t i = 0; i < m.parts.size(); ++i)
      if (std::all_of(m.parts.parts[i].begin(), m.parts.parts[i].end(),
                      forced_state))
        out.push_back(i);
    return out;
  }

  namespace
  {
    rational
    shapley_weight(std::size_t j, std::size_t m)
    {
      return rational(factorial(static_cast<unsigned>(j))
                      * factorial(static_cast<unsigned>(m - j - 1)),
                      factorial(static_cast<unsigned>(m)));
    }

    // Parts the computation ranges over.
    std::vector<std::size_t>
    universe(std::size_t n, const std::vector<std::size_t>& forced,
             bool paranoid)
    {
      std::vector<std::size_t> u;
      for (std::size_t i = 0; i < n; ++i)
        if (paranoid || std::find(forced.begin(), forced.end(), i)
            == forced.end())
          u.push_back(i);
      return u;
    }

    coalition
    to_coalition(std::size_t n, const std::vector<std::size_t>& u,
                 std::uint64_t mask)
    {
      coalition c(n);
      for (std::size_t j = 0; j < u.size(); ++j)
        if ((mask >> j) & 1)
          c.set(u[j]);
      return c;
    }

    // Masks over k bits by increasing popcount, then increasing value.
    std::vector<std::vector<std::uint32_t>>
    levels(std::size_t k)
    {
      std::vector<std::vector<std::uint32_t>> lv(k + 1);
      for (std::uint32_t m = 0; m < (std::uint32_t{1} << k); ++m)
        lv[std::popcount(m)].push_back(m);
      return lv;
    }

    void
    check_cap(std::size_t k, const importance_options& opt)
    {
      if (k > opt.max_exact_parts || k > 30)
        throw cap_exceeded(std::to_string(k) + " parts exceed the exact "
                           "limit of "
                           + std::to_string(std::min<std::size_t>(
                                              opt.max_exact_parts, 30))
                           + "; use --sample N for an estimate");
    }

    // All 2^k values of a 0/1 game; monotone inference unless paranoid.
    std::vector<char>
    binary_lattice(std::size_t n, const std::vector<std::size_t>& u,
                   const binary_oracle& v, const importance_options& opt)
    {
      std::size_t k = u.size();
      std::uint32_t top = (std::uint32_t{1} << k) - 1;
      std::vector<signed char> val(std::size_t{top} + 1, -1);
      unsigned jobs = resolve_jobs(opt.jobs);
      auto eval = [&](std::uint32_t m) { return v(to_coalition(n, u, m)); };
      if (!opt.paranoid)
        {
          val[0] = eval(0);
          val[top] = eval(top);
          if (val[0] == 1 || val[top] == 0)
            std::fill(val.begin(), val.end(), val[0] == 1 ? 1 : 0);
        }
      for (auto& level: levels(k))
        {
          std::vector<std::uint32_t> todo;
          for (auto m: level)
            {
              if (val[m] >= 0)
                continue;
              if (!opt.paranoid)
                for (std::size_t j = 0; j < k; ++j)
                  if (((m >> j) & 1) && val[m & ~(1u << j)] == 1)
                    {
                      val[m] = 1;
                      break;
                    }
              if (val[m] < 0)
                todo.push_back(m);
            }
          detail::parallel_for(todo.size(), jobs, [&](std::size_t i)
            {
              val[todo[i]] = eval(todo[i]);
            });
        }
      return {val.begin(), val.end()};
    }

    std::vector<rational>
    rational_lattice(std::size_t n, const std::vector<std::size_t>& u,
                     const rational_oracle& v, const importance_options& opt)
    {
      std::size_t count = std::size_t{1} << u.size();
      std::vector<rational> val(count);
      detail::parallel_for(count, resolve_jobs(opt.jobs), [&](std::size_t m)
        {
          val[m] = v(to_coalition(n, u, m));
        });
      return val;
    }

    part_importance
    blank_part(const std::vector<std::string>& names, std::size_t i)
    {
      part_importance p;
      p.name = i < names.size() ? names[i] : std::to_string(i);
      return p;
    }

    // Critical-pair counts by |J| for bit i, over J within \a within.
    std::vector<bigint>
    critical_counts(const std::vector<char>& val, std::size_t k,
                    std::size_t i, std::uint32_t within)
    {
      std::vector<bigint> by_size(k, 0);
      std::uint32_t bit = 1u << i;
      for (std::uint32_t m = 0; m < val.size(); ++m)
        if (!(m & bit) && (m & ~within) == 0 && !val[m] && val[m | bit])
          ++by_size[std::popcount(m)];
      return by_size;
    }
  }

  importance_report
  importance_exact(std::size_t n, const binary_oracle& v,
                   const std::vector<std::string>& names,
                   const std::vector<std::size_t>& forced,
                   const importance_options& opt)
  {
    auto u = universe(n, forced, opt.paranoid);
    std::size_t k = u.size();
    check_cap(k, opt);
    auto val = binary_lattice(n, u, v, opt);
    std::uint32_t all = static_cast<std::uint32_t>(val.size() - 1);

    // Parts with a critical pair anywhere in the lattice.
    std::uint32_t useful = 0;
    for (std::size_t j = 0; j < k; ++j)
      {
        auto c = critical_counts(val, k, j, all);
        if (std::any_of(c.begin(), c.end(), [](auto& x) { return x != 0; }))
          useful |= 1u << j;
      }
    std::uint32_t within = opt.paranoid ? all : useful;
    std::size_t m = std::popcount(within);

    importance_report r;
    r.engine = "game";
    r.method = "exact";
    r.n = n;
    r.val_full = val[all];
    r.val_empty = val[0];
    auto nfact = factorial(static_cast<unsigned>(n));
    for (std::size_t i = 0; i < n; ++i)
      {
        auto p = blank_part(names, i);
        auto pos = std::find(u.begin(), u.end(), i);
        if (pos == u.end())
          {
            p.forced = true;
            p.critical_by_size.assign(1, 0);
          }
        else
          {
            std::size_t j = pos - u.begin();
            p.critical_by_size = critical_counts(val, k, j, within);
            p.critical_by_size.resize(std::max<std::size_t>(m, 1));
            if ((within >> j) & 1)
              for (std::size_t s = 0; s < m; ++s)
                if (p.critical_by_size[s] != 0)
                  p.importance += rational(p.critical_by_size[s])
                    * shapley_weight(s, m);
          }
        p.useful = p.importance > 0;
        p.times_nfact = p.importance * nfact;
        r.parts.push_back(std::move(p));
      }
    return r;
  }

  importance_report
  importance_fractional(std::size_t n, const rational_oracle& v,
                        const std::vector<std::string>& names,
                        const std::vector<std::size_t>& forced,
                        const importance_options& opt)
  {
    auto u = universe(n, forced, opt.paranoid);
    std::size_t k = u.size();
    check_cap(k, opt);
    auto val = rational_lattice(n, u, v, opt);
    importance_report r;
    r.engine = "fractional";
    r.method = "exact";
    r.n = n;
    r.val_full = val.back();
    r.val_empty = val.front();
    auto nfact = factorial(static_cast<unsigned>(n));
    for (std::size_t i = 0; i < n; ++i)
      {
        auto p = blank_part(names, i);
        auto pos = std::find(u.begin(), u.end(), i);
        if (pos == u.end())
          {
            p.forced = true;
            p.critical_by_size.assign(1, 0);
          }
        else
          {
            std::uint32_t bit = 1u << (pos - u.begin());
            p.critical_by_size.assign(std::max<std::size_t>(k, 1), 0);
            for (std::uint32_t m = 0; m < val.size(); ++m)
              if (!(m & bit) && val[m | bit] != val[m])
                {
                  auto s = std::popcount(m);
                  ++p.critical_by_size[s];
                  p.importance += (val[m | bit] - val[m]) * shapley_weight(s, k);
                }
          }
        p.useful = p.importance > 0;
        p.times_nfact = p.importance * nfact;
        r.parts.push_back(std::move(p));
      }
    return r;
  }

  namespace
  {
    std::uint64_t
    splitmix64(std::uint64_t x)
    {
      x += 0x9e3779b97f4a7c15ULL;
      x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
      x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
      return x ^ (x >> 31);
    }

    std::pair<double, double>
    wilson(std::uint64_t hits, std::uint64_t total)
    {
      const double z = 1.959963984540054;
      double nn = static_cast<double>(total);
      double p = hits / nn;
      double denom = 1 + z * z / nn;
      double centre = (p + z * z / (2 * nn)) / denom;
      double half = z * std::sqrt(p * (1 - p) / nn + z * z / (4 * nn * nn))
        / denom;
      return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
    }

    constexpr std::size_t sample_batch = 1000;
  }

  importance_report
  importance_sampled(std::size_t n, const binary_oracle& v,
                     const std::vector<std::string>& names,
                     const std::vector<std::size_t>& forced,
                     std::size_t samples, std::uint64_t seed,
                     const importance_options& opt)
  {
    if (samples == 0)
      throw input_error("the sample count must be positive");
    auto u = universe(n, forced, opt.paranoid);
    std::size_t k = u.size();
    value_cache cache(v, opt.paranoid);
    coalition none(n), full(n);
    for (auto i: u)
      full.set(i);
    bool vfull = cache.value(full), vempty = cache.value(none);

    std::size_t batches = (samples + sample_batch - 1) / sample_batch;
    std::vector<std::vector<std::uint64_t>> counts(
      batches, std::vector<std::uint64_t>(n, 0));
    bool trivial = !opt.paranoid && (vfull == vempty);
    detail::parallel_for(batches, resolve_jobs(opt.jobs), [&](std::size_t b)
      {
        std::size_t size = std::min(sample_batch, samples - b * sample_batch);
        if (trivial)
          return;
        std::mt19937_64 rng(splitmix64(seed ^ splitmix64(b)));
        std::vector<std::size_t> order(u);
        for (std::size_t s = 0; s < size; ++s)
          {
            std::shuffle(order.begin(), order.end(), rng);
            // Coalition after giving up the first j parts of the order.
            auto after = [&](std::size_t j)
            {
              coalition c = full;
              for (std::size_t x = 0; x < j; ++x)
                c.reset(order[x]);
              return c;
            };
            if (opt.paranoid)
              {
                bool prev = vfull;
                for (std::size_t j = 1; j <= k; ++j)
                  {
                    bool cur = cache.value(after(j));
                    if (prev && !cur)
                      ++counts[b][order[j - 1]];
                    prev = cur;
                  }
                continue;
              }
            // Monotone: the value drops exactly once; find where.
            std::size_t lo = 0, hi = k;       // value(lo) = 1, value(hi) = 0
            while (hi - lo > 1)
              {
                std::size_t mid = (lo + hi) / 2;
                (cache.value(after(mid)) ? lo : hi) = mid;
              }
            ++counts[b][order[hi - 1]];
          }
      });

    importance_report r;
    r.engine = "game";
    r.method = "sampled";
    r.n = n;
    r.val_full = vfull;
    r.val_empty = vempty;
    r.samples = samples;
    r.seed = seed;
    r.batch_counts = counts;
    auto nfact = factorial(static_cast<unsigned>(n));
    for (std::size_t i = 0; i < n; ++i)
      {
        auto p = blank_part(names, i);
        p.forced = std::find(u.begin(), u.end(), i) == u.end();
        std::uint64_t total = 0;
        for (auto& c: counts)
          total += c[i];
        p.importance = rational(total, samples);
        p.times_nfact = p.importance * nfact;
        p.useful = total > 0;
        p.interval = wilson(total, samples);
        r.parts.push_back(std::move(p));
      }
    return r;
  }

  std::vector<rational>
  importance_brute_oracle(std::size_t n, const rational_oracle& v)
  {
    if (n > 8)
      throw cap_exceeded("the permutation oracle is limited to 8 parts");
    std::vector<std::optional<rational>> memo(std::size_t{1} << n);
    auto value = [&](std::uint32_t m) -> const rational&
    {
      if (!memo[m])
        {
          coalition c(n);
          for (std::size_t j = 0; j < n; ++j)
            if ((m >> j) & 1)
              c.set(j);
          memo[m] = v(c);
        }
      return *memo[m];
    };
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<rational> sum(n);
    do
      {
        // Parts after position j form T; part perm[j] switches T.
        std::uint32_t after = 0;
        for (std::size_t j = n; j-- > 0;)
          {
            std::uint32_t with = after | (1u << perm[j]);
            sum[perm[j]] += value(with) - value(after);
            after = with;
          }
      }
    while (std::next_permutation(perm.begin(), perm.end()));
    rational nf(factorial(static_cast<unsigned>(n)));
    for (auto& s: sum)
      s /= nf;
    return sum;
  }

  std::vector<rational>
  importance_critical_sum(std::size_t n, const binary_oracle& v)
  {
    if (n > 16)
      throw cap_exceeded("the critical-pair sum is limited to 16 parts");
    std::vector<char> val(std::size_t{1} << n);
    for (std::uint32_t m = 0; m < val.size(); ++m)
      {
        coalition c(n);
        for (std::size_t j = 0; j < n; ++j)
          if ((m >> j) & 1)
            c.set(j);
        val[m] = v(c);
      }
    std::vector<rational> out(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::uint32_t m = 0; m < val.size(); ++m)
        if (!((m >> i) & 1) && !val[m] && val[m | (1u << i)])
          out[i] += shapley_weight(std::popcount(m), n);
    return out;
  }

  std::optional<coalition>
  find_critical_pair(std::size_t n, std::size_t i, const binary_oracle& v,
                     const std::vector<std::size_t>& forced, bool paranoid)
  {
    if (!paranoid && std::find(forced.begin(), forced.end(), i) != forced.end())
      return std::nullopt;
    auto u = universe(n, forced, paranoid);
    u.erase(std::remove(u.begin(), u.end(), i), u.end());
    if (u.size() > 30)
      throw cap_exceeded("usefulness search over more than 30 parts");
    value_cache cache(v, paranoid);
    for (auto& level: levels(u.size()))
      for (auto m: level)
        {
          auto j = to_coalition(n, u, m);
          auto with = j;
          with.set(i);
          if (cache.value(with) && !cache.value(j))
            return j;
        }
    return std::nullopt;
  }

  std::vector<coalition>
  critical_pairs(std::size_t n, std::size_t i, const binary_oracle& v,
                 const std::vector<std::size_t>& forced)
  {
    std::vector<coalition> out;
    if (std::find(forced.begin(), forced.end(), i) != forced.end())
      return out;
    auto u = universe(n, forced, false);
    importance_options opt;
    check_cap(u.size(), opt);
    auto val = binary_lattice(n, u, v, opt);
    std::size_t k = u.size();
    std::uint32_t all = static_cast<std::uint32_t>(val.size() - 1);
    std::uint32_t useful = 0;
    for (std::size_t j = 0; j < k; ++j)
      {
        auto c = critical_counts(val, k, j, all);
        if (std::any_of(c.begin(), c.end(), [](auto& x) { return x != 0; }))
          useful |= 1u << j;
      }
    std::uint32_t bit = 1u << (std::find(u.begin(), u.end(), i) - u.begin());
    for (auto& level: levels(k))
      for (auto m: level)
        if (!(m & bit) && (m & ~useful) == 0 && !val[m] && val[m | bit])
          out.push_back(to_coalition(n, u, m));
    return out;
  }

  binary_oracle
  game_oracle(const linear_game& g, solve_options opt)
  {
    auto game = std::make_shared<const linear_game>(g);
    return [game, opt](const coalition& c)
    {
      auto a = build_arena(game->system, game->parts, c);
      return solve_game(a, game->cond, opt).win_sat.test(a.init);
    };
  }

  // ---------------------------------------------------------------------
  // Serialization.

  namespace
  {
    std::string
    big_string(const bigint& x)
    {
      return x.str();
    }

    json
    fraction(const rational& q)
    {
      return {{"num", big_string(numerator(q))},
              {"den", big_string(denominator(q))}};
    }

    rational
    read_fraction(const json& j)
    {
      auto num = j.at("num").get<std::string>();
      auto den = j.at("den").get<std::string>();
      return parse_rational(num + "/" + den);
    }

    std::string
    exact_string(const rational& q)
    {
      return denominator(q) == 1 ? big_string(numerator(q)) : to_string(q);
    }
  }

  std::string
  report_to_json(const importance_report& r)
  {
    json j;
    j["engine"] = r.engine;
    j["method"] = r.method;
    j["n"] = r.n;
    j["val_full"] = fraction(r.val_full);
    j["val_empty"] = fraction(r.val_empty);
    if (r.method == "sampled")
      {
        j["samples"] = r.samples;
        j["seed"] = r.seed;
        j["batch_counts"] = r.batch_counts;
      }
    json parts = json::array();
    for (auto& p: r.parts)
      {
        json q;
        q["name"] = p.name;
        q["importance"] = fraction(p.importance);
        q["importance_decimal"] = to_decimal(p.importance, 6);
        q["useful"] = p.useful;
        q["n_factorial_times_importance"] = exact_string(p.times_nfact);
        q["forced"] = p.forced;
        json cp = json::array();
        for (auto& c: p.critical_by_size)
          cp.push_back(big_string(c));
        q["critical_pairs_by_size"] = cp;
        if (p.interval)
          q["interval_95"] = {p.interval->first, p.interval->second};
        parts.push_back(q);
      }
    j["parts"] = parts;
    return j.dump(2) + "\n";
  }

  importance_report
  report_from_json(std::string_view text)
  {
    try
      {
        auto j = json::parse(text);
        importance_report r;
        r.engine = j.at("engine").get<std::string>();
        r.method = j.at("method").get<std::string>();
        r.n = j.at("n").get<std::size_t>();
        r.val_full = read_fraction(j.at("val_full"));
        r.val_empty = read_fraction(j.at("val_empty"));
        if (j.contains("samples"))
          {
            r.samples = j.at("samples").get<std::size_t>();
            r.seed = j.at("seed").get<std::uint64_t>();
            r.batch_counts = j.at("batch_counts")
              .get<std::vector<std::vector<std::uint64_t>>>();
          }
        for (auto& q: j.at("parts"))
          {
            part_importance p;
            p.name = q.at("name").get<std::string>();
            p.importance = read_fraction(q.at("importance"));
            p.useful = q.at("useful").get<bool>();
            p.times_nfact =
              parse_rational(q.at("n_factorial_times_importance")
                             .get<std::string>());
            p.forced = q.at("forced").get<bool>();
            for (auto& c: q.at("critical_pairs_by_size"))
              p.critical_by_size.emplace_back(c.get<std::string>());
            if (q.contains("interval_95"))
              p.interval = std::pair{q["interval_95"][0].get<double>(),
                                     q["interval_95"][1].get<double>()};
            r.parts.push_back(std::move(p));
          }
        return r;
      }
    catch (const json::exception& e)
      {
        throw input_error(std::string("malformed report: ") + e.what());
      }
  }

  std::string
  report_to_table(const importance_report& r)
  {
    bool sampled = r.method == "sampled";
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> head = {"part", "importance", "decimal",
                                     "n!*I", "useful"};
    if (sampled)
      head.push_back("95% interval");
    rows.push_back(head);
    for (auto& p: r.parts)
      {
        std::vector<std::string> row = {
          p.name, exact_string(p.importance), to_decimal(p.importance, 6),
          exact_string(p.times_nfact),
          p.forced ? "no (forced)" : p.useful ? "yes" : "no"};
        if (sampled)
          {
            std::ostringstream iv;
            iv << std::fixed << std::setprecision(4) << '['
               << p.interval->first << ", " << p.interval->second << ']';
            row.push_back(iv.str());
          }
        rows.push_back(std::move(row));
      }
    std::vector<std::size_t> width(head.size(), 0);
    for (auto& row: rows)
      for (std::size_t c = 0; c < row.size(); ++c)
        width[c] = std::max(width[c], row[c].size());
    std::ostringstream out;
    out << "engine: " << r.engine << " (" << r.method;
    if (sampled)
      out << ", " << r.samples << " samples, seed " << r.seed;
    out << ")\n";
    out << "parts: " << r.n << "  value(all): " << exact_string(r.val_full)
        << "  value(none): " << exact_string(r.val_empty) << "\n";
    for (std::size_t i = 0; i < rows.size(); ++i)
      {
        for (std::size_t c = 0; c < rows[i].size(); ++c)
          {
            if (c + 1 == rows[i].size())
              out << rows[i][c];          // no trailing padding
            else
              out << std::left << std::setw(static_cast<int>(width[c]))
                  << rows[i][c] << "  ";
          }
        out << "\n";
      }
    return out.str();
  }
}
