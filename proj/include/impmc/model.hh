#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include <impmc/common.hh>

namespace impmc
{
  using successor_lists = std::vector<std::vector<std::size_t>>;

  /// Finite labeled transition system where every state has a successor.
  struct kripke
  {
    std::vector<std::string> states;
    std::set<std::string> atomic_props;
    successor_lists succ;              // sorted, duplicate-free
    std::size_t init = 0;
    std::vector<std::set<std::string>> labels;

    std::size_t num_states() const noexcept { return states.size(); }
    std::size_t num_transitions() const noexcept;
    std::optional<std::size_t> find_state(std::string_view name) const;
    /// Effective label: a state also satisfies the atom named after it.
    bool holds(std::string_view atom, std::size_t s) const;

    bool operator==(const kripke&) const = default;
  };

  /// Modal transition system: must-transitions are mandatory, may-transitions
  /// optional, and every implementation sits between the two.
  struct mts
  {
    std::vector<std::string> states;
    std::set<std::string> atomic_props;
    successor_lists must;
    successor_lists may;
    std::size_t init = 0;
    std::vector<std::set<std::string>> labels;

    std::size_t num_states() const noexcept { return states.size(); }
    std::optional<std::size_t> find_state(std::string_view name) const;
    bool holds(std::string_view atom, std::size_t s) const;

    bool operator==(const mts&) const = default;
  };

  /// Ordered list of named, disjoint, nonempty parts covering all states.
  struct partition
  {
    std::vector<std::string> names;
    std::vector<std::vector<std::size_t>> parts;

    std::size_t size() const noexcept { return parts.size(); }
    std::optional<std::size_t> find_part(std::string_view name) const;
    /// Union of the parts in \a c, as a set over \a num_states states.
    state_set states_of(const coalition& c, std::size_t num_states) const;
    /// Index of the part containing each state.
    std::vector<std::size_t> part_of(std::size_t num_states) const;

    bool operator==(const partition&) const = default;
  };

  struct model
  {
    std::variant<kripke, mts> system;
    partition parts;

    bool is_mts() const noexcept { return system.index() == 1; }
    const kripke& as_kripke() const;
    const mts& as_mts() const;
    const std::vector<std::string>& states() const;

    bool operator==(const model&) const = default;
  };

  /// Parses a model document (JSON).  Syntax errors report the byte
  /// position; validation errors list every violated invariant.
  model parse_model(std::string_view text);
  model load_model(const std::filesystem::path& path);
  /// Canonical document: keys in schema order, states in declaration order.
  std::string render_model(const model& m);

  partition default_partition(const std::vector<std::string>& states);
  partition default_partition(const model& m);

  std::vector<std::string> validate(const kripke& k);
  std::vector<std::string> validate(const mts& m);
  std::vector<std::string> validate(const partition& p,
                                    const std::vector<std::string>& states);
  std::vector<std::string> validate(const model& m);

  /// Resolves comma-separated part names into a coalition.
  coalition parse_coalition(std::string_view names, const partition& p);
}
