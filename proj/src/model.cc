#include <impmc/model.hh>

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace impmc
{
  using ojson = nlohmann::ordered_json;

  namespace
  {
    std::optional<std::size_t>
    index_of(const std::vector<std::string>& names, std::string_view name)
    {
      auto it = std::find(names.begin(), names.end(), name);
      if (it == names.end())
        return std::nullopt;
      return static_cast<std::size_t>(it - names.begin());
    }

    bool
    has_atom(const std::vector<std::string>& states,
             const std::vector<std::set<std::string>>& labels,
             std::string_view atom, std::size_t s)
    {
      if (states[s] == atom)
        return true;
      return labels[s].find(std::string(atom)) != labels[s].end();
    }

    void
    normalize(successor_lists& succ)
    {
      for (auto& l: succ)
        {
          std::sort(l.begin(), l.end());
          l.erase(std::unique(l.begin(), l.end()), l.end());
        }
    }

    [[noreturn]] void
    fail_validation(const std::vector<std::string>& violations)
    {
      std::string msg = "invalid model:";
      for (auto& v: violations)
        msg += "\n  " + v;
      throw input_error(msg);
    }

    const ojson&
    require(const ojson& doc, const char* key)
    {
      auto it = doc.find(key);
      if (it == doc.end())
        throw input_error(std::string("missing key \"") + key + "\"");
      return *it;
    }

    std::string
    as_name(const ojson& j, const char* what)
    {
      if (!j.is_string())
        throw input_error(std::string(what) + " must be a string, got "
                          + j.dump());
      return j.get<std::string>();
    }

    successor_lists
    read_edges(const ojson& arr, const std::vector<std::string>& states,
               const char* key, std::vector<std::string>& errors)
    {
      successor_lists succ(states.size());
      if (!arr.is_array())
        throw input_error(std::string("\"") + key + "\" must be an array");
      for (auto& e: arr)
        {
          if (!e.is_array() || e.size() != 2)
            throw input_error(std::string("malformed edge in \"") + key
                              + "\": " + e.dump());
          auto src = as_name(e[0], "edge endpoint");
          auto dst = as_name(e[1], "edge endpoint");
          auto s = index_of(states, src);
          auto t = index_of(states, dst);
          if (!s)
            errors.push_back("edge (" + src + "," + dst + ") in \"" + key
                             + "\" uses unknown state " + src);
          if (!t)
            errors.push_back("edge (" + src + "," + dst + ") in \"" + key
                             + "\" uses unknown state " + dst);
          if (s && t)
            succ[*s].push_back(*t);
        }
      normalize(succ);
      return succ;
    }

    ojson
    write_edges(const successor_lists& succ,
                const std::vector<std::string>& states)
    {
      ojson arr = ojson::array();
      for (std::size_t s = 0; s < succ.size(); ++s)
        for (auto t: succ[s])
          arr.push_back(ojson::array({states[s], states[t]}));
      return arr;
    }
  }

  std::size_t
  kripke::num_transitions() const noexcept
  {
    std::size_t n = 0;
    for (auto& l: succ)
      n += l.size();
    return n;
  }

  std::optional<std::size_t>
  kripke::find_state(std::string_view name) const
  {
    return index_of(states, name);
  }

  bool
  kripke::holds(std::string_view atom, std::size_t s) const
  {
    return has_atom(states, labels, atom, s);
  }

  std::optional<std::size_t>
  mts::find_state(std::string_view name) const
  {
    return index_of(states, name);
  }

  bool
  mts::holds(std::string_view atom, std::size_t s) const
  {
    return has_atom(states, labels, atom, s);
  }

  std::optional<std::size_t>
  partition::find_part(std::string_view name) const
  {
    return index_of(names, name);
  }

  state_set
  partition::states_of(const coalition& c, std::size_t num_states) const
  {
    state_set res(num_states);
    for (auto i = c.find_first(); i != coalition::npos; i = c.find_next(i))
      for (auto s: parts[i])
        res.set(s);
    return res;
  }

  std::vector<std::size_t>
  partition::part_of(std::size_t num_states) const
  {
    std::vector<std::size_t> res(num_states, 0);
    for (std::size_t i = 0; i < parts.size(); ++i)
      for (auto s: parts[i])
        res[s] = i;
    return res;
  }

  const kripke&
  model::as_kripke() const
  {
    if (auto* k = std::get_if<kripke>(&system))
      return *k;
    throw input_error("expected a Kripke structure, got a modal "
                      "transition system");
  }

  const mts&
  model::as_mts() const
  {
    if (auto* m = std::get_if<mts>(&system))
      return *m;
    throw input_error("expected a modal transition system, got a Kripke "
                      "structure");
  }

  const std::vector<std::string>&
  model::states() const
  {
    return std::visit([](auto& s) -> const std::vector<std::string>&
                      { return s.states; }, system);
  }

  model
  parse_model(std::string_view text)
  {
    ojson doc;
    try
      {
        doc = ojson::parse(text.begin(), text.end());
      }
    catch (const nlohmann::json::parse_error& e)
      {
        throw input_error("syntax error at byte " + std::to_string(e.byte)
                          + ": " + e.what());
      }
    if (!doc.is_object())
      throw input_error("model document must be a JSON object");

    auto type = as_name(require(doc, "type"), "\"type\"");
    if (type != "kripke" && type != "mts")
      throw input_error("\"type\" must be \"kripke\" or \"mts\", got \""
                        + type + "\"");

    std::vector<std::string> errors;
    std::vector<std::string> states;
    auto& jstates = require(doc, "states");
    if (!jstates.is_array())
      throw input_error("\"states\" must be an array");
    for (auto& s: jstates)
      states.push_back(as_name(s, "state identifier"));

    std::size_t init = 0;
    auto init_name = as_name(require(doc, "init"), "\"init\"");
    if (auto i = index_of(states, init_name))
      init = *i;
    else
      errors.push_back("init " + init_name + " is not a state");

    std::vector<std::set<std::string>> labels(states.size());
    std::set<std::string> props;
    if (auto it = doc.find("labels"); it != doc.end())
      {
        if (!it->is_object())
          throw input_error("\"labels\" must be an object");
        for (auto& [name, arr]: it->items())
          {
            auto s = index_of(states, name);
            if (!s)
              {
                errors.push_back("label given for unknown state " + name);
                continue;
              }
            if (!arr.is_array())
              throw input_error("label of " + name + " must be an array");
            for (auto& p: arr)
              {
                auto prop = as_name(p, "proposition");
                labels[*s].insert(prop);
                props.insert(prop);
              }
          }
      }

    model res;
    if (type == "kripke")
      {
        if (doc.contains("must") || doc.contains("may"))
          throw input_error("\"must\"/\"may\" are only allowed in mts "
                            "documents");
        kripke k;
        k.states = states;
        k.atomic_props = props;
        k.init = init;
        k.labels = labels;
        k.succ = read_edges(require(doc, "transitions"), states,
                            "transitions", errors);
        res.system = std::move(k);
      }
    else
      {
        if (doc.contains("transitions"))
          throw input_error("\"transitions\" is only allowed in kripke "
                            "documents");
        mts m;
        m.states = states;
        m.atomic_props = props;
        m.init = init;
        m.labels = labels;
        m.must = read_edges(require(doc, "must"), states, "must", errors);
        m.may = read_edges(require(doc, "may"), states, "may", errors);
        res.system = std::move(m);
      }

    if (auto it = doc.find("partition"); it != doc.end())
      {
        if (!it->is_object())
          throw input_error("\"partition\" must be an object");
        for (auto& [name, arr]: it->items())
          {
            if (!arr.is_array())
              throw input_error("part " + name + " must be an array");
            std::vector<std::size_t> part;
            for (auto& s: arr)
              {
                auto sname = as_name(s, "state identifier");
                if (auto i = index_of(states, sname))
                  part.push_back(*i);
                else
                  errors.push_back("part " + name + " uses unknown state "
                                   + sname);
              }
            res.parts.names.push_back(name);
            res.parts.parts.push_back(std::move(part));
          }
      }
    else
      res.parts = default_partition(states);

    if (!errors.empty())
      fail_validation(errors);
    if (auto v = validate(res); !v.empty())
      fail_validation(v);
    return res;
  }

  model
  load_model(const std::filesystem::path& path)
  {
    std::ifstream in(path);
    if (!in)
      throw input_error("cannot open model file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_model(buf.str());
  }

  std::string
  render_model(const model& m)
  {
    ojson doc;
    auto& states = m.states();
    doc["type"] = m.is_mts() ? "mts" : "kripke";
    doc["states"] = states;
    std::visit([&](auto& sys)
               {
                 doc["init"] = states[sys.init];
                 ojson labels = ojson::object();
                 for (std::size_t s = 0; s < states.size(); ++s)
                   if (!sys.labels[s].empty())
                     labels[states[s]] = ojson(std::vector<std::string>
                                               (sys.labels[s].begin(),
                                                sys.labels[s].end()));
                 doc["labels"] = labels;
               }, m.system);
    if (auto* k = std::get_if<kripke>(&m.system))
      doc["transitions"] = write_edges(k->succ, states);
    else
      {
        auto& t = std::get<mts>(m.system);
        doc["must"] = write_edges(t.must, states);
        doc["may"] = write_edges(t.may, states);
      }
    ojson part = ojson::object();
    for (std::size_t i = 0; i < m.parts.size(); ++i)
      {
        ojson arr = ojson::array();
        for (auto s: m.parts.parts[i])
          arr.push_back(states[s]);
        part[m.parts.names[i]] = arr;
      }
    doc["partition"] = part;
    return doc.dump(2) + "\n";
  }

  partition
  default_partition(const std::vector<std::string>& states)
  {
    partition p;
    for (std::size_t s = 0; s < states.size(); ++s)
      {
        p.names.push_back(states[s]);
        p.parts.push_back({s});
      }
    return p;
  }

  partition
  default_partition(const model& m)
  {
    return default_partition(m.states());
  }

  namespace
  {
    void
    validate_common(const std::vector<std::string>& states,
                    const std::set<std::string>& props, std::size_t init,
                    const std::vector<std::set<std::string>>& labels,
                    std::vector<std::string>& out)
    {
      if (states.empty())
        out.push_back("model has no states");
      std::set<std::string> seen;
      for (auto& s: states)
        if (!seen.insert(s).second)
          out.push_back("state identifier " + s + " is not unique");
      if (init >= states.size())
        out.push_back("init is not a state");
      if (labels.size() != states.size())
        out.push_back("labeling does not cover every state");
      for (std::size_t s = 0; s < labels.size() && s < states.size(); ++s)
        for (auto& p: labels[s])
          if (!props.count(p))
            out.push_back("label of " + states[s]
                          + " uses undeclared proposition " + p);
    }

    void
    validate_edges(const successor_lists& succ, std::size_t n,
                   const char* what, std::vector<std::string>& out)
    {
      if (succ.size() != n)
        out.push_back(std::string(what) + " relation does not cover every "
                      "state");
      for (auto& l: succ)
        for (auto t: l)
          if (t >= n)
            {
              out.push_back(std::string(what) + " relation targets a "
                            "missing state");
              return;
            }
    }
  }

  std::vector<std::string>
  validate(const kripke& k)
  {
    std::vector<std::string> out;
    validate_common(k.states, k.atomic_props, k.init, k.labels, out);
    validate_edges(k.succ, k.states.size(), "transition", out);
    for (std::size_t s = 0; s < k.succ.size() && s < k.states.size(); ++s)
      if (k.succ[s].empty())
        out.push_back("state " + k.states[s] + " has no successor");
    return out;
  }

  std::vector<std::string>
  validate(const mts& m)
  {
    std::vector<std::string> out;
    validate_common(m.states, m.atomic_props, m.init, m.labels, out);
    validate_edges(m.must, m.states.size(), "must", out);
    validate_edges(m.may, m.states.size(), "may", out);
    if (!out.empty())
      return out;
    for (std::size_t s = 0; s < m.states.size(); ++s)
      {
        if (m.must[s].empty())
          out.push_back("state " + m.states[s] + " has no must successor");
        for (auto t: m.must[s])
          if (!std::binary_search(m.may[s].begin(), m.may[s].end(), t))
            out.push_back("must ⊄ may at (" + m.states[s] + ","
                          + m.states[t] + ")");
      }
    return out;
  }

  std::vector<std::string>
  validate(const partition& p, const std::vector<std::string>& states)
  {
    std::vector<std::string> out;
    if (p.names.size() != p.parts.size())
      out.push_back("partition names and parts disagree in number");
    std::set<std::string> names;
    for (auto& n: p.names)
      if (!names.insert(n).second)
        out.push_back("part name " + n + " is not unique");
    std::vector<int> owner(states.size(), -1);
    for (std::size_t i = 0; i < p.parts.size(); ++i)
      {
        std::string name = i < p.names.size() ? p.names[i] : "#" +
          std::to_string(i);
        if (p.parts[i].empty())
          out.push_back("part " + name + " is empty");
        for (auto s: p.parts[i])
          {
            if (s >= states.size())
              {
                out.push_back("part " + name + " uses a missing state");
                continue;
              }
            if (owner[s] >= 0 && owner[s] != static_cast<int>(i))
              out.push_back("state " + states[s] + " belongs to parts "
                            + p.names[owner[s]] + " and " + name);
            else if (owner[s] == static_cast<int>(i))
              out.push_back("state " + states[s] + " listed twice in part "
                            + name);
            owner[s] = static_cast<int>(i);
          }
      }
    for (std::size_t s = 0; s < states.size(); ++s)
      if (owner[s] < 0)
        out.push_back("state " + states[s] + " is in no part");
    return out;
  }

  std::vector<std::string>
  validate(const model& m)
  {
    auto out = std::visit([](auto& s) { return validate(s); }, m.system);
    auto p = validate(m.parts, m.states());
    out.insert(out.end(), p.begin(), p.end());
    return out;
  }

  coalition
  parse_coalition(std::string_view names, const partition& p)
  {
    coalition c(p.size());
    std::size_t pos = 0;
    while (pos <= names.size())
      {
        auto comma = names.find(',', pos);
        auto item = names.substr(pos, comma == std::string_view::npos
                                 ? std::string_view::npos : comma - pos);
        while (!item.empty() && item.front() == ' ')
          item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ')
          item.remove_suffix(1);
        if (!item.empty())
          {
            auto i = p.find_part(item);
            if (!i)
              throw input_error("unknown part \"" + std::string(item) + "\"");
            c.set(*i);
          }
        if (comma == std::string_view::npos)
          break;
        pos = comma + 1;
      }
    return c;
  }
}
