#pragma once

// Text formats:
//   *.task.json  grounded task, canonical JSON (fixed key order, 2-space indent)
//   *.plan       one action name per line, ';' comments, "; cost = N" trailer

#include <cstddef>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "uniplan/error.hpp"
#include "uniplan/task.hpp"

namespace uniplan {

inline bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  auto head = [](char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
  };
  auto tail = [&](char c) {
    return head(c) || (c >= '0' && c <= '9') || c == '-';
  };
  if (!head(s.front())) return false;
  for (char c : s.substr(1)) {
    if (!tail(c)) return false;
  }
  return true;
}

namespace detail {

inline std::size_t line_of_offset(std::string_view text, std::size_t offset) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

/// Maps JSON pointers ("/actions/2/cost") to the line where the value
/// starts, and rejects duplicate object keys. Assumes `text` is
/// syntactically valid JSON.
class JsonLineIndex {
 public:
  explicit JsonLineIndex(std::string_view text) { scan(text); }

  std::size_t line(const std::string& pointer) const {
    auto it = lines_.find(pointer);
    return it == lines_.end() ? 0 : it->second;
  }

 private:
  struct Frame {
    bool object = false;
    std::size_t index = 0;
    std::string key;
    bool expect_key = false;
    std::set<std::string> keys;
  };

  std::string pointer() const {
    std::string p;
    for (const auto& f : stack_) {
      p += '/';
      p += f.object ? f.key : std::to_string(f.index);
    }
    return p;
  }

  void mark_value(std::size_t line) { lines_.emplace(pointer(), line); }

  void scan(std::string_view text) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < text.size(); ++i) {
      char c = text[i];
      switch (c) {
        case '\n': ++line; break;
        case ' ': case '\t': case '\r': break;
        case '{':
          mark_value(line);
          stack_.push_back(Frame{true, 0, {}, true, {}});
          break;
        case '[':
          mark_value(line);
          stack_.push_back(Frame{false, 0, {}, false, {}});
          break;
        case '}': case ']':
          stack_.pop_back();
          break;
        case ',':
          if (stack_.back().object) {
            stack_.back().expect_key = true;
          } else {
            ++stack_.back().index;
          }
          break;
        case ':':
          stack_.back().expect_key = false;
          break;
        case '"': {
          std::string s;
          std::size_t j = i + 1;
          for (; j < text.size() && text[j] != '"'; ++j) {
            if (text[j] == '\\') ++j;
            s += text[j];
          }
          if (!stack_.empty() && stack_.back().object && stack_.back().expect_key) {
            auto& f = stack_.back();
            if (!f.keys.insert(s).second) {
              throw SyntaxError(line, "duplicate key \"" + s + "\"");
            }
            f.key = s;
          } else {
            mark_value(line);
          }
          i = j;
          break;
        }
        default: {
          mark_value(line);
          while (i + 1 < text.size() &&
                 std::string_view(",]} \t\r\n").find(text[i + 1]) ==
                     std::string_view::npos) {
            ++i;
          }
        }
      }
    }
  }

  std::vector<Frame> stack_;
  std::map<std::string, std::size_t> lines_;
};

}  // namespace detail

inline Task parse_task(std::string_view text) {
  using json = nlohmann::ordered_json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t offset = e.byte == 0 ? 0 : e.byte - 1;
    throw SyntaxError(detail::line_of_offset(text, offset), e.what());
  }
  detail::JsonLineIndex lines(text);
  auto fail = [&](const std::string& ptr, const std::string& msg) {
    return SemanticError(lines.line(ptr), msg);
  };

  if (!doc.is_object()) throw fail("", "top level must be an object");
  static const std::set<std::string> top_keys{"propositions", "actions",
                                              "init", "goal"};
  for (const auto& [k, v] : doc.items()) {
    if (!top_keys.count(k)) throw fail("/" + k, "unknown key \"" + k + "\"");
  }
  for (const auto& k : top_keys) {
    if (!doc.contains(k)) throw fail("", "missing key \"" + k + "\"");
    if (!doc[k].is_array()) throw fail("/" + k, "\"" + k + "\" must be an array");
  }

  std::vector<std::string> props;
  std::map<std::string, PropId> ids;
  for (std::size_t i = 0; i < doc["propositions"].size(); ++i) {
    const auto& v = doc["propositions"][i];
    auto ptr = "/propositions/" + std::to_string(i);
    if (!v.is_string()) throw fail(ptr, "proposition must be a string");
    auto name = v.get<std::string>();
    if (!is_identifier(name)) throw fail(ptr, "invalid proposition name '" + name + "'");
    if (!ids.emplace(name, static_cast<PropId>(props.size())).second) {
      throw fail(ptr, "duplicate proposition '" + name + "'");
    }
    props.push_back(name);
  }

  auto lookup = [&](const std::string& name, const std::string& ptr) {
    auto it = ids.find(name);
    if (it == ids.end()) throw fail(ptr, "unknown proposition '" + name + "'");
    return it->second;
  };
  auto literals = [&](const json& arr, const std::string& ptr) {
    if (!arr.is_array()) throw fail(ptr, "expected an array of literals");
    std::vector<Literal> out;
    std::set<PropId> seen_pos, seen_neg;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      auto p = ptr + "/" + std::to_string(i);
      if (!arr[i].is_string()) throw fail(p, "literal must be a string");
      auto s = arr[i].get<std::string>();
      bool positive = s.empty() || s.front() != '!';
      auto name = positive ? s : s.substr(1);
      auto id = lookup(name, p);
      (positive ? seen_pos : seen_neg).insert(id);
      if (seen_pos.count(id) && seen_neg.count(id)) {
        throw fail(p, "inconsistent literals on '" + name + "'");
      }
      out.push_back({id, positive});
    }
    return out;
  };
  auto propositions = [&](const json& arr, const std::string& ptr) {
    if (!arr.is_array()) throw fail(ptr, "expected an array of propositions");
    std::vector<PropId> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      auto p = ptr + "/" + std::to_string(i);
      if (!arr[i].is_string()) throw fail(p, "proposition must be a string");
      out.push_back(lookup(arr[i].get<std::string>(), p));
    }
    return out;
  };

  static const std::set<std::string> action_keys{"name", "pre", "add", "del",
                                                 "cost"};
  std::vector<Action> actions;
  std::set<std::string> action_names;
  for (std::size_t i = 0; i < doc["actions"].size(); ++i) {
    const auto& v = doc["actions"][i];
    auto ptr = "/actions/" + std::to_string(i);
    if (!v.is_object()) throw fail(ptr, "action must be an object");
    for (const auto& [k, x] : v.items()) {
      if (!action_keys.count(k)) throw fail(ptr + "/" + k, "unknown key \"" + k + "\"");
    }
    if (!v.contains("name") || !v["name"].is_string()) {
      throw fail(ptr, "action needs a string \"name\"");
    }
    Action a;
    a.name = v["name"].get<std::string>();
    if (!is_identifier(a.name)) throw fail(ptr + "/name", "invalid action name '" + a.name + "'");
    if (!action_names.insert(a.name).second) {
      throw fail(ptr + "/name", "duplicate action '" + a.name + "'");
    }
    if (v.contains("pre")) a.pre = literals(v["pre"], ptr + "/pre");
    if (v.contains("add")) a.add = propositions(v["add"], ptr + "/add");
    if (v.contains("del")) a.del = propositions(v["del"], ptr + "/del");
    if (v.contains("cost")) {
      const auto& c = v["cost"];
      if (c.is_number_unsigned()) {
        a.cost = c.get<Cost>();
      } else if (c.is_number_integer()) {
        throw fail(ptr + "/cost", "negative cost");
      } else {
        throw fail(ptr + "/cost", "cost must be a non-negative integer");
      }
      if (a.cost > kMaxStoredCost) throw fail(ptr + "/cost", "cost too large");
    }
    std::set<PropId> add(a.add.begin(), a.add.end());
    for (auto p : a.del) {
      if (add.count(p)) {
        throw fail(ptr, "'" + props[p] + "' is both added and deleted");
      }
    }
    actions.push_back(std::move(a));
  }

  auto init = propositions(doc["init"], "/init");
  auto goal = literals(doc["goal"], "/goal");
  try {
    return Task(std::move(props), std::move(actions), std::move(init),
                std::move(goal));
  } catch (const InvalidTask& e) {
    throw SemanticError(0, e.what());
  }
}

inline std::string literal_text(const Task& task, Literal l) {
  return (l.positive ? "" : "!") + task.prop_name(l.prop);
}

/// Canonical form; byte-identical for structurally equal tasks.
inline std::string serialize_task(const Task& task) {
  using json = nlohmann::ordered_json;
  json doc = json::object();
  doc["propositions"] = task.props();
  json actions = json::array();
  for (const auto& a : task.actions()) {
    json ja = json::object();
    ja["name"] = a.name;
    json pre = json::array();
    for (auto l : a.pre) pre.push_back(literal_text(task, l));
    ja["pre"] = pre;
    json add = json::array();
    for (auto p : a.add) add.push_back(task.prop_name(p));
    ja["add"] = add;
    json del = json::array();
    for (auto p : a.del) del.push_back(task.prop_name(p));
    ja["del"] = del;
    ja["cost"] = a.cost;
    actions.push_back(std::move(ja));
  }
  doc["actions"] = std::move(actions);
  json init = json::array();
  for (auto p : task.init()) init.push_back(task.prop_name(p));
  doc["init"] = init;
  json goal = json::array();
  for (auto l : task.goal()) goal.push_back(literal_text(task, l));
  doc["goal"] = goal;
  return doc.dump(2) + "\n";
}

inline Plan parse_plan(std::string_view text) {
  Plan plan;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    auto line = text.substr(start, end - start);
    auto first = line.find_first_not_of(" \t\r");
    if (first != std::string_view::npos) {
      auto last = line.find_last_not_of(" \t\r");
      line = line.substr(first, last - first + 1);
      if (line.front() != ';') {
        if (!is_identifier(line)) {
          throw SyntaxError(line_no, "invalid action name '" + std::string(line) + "'");
        }
        plan.steps.emplace_back(line);
      }
    }
    if (end == text.size()) break;
    start = end + 1;
  }
  return plan;
}

inline std::string serialize_plan(const Plan& plan, const Task& task) {
  auto cost = plan_cost(task, plan);  // throws UnknownAction
  std::string out;
  for (const auto& s : plan.steps) out += s + "\n";
  out += "; cost = " + std::to_string(cost) + "\n";
  return out;
}

}  // namespace uniplan
