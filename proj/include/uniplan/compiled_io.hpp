#pragma once

// *.meta.json sidecar for compiled tasks:
//   {"metric", "order", "W", "omega_d", "delta_mode", "origin"}
// "origin" maps each compiled action name (in action order) to its original
// action name, or null for bookkeeping actions. "delta_mode" is null unless
// the metric is delta.

#include <string>
#include <string_view>

#include "json.hpp"

#include "uniplan/compiler.hpp"
#include "uniplan/task_io.hpp"

namespace uniplan {

inline std::string serialize_meta(const CompiledTask& ct) {
  using json = nlohmann::ordered_json;
  json doc = json::object();
  doc["metric"] = to_string(ct.metric);
  doc["order"] = to_string(ct.scheme.order);
  doc["W"] = ct.scheme.cost_scale;
  doc["omega_d"] = ct.scheme.omega_d;
  doc["delta_mode"] =
      ct.metric == Metric::Delta ? json(to_string(ct.delta_mode)) : json(nullptr);
  json origin = json::object();
  for (std::size_t i = 0; i < ct.origin.size(); ++i) {
    origin[ct.task.action(i).name] = ct.origin[i] ? json(*ct.origin[i]) : json(nullptr);
  }
  doc["origin"] = std::move(origin);
  return doc.dump(2) + "\n";
}

/// Rebuilds a CompiledTask from a compiled task and its sidecar.
inline CompiledTask parse_meta(std::string_view text, Task compiled) {
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
  for (const char* k : {"metric", "order", "W", "omega_d", "delta_mode", "origin"}) {
    if (!doc.contains(k)) throw fail("", std::string("missing key \"") + k + "\"");
  }
  CompiledTask ct;
  try {
    ct.metric = parse_metric(doc["metric"].get<std::string>());
    ct.scheme.order = parse_order(doc["order"].get<std::string>());
    ct.scheme.cost_scale = doc["W"].get<Cost>();
    ct.scheme.omega_d = doc["omega_d"].get<Cost>();
    if (!doc["delta_mode"].is_null()) {
      ct.delta_mode = parse_delta_mode(doc["delta_mode"].get<std::string>());
    }
  } catch (const std::exception& e) {
    throw fail("", e.what());
  }
  if (ct.scheme.cost_scale == 0 || ct.scheme.omega_d == 0) {
    throw fail("", "W and omega_d must be positive");
  }
  const auto& origin = doc["origin"];
  if (!origin.is_object()) throw fail("/origin", "\"origin\" must be an object");
  if (origin.size() != compiled.actions().size()) {
    throw fail("/origin", "origin covers " + std::to_string(origin.size()) +
                              " actions, task has " +
                              std::to_string(compiled.actions().size()));
  }
  ct.origin.resize(compiled.actions().size());
  for (const auto& [name, v] : origin.items()) {
    auto id = compiled.find_action(name);
    if (!id) throw fail("/origin/" + name, "unknown compiled action '" + name + "'");
    if (v.is_string()) {
      ct.origin[*id] = v.get<std::string>();
    } else if (!v.is_null()) {
      throw fail("/origin/" + name, "origin must be a string or null");
    }
  }
  ct.task = std::move(compiled);
  return ct;
}

}  // namespace uniplan
