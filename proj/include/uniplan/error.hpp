#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace uniplan {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed task: dangling references, duplicate names, add/del overlap...
struct InvalidTask : Error {
  using Error::Error;
};

struct NotApplicable : Error {
  std::size_t step;
  NotApplicable(std::size_t step_index, const std::string& action)
      : Error("action '" + action + "' not applicable at step " +
              std::to_string(step_index)),
        step(step_index) {}
};

struct UnknownAction : Error {
  explicit UnknownAction(const std::string& name)
      : Error("unknown action '" + name + "'") {}
};

struct EmptyVector : Error {
  EmptyVector() : Error("empty cost vector") {}
};

/// Parse diagnostics. Line numbers are 1-based; 0 means "whole document".
struct ParseError : Error {
  std::size_t line;
  ParseError(std::size_t at_line, const std::string& msg)
      : Error("line " + std::to_string(at_line) + ": " + msg), line(at_line) {}
};

struct SyntaxError : ParseError {
  using ParseError::ParseError;
};

struct SemanticError : ParseError {
  using ParseError::ParseError;
};

struct EmptyTask : Error {
  EmptyTask() : Error("task has no actions") {}
};

struct BoundViolation : Error {
  using Error::Error;
};

struct DecodeMismatch : Error {
  using Error::Error;
};

struct EmptyPlanSet : Error {
  EmptyPlanSet() : Error("empty plan set") {}
};

struct Incomplete : Error {
  using Error::Error;
};

struct InvalidSpec : Error {
  using Error::Error;
};

struct TargetUnreachable : Error {
  using Error::Error;
};

struct CostOverflow : Error {
  using Error::Error;
};

}  // namespace uniplan
