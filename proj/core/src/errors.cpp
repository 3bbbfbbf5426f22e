#include "lavanet/errors.hpp"

#include <utility>

namespace lavanet {

namespace {

std::string joinViolations(const std::vector<std::string>& violations) {
  std::string out = "invalid parameters:";
  for (const auto& v : violations) {
    out += "\n  - ";
    out += v;
  }
  return out;
}

}  // namespace

UnknownParameter::UnknownParameter(std::string name)
    : Error("unknown parameter '" + name + "'"), name_(std::move(name)) {}

ValidationError::ValidationError(std::vector<std::string> violations)
    : Error(joinViolations(violations)), violations_(std::move(violations)) {}

ParseError::ParseError(std::size_t position, std::string expected)
    : Error("parse error at position " + std::to_string(position) + ": expected " + expected),
      position_(position),
      expected_(std::move(expected)) {}

PhaseError::PhaseError(std::string phase, const std::string& what)
    : Error(phase + ": " + what), phase_(std::move(phase)) {}

}  // namespace lavanet
