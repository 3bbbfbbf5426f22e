#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace lavanet {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownParameter : public Error {
 public:
  explicit UnknownParameter(std::string name);
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

/// Raised when a parameter set fails validation. Carries every violation,
/// not only the first one.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

class InvalidDistributionParams : public Error { using Error::Error; };
class GridMismatch : public Error { using Error::Error; };
class NonSquare : public Error { using Error::Error; };
class ShapeMismatch : public Error { using Error::Error; };
class PerCoreOutOfRange : public Error { using Error::Error; };
class InconsistentChunkShapes : public Error { using Error::Error; };
class CsrFormatError : public Error { using Error::Error; };

class ParseError : public Error {
 public:
  ParseError(std::size_t position, std::string expected);
  std::size_t position() const { return position_; }
  const std::string& expected() const { return expected_; }

 private:
  std::size_t position_;
  std::string expected_;
};

class UnknownVariable : public Error { using Error::Error; };

class WindowOverflow : public Error { using Error::Error; };
class InvalidLeaveOut : public Error { using Error::Error; };
class SquareOutOfBounds : public Error { using Error::Error; };
class RegionsDontFit : public Error { using Error::Error; };

class IncompleteRun : public Error { using Error::Error; };
class HookTooLate : public Error { using Error::Error; };

/// Wraps an error raised while an experiment was in a given lifecycle phase.
class PhaseError : public Error {
 public:
  PhaseError(std::string phase, const std::string& what);
  const std::string& phase() const { return phase_; }

 private:
  std::string phase_;
};

}  // namespace lavanet
