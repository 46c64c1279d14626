#pragma once

#include <stdexcept>
#include <string>

namespace ndist {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidPoint : Error { using Error::Error; };
struct ParameterError : Error { using Error::Error; };
struct ConjugacyError : Error { using Error::Error; };
struct HomomorphismError : Error { using Error::Error; };
struct BudgetExceeded : Error { using Error::Error; };
struct MeasureError : Error { using Error::Error; };
struct RefinementError : Error { using Error::Error; };
struct ConstructionError : Error { using Error::Error; };

// scenario parse / validation failure; line is 1-based, 0 when not tied to a line
struct ScenarioError : Error {
  ScenarioError(int line, const std::string& msg)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg), line(line) {}
  int line;
};

}  // namespace ndist
