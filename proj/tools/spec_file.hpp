#pragma once

// System spec files: JSON descriptions of a quantum system or of a
// single-mode feedback component.

#include <optional>
#include <string>

#include "json.hpp"
#include "qlinz/errors.hpp"
#include "qlinz/feedback.hpp"
#include "qlinz/system.hpp"

namespace qlinz::cli {

using Json = nlohmann::ordered_json;

/// Malformed spec file or command line (exit code 2).
class UsageError : public Error {
 public:
  using Error::Error;
};

enum class SpecKind { params, annihilation, quadrature, quad_plant };

std::string to_string(SpecKind k);

struct SystemSpec {
  std::string source;
  std::string name;
  SpecKind kind = SpecKind::params;
  /// Every entry was an integer or a "p/q" string.
  bool exact = false;
  /// The spec as read, echoed into reports.
  Json echo;
  std::optional<StateSpace> system;
  std::optional<QuadPlantParams> plant;
};

/// Parses spec text. With `require_exact`, floating-point entries raise
/// ExactnessError instead of producing a floating-point system.
SystemSpec parse_spec(const std::string& text, const std::string& source, bool require_exact);

SystemSpec load_spec(const std::string& path, bool require_exact);

}  // namespace qlinz::cli
