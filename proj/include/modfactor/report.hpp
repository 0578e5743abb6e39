#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "modfactor/numerics.hpp"
#include "modfactor/serialize.hpp"

namespace modfactor {

/// Outcome of one CLI command. `pass` holds only if the command's own
/// verdict is positive and every defect is within verify_tol.
struct Report {
  std::string command;
  bool verdict = true;
  std::vector<std::pair<std::string, double>> defects;
  std::vector<std::pair<std::string, long long>> dims;
  std::vector<std::pair<std::string, double>> values;  // informational
  std::vector<std::pair<std::string, bool>> checks;
  NumericConfig config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> error;

  bool pass() const;
  Json to_json() const;
  std::string to_text() const;
};

}  // namespace modfactor
