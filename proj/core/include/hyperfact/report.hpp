#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace hyperfact {

// One verified claim in a command report. `residual` carries the measured
// quantity (residual norm or minimal eigenvalue) when there is one.
struct Claim {
  std::string name;
  bool pass = false;
  std::optional<double> residual;
  std::string detail;
};

// Deterministic command report, printable as text or JSON with identical
// content. The exit status of a command is 0 exactly when every claim
// passed, 1 otherwise.
struct ReportDocument {
  std::string command;
  std::vector<std::pair<std::string, std::string>> inputs;  // label, digest
  std::vector<Claim> claims;
  std::string verdict;

  Claim& add(std::string name, bool pass, std::optional<double> residual = std::nullopt,
             std::string detail = {});
  bool passed() const;
  int exit_status() const { return passed() ? 0 : 1; }

  void print_text(std::ostream& out) const;
  std::string to_json_string() const;
};

}  // namespace hyperfact
