#include "hyperfact/report.hpp"

#include <iomanip>

#include <json.hpp>

namespace hyperfact {

Claim& ReportDocument::add(std::string name, bool pass, std::optional<double> residual,
                           std::string detail) {
  claims.push_back(Claim{std::move(name), pass, residual, std::move(detail)});
  return claims.back();
}

bool ReportDocument::passed() const {
  for (const auto& claim : claims) {
    if (!claim.pass) return false;
  }
  return true;
}

void ReportDocument::print_text(std::ostream& out) const {
  out << command << "\n";
  for (const auto& [label, digest] : inputs) {
    out << "  input " << label << " fnv1a=" << digest << "\n";
  }
  for (const auto& claim : claims) {
    out << "  [" << (claim.pass ? "pass" : "FAIL") << "] " << std::left
        << std::setw(32) << claim.name << std::right;
    if (claim.residual) {
      out << " " << std::scientific << std::setprecision(3) << *claim.residual
          << std::defaultfloat;
    }
    if (!claim.detail.empty()) {
      out << "  " << claim.detail;
    }
    out << "\n";
  }
  if (!verdict.empty()) {
    out << "verdict: " << verdict << "\n";
  }
}

std::string ReportDocument::to_json_string() const {
  nlohmann::json doc;
  doc["command"] = command;
  nlohmann::json in = nlohmann::json::object();
  for (const auto& [label, digest] : inputs) in[label] = digest;
  doc["inputs"] = std::move(in);
  nlohmann::json list = nlohmann::json::array();
  for (const auto& claim : claims) {
    nlohmann::json entry;
    entry["claim"] = claim.name;
    entry["verdict"] = claim.pass ? "pass" : "fail";
    if (claim.residual) entry["residual"] = *claim.residual;
    if (!claim.detail.empty()) entry["detail"] = claim.detail;
    list.push_back(std::move(entry));
  }
  doc["claims"] = std::move(list);
  doc["verdict"] = verdict;
  doc["status"] = exit_status();
  return doc.dump(2) + "\n";
}

}  // namespace hyperfact
