#include "modfactor/report.hpp"

#include <sstream>

namespace modfactor {

bool Report::pass() const {
  if (!verdict || error) return false;
  for (const auto& [name, d] : defects) {
    if (!(d <= config.verify_tol)) return false;
  }
  for (const auto& [name, ok] : checks) {
    if (!ok) return false;
  }
  return true;
}

Json Report::to_json() const {
  Json out{{"command", command}, {"pass", pass()}};
  Json d = Json::object();
  for (const auto& [k, v] : defects) d[k] = v;
  out["defects"] = std::move(d);
  Json dm = Json::object();
  for (const auto& [k, v] : dims) dm[k] = v;
  out["dims"] = std::move(dm);
  if (!values.empty()) {
    Json vals = Json::object();
    for (const auto& [k, v] : values) vals[k] = v;
    out["values"] = std::move(vals);
  }
  if (!checks.empty()) {
    Json c = Json::object();
    for (const auto& [k, v] : checks) c[k] = v;
    out["checks"] = std::move(c);
  }
  out["config"] = Json{{"psd_tol", config.psd_tol},
                       {"rank_tol", config.rank_tol},
                       {"verify_tol", config.verify_tol}};
  if (seed) out["seed"] = *seed;
  if (error) out["error"] = *error;
  return out;
}

std::string Report::to_text() const {
  std::ostringstream os;
  os.precision(6);
  os << "command: " << command << "\n";
  os << "pass: " << (pass() ? "true" : "false") << "\n";
  if (error) os << "error: " << *error << "\n";
  for (const auto& [k, v] : defects) os << "defect." << k << ": " << v << "\n";
  for (const auto& [k, v] : values) os << "value." << k << ": " << v << "\n";
  for (const auto& [k, v] : dims) os << "dim." << k << ": " << v << "\n";
  for (const auto& [k, v] : checks) os << "check." << k << ": " << (v ? "true" : "false") << "\n";
  os << "verify_tol: " << config.verify_tol << "\n";
  if (seed) os << "seed: " << *seed << "\n";
  return os.str();
}

}  // namespace modfactor
