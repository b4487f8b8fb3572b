#include "parashear/report.hpp"

namespace parashear {

void WitnessReport::finalize() { pass = terminal_ok && first_failing_window() == nullptr; }

const WindowRecord* WitnessReport::first_failing_window() const {
  for (const auto& w : windows)
    if (w.fraction < 1.0 - epsilon) return &w;
  return nullptr;
}

nlohmann::json to_json(const WindowRecord& w) {
  return {{"L", w.L},
          {"p_L", w.p_L},
          {"fraction", w.fraction},
          {"max_distance", w.max_distance},
          {"samples", w.samples}};
}

nlohmann::json to_json(const WitnessReport& r) {
  nlohmann::json j;
  j["experiment"] = r.experiment;
  j["inputs"] = r.inputs;
  j["epsilon"] = r.epsilon;
  j["kappa"] = r.kappa;
  j["M"] = r.M ? nlohmann::json(*r.M) : nlohmann::json(nullptr);
  j["p_M"] = r.p_M ? nlohmann::json(*r.p_M) : nlohmann::json(nullptr);
  j["terminal_ok"] = r.terminal_ok;
  j["windows"] = nlohmann::json::array();
  for (const auto& w : r.windows) j["windows"].push_back(to_json(w));
  j["assumptions"] = r.assumptions;
  j["residuals"] = r.residuals;
  j["notes"] = r.notes;
  j["pass"] = r.pass;
  return j;
}

std::string dump_report(const nlohmann::json& body) {
  nlohmann::json out = body;
  out["schema"] = kReportSchema;
  return out.dump(2) + "\n";
}

}  // namespace parashear
