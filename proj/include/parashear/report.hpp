#pragma once

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace parashear {

inline constexpr int kReportSchema = 1;

/// One window [L, L + kappa L] of a witness check.
struct WindowRecord {
  double L = 0.0;
  double p_L = 0.0;           // shift applied on this window
  double fraction = 0.0;      // fraction of samples within epsilon
  double max_distance = 0.0;  // largest sampled distance
  std::size_t samples = 0;
};

/// Checkable transcript of a witness construction.
///
/// pass holds iff every window fraction is >= 1 - epsilon and the terminal
/// shift condition holds; call finalize() after filling it in.
struct WitnessReport {
  std::string experiment;
  nlohmann::json inputs = nlohmann::json::object();
  double epsilon = 0.0;
  double kappa = 0.0;
  std::optional<double> M;
  std::optional<double> p_M;
  bool terminal_ok = false;
  std::vector<WindowRecord> windows;
  std::map<std::string, bool> assumptions;
  std::map<std::string, double> residuals;
  std::vector<std::string> notes;
  bool pass = false;

  /// Recomputes pass from the windows and terminal_ok.
  void finalize();
  /// First window with fraction < 1 - epsilon, if any.
  const WindowRecord* first_failing_window() const;
};

nlohmann::json to_json(const WindowRecord& w);
nlohmann::json to_json(const WitnessReport& r);

/// Serializes with schema version, sorted keys and a trailing newline.
std::string dump_report(const nlohmann::json& body);

}  // namespace parashear
