#pragma once

#include <json.hpp>

#include <deque>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fillin {

inline constexpr const char* kVersion = "1.0.0";

/// Malformed or inconsistent scenario configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> labels;   // optional leading text column, one per row

  /// Throws NumericalError on non-finite entries.
  void add(std::vector<double> row, std::string label = {});
};

struct Check {
  std::string name;
  int criterion = 0;      // acceptance criterion 1..8, 0 for supporting checks
  double value = 0;
  std::optional<double> min, max;
  bool pass = false;
};

struct Report {
  std::string scenario;
  nlohmann::json config;        // effective parameters, defaults filled in
  std::deque<Table> tables;          // stable references while scenarios append
  std::vector<Check> checks;
  nlohmann::json environment;
  double runtime_seconds = 0;

  bool passed() const;
  nlohmann::json summary() const;
};

struct RunOverrides {
  std::optional<int> grid_n;
  std::optional<double> tol;
};

/// Registry order is fixed.
std::vector<std::string> list_scenarios();

/// Runs one scenario. Unknown keys, wrong types and invalid values raise
/// ConfigError; numerical breakdowns propagate as NumericalError.
Report run_scenario(const std::string& name, const nlohmann::json& config = nlohmann::json::object(),
                    const RunOverrides& overrides = {});

/// Writes <scenario>-<table>.csv for every table and <scenario>-summary.json.
void write_report(const Report& report, const std::filesystem::path& out_dir);

/// 17 significant digits.
std::string format_number(double x);

}  // namespace fillin
