#pragma once

#include <json.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace ddm {

// String key-value settings with typed lookup. Every lookup records the value
// actually used so it can be written to the provenance sidecar.
class Settings {
 public:
  // "key = value" lines; '#' starts a comment; blank lines ignored.
  static Settings from_file(const std::string& path);

  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const;

  double number(const std::string& key, double fallback);
  std::uint64_t integer(const std::string& key, std::uint64_t fallback);
  std::string text(const std::string& key, const std::string& fallback);
  bool flag(const std::string& key, bool fallback);
  std::vector<double> numbers(const std::string& key, const std::vector<double>& fallback);

  // Values of the keys looked up so far, in lookup order.
  const nlohmann::ordered_json& used() const { return used_; }
  // Keys that were set but never looked up.
  std::vector<std::string> unused() const;

 private:
  std::map<std::string, std::string> values_;
  nlohmann::ordered_json used_ = nlohmann::ordered_json::object();
  std::map<std::string, bool> touched_;
};

struct ExperimentReport {
  bool converged = true;
  std::vector<std::string> files;
};

// Each experiment writes <out>/<name>.csv plus <out>/<name>.json (provenance).
// Recognised keys are documented in the README.
ExperimentReport run_table1(Settings& s, const std::string& out_dir);
ExperimentReport run_table2(Settings& s, const std::string& out_dir);
ExperimentReport run_fig1(Settings& s, const std::string& out_dir);
ExperimentReport run_fig2(Settings& s, const std::string& out_dir);

// Fixed-format number for CSV output (shortest round-trip form).
std::string format_number(double v);

}  // namespace ddm
