#include "ddm/dataset_io.hpp"

#include <json.hpp>

#include <fstream>
#include <stdexcept>

namespace ddm {

using nlohmann::json;

std::string trial_to_json(const Trial& t) {
  // ordered_json keeps the documented field order in the output
  nlohmann::ordered_json j;
  j["tau"] = t.tau;
  j["choice"] = boundary_name(t.choice);
  j["r_a"] = t.r_a;
  j["r_b"] = t.r_b;
  auto fix = nlohmann::ordered_json::array();
  for (const Fixation& f : t.fixations) {
    nlohmann::ordered_json seg;
    seg["option"] = option_name(f.option);
    seg["duration"] = f.duration;
    fix.push_back(std::move(seg));
  }
  j["fixations"] = std::move(fix);
  return j.dump();
}

Trial trial_from_json(const std::string& line) {
  const json j = json::parse(line);
  Trial t;
  t.tau = j.at("tau").get<double>();
  const std::string choice = j.at("choice").get<std::string>();
  if (choice == "upper") {
    t.choice = Boundary::kUpper;
  } else if (choice == "lower") {
    t.choice = Boundary::kLower;
  } else {
    throw std::runtime_error("dataset: choice must be \"upper\" or \"lower\"");
  }
  t.r_a = j.at("r_a").get<int>();
  t.r_b = j.at("r_b").get<int>();
  for (const json& seg : j.at("fixations")) {
    const std::string o = seg.at("option").get<std::string>();
    if (o != "A" && o != "B") throw std::runtime_error("dataset: option must be \"A\" or \"B\"");
    t.fixations.push_back({o == "A" ? Option::kA : Option::kB, seg.at("duration").get<double>()});
  }
  if (!(t.tau > 0.0)) throw std::runtime_error("dataset: tau must be positive");
  return t;
}

void write_dataset(std::ostream& os, const std::vector<Trial>& trials) {
  for (const Trial& t : trials) os << trial_to_json(t) << '\n';
}

void write_dataset(const std::string& path, const std::vector<Trial>& trials) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  write_dataset(os, trials);
}

std::vector<Trial> read_dataset(std::istream& is) {
  std::vector<Trial> out;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    out.push_back(trial_from_json(line));
  }
  return out;
}

std::vector<Trial> read_dataset(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  return read_dataset(is);
}

}  // namespace ddm
