#pragma once

#include "ddm/simulate.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace ddm {

// One JSON object per line:
//   {"tau":..,"choice":"upper"|"lower","r_a":..,"r_b":..,
//    "fixations":[{"option":"A"|"B","duration":..},...]}
std::string trial_to_json(const Trial& t);
Trial trial_from_json(const std::string& line);

void write_dataset(std::ostream& os, const std::vector<Trial>& trials);
void write_dataset(const std::string& path, const std::vector<Trial>& trials);
std::vector<Trial> read_dataset(std::istream& is);
std::vector<Trial> read_dataset(const std::string& path);

}  // namespace ddm
