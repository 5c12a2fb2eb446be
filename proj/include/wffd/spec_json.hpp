#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "wffd/fading.hpp"

namespace wffd {

// Parsed distribution spec, e.g.
//   {"family":"antipodal"}
//   {"family":"geometric","q":0.5}
//   {"family":"strong_set","c":3,"M":3}
//   {"family":"fat_tail","c":3,"M":4}
//   {"family":"discrete","points":[[-1,0.5],[1,0.5]]}
//   {"family":"point_mass","m":1}
//   {"family":"truncated_gaussian","center":0.5,"halfwidth":0.4,"sigma":0.2}
//   {"family":"log_uniform","lo":1,"hi":2.718}
//   {"family":"uniform","lo":0,"hi":1}
// Doubles are serialized shortest-round-trip, so parse(render(s)) == s.
struct DistSpec {
  std::string family;
  std::map<std::string, double> scalars;
  std::vector<std::pair<double, double>> points;

  bool operator==(const DistSpec&) const = default;
};

DistSpec parse_spec(const std::string& json_text);
std::string render_spec(const DistSpec& spec);
FadingDistribution build_distribution(const DistSpec& spec);
FadingDistribution parse_distribution_spec(const std::string& json_text);

}  // namespace wffd
