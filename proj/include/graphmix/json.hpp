#pragma once

#include <nlohmann/json.hpp>

#include "graphmix/rewire.hpp"

namespace graphmix {

inline void to_json(nlohmann::json& j, const ChainStats& s) {
  j = nlohmann::json{{"steps", s.steps},
                     {"applied", s.applied},
                     {"rejected", s.rejected},
                     {"mode", std::string(to_string(s.mode))},
                     {"seed", s.seed}};
}

inline void from_json(const nlohmann::json& j, ChainStats& s) {
  j.at("steps").get_to(s.steps);
  j.at("applied").get_to(s.applied);
  j.at("rejected").get_to(s.rejected);
  s.mode = parse_swap_mode(j.at("mode").get<std::string>());
  j.at("seed").get_to(s.seed);
}

}  // namespace graphmix
