#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace pdc {

struct PresetInfo {
  std::string name;
  std::string type;  // run, sweep, compare, couplings
  std::string description;
};

std::vector<PresetInfo> list_presets();
bool has_preset(const std::string& name);
// Throws ConfigError for unknown names.
nlohmann::json preset_json(const std::string& name);

}  // namespace pdc
