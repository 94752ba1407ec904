#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "thermolens/coupled.hpp"
#include "thermolens/verification.hpp"

namespace thermolens {

// Manufactured-solution settings for the verify subcommands.
struct MmsSettings {
  ManufacturedSolution solution;
  std::vector<std::pair<int, double>> levels;  // (n, dt)
};

struct ConfigDocument {
  SimConfig sim;
  std::optional<MmsSettings> mms;
};

// INI-style text: [section] headers, `key = value` lines, '#' or ';'
// comments. Unknown sections or keys are rejected with their line number.
ConfigDocument parse_document(std::string_view text);
SimConfig parse_config(std::string_view text);
ConfigDocument load_config(const std::filesystem::path& path);

// Canonical rendering; parse_config(render_config(c)) == c.
std::string render_config(const SimConfig& cfg);

// Applies `section.key = value` on top of a parsed document (sweeps).
ConfigDocument apply_override(std::string_view text, const std::string& dotted_key,
                              const std::string& value);

}  // namespace thermolens
