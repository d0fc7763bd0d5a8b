#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace jiosm {

/// Names of the embedded configurations: fig2 … fig6 and their _desk variants.
const std::vector<std::string>& preset_names();

bool is_preset(std::string_view name);

/// INI text of a preset. Throws std::invalid_argument for unknown names.
const std::string& preset_text(std::string_view name);

}  // namespace jiosm
