#pragma once

#include <filesystem>

#include "phirm/metric.hpp"

namespace phirm {

/// Config files are flat `key = value` lines; `#` starts a comment.
/// Keys match the PhirmConfig field names. Unknown keys are an error so a
/// typo cannot silently fall back to a default.
PhirmConfig load_config(const std::filesystem::path& path);

/// Writes every field with a short comment; load_config(save_config(c))
/// round-trips exactly.
void save_config(const std::filesystem::path& path, const PhirmConfig& cfg);

/// Name of the environment variable holding a default config path.
inline constexpr const char* kConfigEnvVar = "PHIRM_CONFIG";

/// Resolution order: explicit path if nonempty, else $PHIRM_CONFIG if set,
/// else built-in defaults.
PhirmConfig resolve_config(const std::filesystem::path& explicit_path);

}  // namespace phirm
