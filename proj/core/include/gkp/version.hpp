#pragma once

namespace gkp {

inline constexpr const char* version_string() noexcept { return "1.0.0"; }

// Bumped whenever a CSV column set or the JSON summary layout changes
// incompatibly. Documented in docs/formats.md.
inline constexpr int output_schema_version() noexcept { return 1; }

}  // namespace gkp
