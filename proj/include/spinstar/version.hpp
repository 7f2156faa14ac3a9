#pragma once

namespace spinstar {

inline constexpr const char* kVersion = "0.1.0";

// Bumped whenever the CSV column set/order or the JSON envelope layout changes.
inline constexpr int kSchemaVersion = 1;

}  // namespace spinstar
