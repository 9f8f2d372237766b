#pragma once

namespace daybt {

inline constexpr const char* kToolName = "daybt";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kConfigFormat = "kv1";

} // namespace daybt
