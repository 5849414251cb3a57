#pragma once

namespace aoisim {

inline constexpr const char* kVersion = "0.1.0";
// Version of the JSON/CSV output schemas emitted by the CLI.
inline constexpr const char* kSchemaVersion = "1";

}  // namespace aoisim
