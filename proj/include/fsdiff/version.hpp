#pragma once

namespace fsdiff {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace fsdiff
