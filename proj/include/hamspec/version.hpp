#pragma once

namespace hamspec {

inline constexpr const char* kToolkitVersion = "0.1.0";

}  // namespace hamspec
