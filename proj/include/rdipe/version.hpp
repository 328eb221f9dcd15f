#pragma once

namespace rdipe {

inline constexpr const char *kVersion = "0.1.0";

}  // namespace rdipe
