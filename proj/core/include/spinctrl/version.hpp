#pragma once

namespace spinctrl {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace spinctrl
