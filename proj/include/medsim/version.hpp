#pragma once

namespace medsim {

inline constexpr const char* kEngineVersion = "0.1.0";

}  // namespace medsim
