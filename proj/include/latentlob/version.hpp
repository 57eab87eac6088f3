#pragma once

namespace latentlob {

inline constexpr const char* kVersion = "latentlob 0.1.0";

}  // namespace latentlob
