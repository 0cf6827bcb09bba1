#pragma once

namespace ep {

// Library version, echoed into serialized results and returned by the C API.
inline constexpr const char* kVersion = "1.0.0";

}  // namespace ep
