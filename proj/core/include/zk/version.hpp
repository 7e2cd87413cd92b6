#pragma once

namespace zk {
inline constexpr const char* kVersion = "0.1.0";
}
