#pragma once

namespace convo {

inline constexpr const char* kLibraryVersion = "0.1.0";

// Version of the result-record and config schema emitted by the experiment
// layer. Bump when a field changes meaning, not for additions.
inline constexpr int kSpecVersion = 1;

}  // namespace convo
