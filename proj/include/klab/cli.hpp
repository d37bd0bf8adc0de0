#pragma once

namespace klab {

inline constexpr const char* kToolVersion = "klab 1.0.0";

// Full command-line front end; exit codes: 0 success, 1 math/runtime error,
// 2 usage error. Kept in the library so tests can drive the real surface
// in-process.
int cli_main(int argc, const char* const* argv);

} // namespace klab
