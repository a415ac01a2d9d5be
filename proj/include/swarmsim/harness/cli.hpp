#pragma once

#include <iosfwd>

namespace swarmsim::harness {

inline constexpr int exit_ok = 0;
inline constexpr int exit_config_error = 1;
inline constexpr int exit_runtime_failure = 2;

/// Entry point of the swarmsim tool: `run`, `validate` and `replay`.
/// Reports go to @p out, diagnostics to @p err.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int cli_main(int argc, const char* const* argv);

}  // namespace swarmsim::harness
