#ifndef OHMWELL_CLI_HPP
#define OHMWELL_CLI_HPP

/// @file cli.hpp
/// @brief Command-line front end.  Exit codes: 0 success, 1 usage or config
///        error, 2 failed diagnostic or runtime model violation.

namespace ohmwell {

/// Entry point shared by the binary and the tests.  argv follows main()
/// conventions (argv[0] is the program name).
int cli_dispatch(int argc, const char* const* argv);

/// Parallelism cap: OHMWELL_THREADS when set (minimum 1), otherwise the
/// hardware concurrency.
int thread_cap();

} // namespace ohmwell

#endif
