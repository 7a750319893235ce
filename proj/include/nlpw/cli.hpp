#pragma once

namespace nlpw::cli {

/// Entry point behind the binary: parses argv, dispatches subcommands,
/// returns the process exit code (0 success, 1 runtime/check failure,
/// 2 usage error).
int run(int argc, const char* const* argv);

/// Parallelism cap: NLPW_THREADS when set (>=1), hardware concurrency
/// otherwise.
int thread_cap();

} // namespace nlpw::cli
