#pragma once

namespace ftn {

// Batch entry point behind the `ftnsim` binary; also callable in-process by
// tests. Exit codes: 0 success, 2 configuration/parse error, 3 runtime error.
int cli_main(int argc, const char* const* argv);

}  // namespace ftn
