#pragma once

namespace gsma {

/// Entry point behind the gsma binary: gen / solve / verify subcommands.
/// Exit codes: 0 success, 2 solver failure or divergence, 3 input error,
/// 4 identity-suite failure.
int run_cli(int argc, const char* const* argv);

}  // namespace gsma
