#pragma once

namespace bqcs {

/// Entry point behind the bqcs binary. Never throws and never crashes on
/// malformed input; exit codes: 0 success, 2 usage, 3 invalid configuration,
/// 4 unreadable or malformed file, 5 report verification failure, 1 anything
/// unexpected.
int cli_main(int argc, char** argv);

}  // namespace bqcs
