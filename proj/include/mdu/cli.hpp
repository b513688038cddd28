#pragma once

namespace mdu {

/// Entry point behind the mdu binary. Exit codes: 0 success, 1 usage,
/// 2 data error, 3 numerical failure.
int cli_main(int argc, const char* const* argv);

}  // namespace mdu
