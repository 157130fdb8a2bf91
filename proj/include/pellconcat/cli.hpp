#pragma once

namespace pellconcat {

// Exit codes: 0 success, 2 usage, 3 precision exhaustion, 4 certificate
// failure, 5 table mismatch.
int run_cli(int argc, const char* const* argv);

}  // namespace pellconcat
