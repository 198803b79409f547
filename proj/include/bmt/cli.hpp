#pragma once

namespace bmt {

// Exit codes: 0 success, 1 usage error, 2 data or computation error.
int run_cli(int argc, const char* const* argv);

}  // namespace bmt
