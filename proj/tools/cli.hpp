#pragma once

#include <iosfwd>

namespace scp {

// Exit codes: 0 grammatical / success, 1 not grammatical, 2 usage or input error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace scp
