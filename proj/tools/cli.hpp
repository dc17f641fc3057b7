#pragma once

#include <ostream>

namespace htlab::cli {

// Exit status: 0 success, 1 domain error, 2 usage or malformed input.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace htlab::cli
