#ifndef STBCLAB_CLI_HPP
#define STBCLAB_CLI_HPP

#include <iostream>

namespace stbclab::cli {

// Exit codes: 0 success / criteria passed, 1 criterion failure or aborted
// run, 2 usage or config error.
int run(int argc, const char* const* argv, std::ostream& out = std::cout,
        std::ostream& err = std::cerr);

} // namespace stbclab::cli

#endif
