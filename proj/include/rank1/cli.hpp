#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rank1::cli {

// Exit codes: 0 success or certified, 1 input error, 2 not certified.
int run(int argc, char** argv);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rank1::cli
