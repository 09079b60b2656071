#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vc::cli {

// Exit codes: 0 accept, 1 reject, 2 malformed input or usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vc::cli
