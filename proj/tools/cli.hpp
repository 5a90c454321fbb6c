#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace affsob {

// Exit codes: 0 all checks pass, 1 a check failed, 2 configuration error,
// 3 numerical failure.
int cli_main(int argc, char** argv);
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace affsob
