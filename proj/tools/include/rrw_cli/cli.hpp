#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rrw::cli {

// exit codes: 0 success, 1 violations or failed cells, 2 invalid input
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rrw::cli
