#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mhsos {

/// Runs the command line `args` (without the program name). Reports go to `out`,
/// diagnostics and usage text to `err`. Returns 0 on success, 1 on a domain error and 2 on a
/// usage error.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mhsos
