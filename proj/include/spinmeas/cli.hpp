#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace spinmeas {

// args excludes the program name; returns the process exit code:
// 0 success, 2 rejected input, 1 internal failure
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace spinmeas
