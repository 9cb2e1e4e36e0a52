#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace starfield {

/// Runs one command line (without the program name). Returns 0 on success or
/// a true verdict, 1 on a false verdict, 2 on bad input.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace starfield
