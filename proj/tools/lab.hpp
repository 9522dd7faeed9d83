#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gdag::lab {

/// Exit codes: 0 computed, 1 a checked property or condition failed,
/// 2 usage or input error (one-line diagnostic on `err`).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace gdag::lab
