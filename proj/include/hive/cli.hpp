#pragma once

#include <ostream>

namespace hive {

// Entry point of the `hive` tool. Returns 0 on success, 1 on domain or usage
// errors and 2 on solver failures.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

} // namespace hive
