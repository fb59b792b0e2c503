#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace pts {

// Exit codes: 0 success, 1 negative verdict, 2 usage error, 3 unknown or out of fuel.
int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace pts
